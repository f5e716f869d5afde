// Copyright 2026 The softlabel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace softlabel {

enum class ErrorCode {
    MalformedRecord,
    MissingLabelFile,
    DuplicateImageId,
    UnknownCategory,
    DatasetMismatch,
    NoGroundTruth,
    EmptyInput,
    BadConfig,
    UndefinedDelta,
    EmptySelection,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `locator()` names the offending
/// record ("labels/a.txt:3", "feature 17") when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string locator = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& locator() const noexcept { return locator_; }

private:
    ErrorCode code_;
    std::string locator_;
};

/// CLI exit status for an error: 2 for malformed input, 3 for configuration.
int exit_code(ErrorCode code);

[[noreturn]] void fail(ErrorCode code, const std::string& message, std::string locator = {});

}  // namespace softlabel
