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

#include "softlabel/error.hpp"
#include "softlabel/logging.hpp"

#include <cstdlib>
#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace softlabel {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::MissingLabelFile: return "MissingLabelFile";
    case ErrorCode::DuplicateImageId: return "DuplicateImageId";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::DatasetMismatch: return "DatasetMismatch";
    case ErrorCode::NoGroundTruth: return "NoGroundTruth";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::UndefinedDelta: return "UndefinedDelta";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, const std::string& locator)
{
    std::string out(to_string(code));
    if (!locator.empty()) {
        out += " at ";
        out += locator;
    }
    out += ": ";
    out += message;
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string locator)
    : std::runtime_error(compose(code, message, locator)), code_(code), locator_(std::move(locator))
{
}

int exit_code(ErrorCode code)
{
    switch (code) {
    case ErrorCode::BadConfig:
    case ErrorCode::UndefinedDelta:
    case ErrorCode::EmptySelection:
        return 3;
    default:
        return 2;
    }
}

void fail(ErrorCode code, const std::string& message, std::string locator)
{
    throw Error(code, message, std::move(locator));
}

std::shared_ptr<spdlog::logger> logger()
{
    static std::once_flag once;
    static std::shared_ptr<spdlog::logger> instance;
    std::call_once(once, [] {
        instance = spdlog::stderr_color_mt("softlabel");
        instance->set_pattern("[%l] %v");
        spdlog::level::level_enum level = spdlog::level::warn;
        if (const char* env = std::getenv("SOFTLABEL_LOG"); env != nullptr && *env != '\0') {
            level = spdlog::level::from_str(env);
        }
        instance->set_level(level);
    });
    return instance;
}

}  // namespace softlabel
