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

#include "softlabel/file_util.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "softlabel/error.hpp"

namespace softlabel {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open file for reading", path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_text_atomic(const fs::path& path, std::string_view content)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            fail(ErrorCode::Io, "cannot create directory: " + ec.message(),
                 path.parent_path().string());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail(ErrorCode::Io, "cannot open file for writing", tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            fail(ErrorCode::Io, "write failed", tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fail(ErrorCode::Io, "rename failed: " + ec.message(), path.string());
    }
}

}  // namespace softlabel
