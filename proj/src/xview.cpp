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

#include "softlabel/xview.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "softlabel/error.hpp"

namespace softlabel {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, std::string_view what)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedRecord, e.what(), std::string(what));
    }
}

std::string strip_extension(const std::string& id)
{
    const auto slash = id.find_last_of('/');
    const auto dot = id.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash) || dot == 0) {
        return id;
    }
    return id.substr(0, dot);
}

std::vector<double> parse_bounds(const json& value, const std::string& locator)
{
    std::vector<double> out;
    if (value.is_array()) {
        for (const auto& v : value) {
            if (!v.is_number()) {
                fail(ErrorCode::MalformedRecord, "non-numeric bound", locator);
            }
            out.push_back(v.get<double>());
        }
    } else if (value.is_string()) {
        const auto s = value.get<std::string>();
        std::size_t pos = 0;
        while (pos <= s.size()) {
            auto end = s.find(',', pos);
            if (end == std::string::npos) end = s.size();
            std::string_view tok(s.data() + pos, end - pos);
            while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
            while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() ||
                !std::isfinite(v)) {
                fail(ErrorCode::MalformedRecord, fmt::format("bad bound '{}'", tok), locator);
            }
            out.push_back(v);
            pos = end + 1;
        }
    } else {
        fail(ErrorCode::MalformedRecord, "bounds_imcoords must be a string or array", locator);
    }
    if (out.size() != 4) {
        fail(ErrorCode::MalformedRecord,
             fmt::format("bounds_imcoords needs 4 values, found {}", out.size()), locator);
    }
    return out;
}

}  // namespace

RemapTable parse_remap_table(std::string_view json_text)
{
    const json doc = parse_json(json_text, "remap table");
    RemapTable out;
    try {
        out.categories = doc.at("categories").get<std::vector<std::string>>();
        for (const auto& [key, value] : doc.at("map").items()) {
            int source = 0;
            const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), source);
            if (ec != std::errc() || ptr != key.data() + key.size()) {
                fail(ErrorCode::BadConfig, fmt::format("type id '{}' is not an integer", key));
            }
            int target = -1;
            if (value.is_string()) {
                const auto name = value.get<std::string>();
                for (std::size_t c = 0; c < out.categories.size(); ++c) {
                    if (out.categories[c] == name) target = static_cast<int>(c);
                }
            } else {
                target = value.get<int>();
            }
            if (target < 0 || target >= static_cast<int>(out.categories.size())) {
                fail(ErrorCode::BadConfig,
                     fmt::format("type id {} maps to an unknown category", source));
            }
            out.entries[source] = target;
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::BadConfig, e.what(), "remap table");
    }
    return out;
}

ImageDimsTable parse_image_dims(std::string_view json_text)
{
    const json doc = parse_json(json_text, "image dims");
    ImageDimsTable out;
    try {
        for (const auto& [id, value] : doc.items()) {
            ImageDims d;
            if (value.is_array()) {
                d = {value.at(0).get<int>(), value.at(1).get<int>()};
            } else {
                d = {value.at("width").get<int>(), value.at("height").get<int>()};
            }
            if (d.width < 1 || d.height < 1) {
                fail(ErrorCode::MalformedRecord, "image dimensions must be positive", id);
            }
            out[id] = d;
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedRecord, e.what(), "image dims");
    }
    return out;
}

XviewIngest ingest_xview(std::string_view geojson_text, const ImageDimsTable& dims,
                         const RemapTable& remap)
{
    const json doc = parse_json(geojson_text, "geojson");
    if (!doc.is_object() || !doc.contains("features") || !doc.at("features").is_array()) {
        fail(ErrorCode::MalformedRecord, "expected a FeatureCollection with a features array");
    }

    XviewIngest out;
    out.dataset.categories = remap.categories;
    std::map<std::string, std::size_t> slot;
    for (const auto& [id, d] : dims) {
        slot[id] = out.dataset.images.size();
        out.dataset.images.push_back({strip_extension(id), d.width, d.height, {}});
    }

    const auto& features = doc.at("features");
    for (std::size_t i = 0; i < features.size(); ++i) {
        const std::string locator = fmt::format("feature {}", i);
        ++out.total;
        try {
            const auto& props = features[i].at("properties");
            const int type_id = props.at("type_id").get<int>();
            const auto hit = remap.entries.find(type_id);
            if (hit == remap.entries.end()) {
                ++out.skipped[type_id];
                continue;
            }
            const auto image_id = props.at("image_id").get<std::string>();
            const auto found = slot.find(image_id);
            if (found == slot.end()) {
                fail(ErrorCode::MalformedRecord, fmt::format("unknown image id '{}'", image_id),
                     locator);
            }
            auto& img = out.dataset.images[found->second];
            const auto b = parse_bounds(props.at("bounds_imcoords"), locator);
            if (b[2] <= b[0] || b[3] <= b[1]) {
                fail(ErrorCode::MalformedRecord, "bounds have non-positive extent", locator);
            }
            if (b[0] < 0 || b[1] < 0 || b[2] > img.width || b[3] > img.height) {
                fail(ErrorCode::MalformedRecord,
                     fmt::format("bounds {},{},{},{} outside {}x{} image", b[0], b[1], b[2], b[3],
                                 img.width, img.height),
                     locator);
            }
            img.annotations.push_back(
                {hit->second, box_from_corners(b[0], b[1], b[2], b[3], img.width, img.height)});
            ++out.mapped;
        } catch (const json::exception& e) {
            fail(ErrorCode::MalformedRecord, e.what(), locator);
        }
    }
    validate(out.dataset);
    return out;
}

}  // namespace softlabel
