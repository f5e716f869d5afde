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

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "softlabel/dataset.hpp"

namespace softlabel {

/// Source type identifier -> destination category id. Types without an entry
/// are skipped and counted.
struct RemapTable {
    std::vector<std::string> categories;
    std::map<int, int> entries;
};

/// {"categories": [names], "map": {"<type_id>": <category id or name>, ...}}
RemapTable parse_remap_table(std::string_view json_text);

struct ImageDims {
    int width = 0;
    int height = 0;
};
using ImageDimsTable = std::map<std::string, ImageDims>;

/// {"<image_id>": {"width": W, "height": H}} or {"<image_id>": [W, H]}
ImageDimsTable parse_image_dims(std::string_view json_text);

struct XviewIngest {
    Dataset dataset;
    std::map<int, std::size_t> skipped;  // per unmapped type id
    std::size_t mapped = 0;
    std::size_t total = 0;
};

/// Converts a FeatureCollection whose features carry `type_id`, `image_id`
/// and pixel `bounds_imcoords` ("xmin,ymin,xmax,ymax") into a Dataset.
/// Every image in `dims` becomes a record (id = image_id without extension),
/// so images without mapped features are background.
XviewIngest ingest_xview(std::string_view geojson_text, const ImageDimsTable& dims,
                         const RemapTable& remap);

}  // namespace softlabel
