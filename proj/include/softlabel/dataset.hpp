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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "softlabel/box.hpp"
#include "softlabel/metrics.hpp"

namespace softlabel {

struct ImageRecord {
    std::string id;  // relative path stem, unique within a dataset
    int width = 1;
    int height = 1;
    std::vector<Annotation> annotations;  // empty for background images

    bool background() const { return annotations.empty(); }

    friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Dataset {
    std::vector<std::string> categories;  // index is the category id
    std::vector<ImageRecord> images;

    const ImageRecord* find(const std::string& id) const;
    std::size_t instance_count() const;
    TruthMap truth_map() const;
    /// Same categories and image records with every annotation list emptied.
    Dataset skeleton() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Checks ids (unique, safe as relative paths), dimensions, categories and
/// boxes. Throws the matching Error.
void validate(const Dataset& dataset);

/// Reads a JSON manifest:
///   {"categories": [name...],
///    "images": [{"id", "width", "height", "labels", "background"?}]}
/// Label paths are relative to the manifest. A missing label file is only
/// allowed for records flagged background.
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// Manifest text for `dataset` with labels at `labels/<id>.txt`.
std::string manifest_json(const Dataset& dataset);

/// Writes `<dir>/manifest.json` and one label file per image. When
/// `confidences` is given, `<id>.conf` sidecars are written next to the labels;
/// each list must align with that image's annotations.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir,
                  const std::map<std::string, std::vector<double>>* confidences = nullptr);

/// Reads `<dir>/<id>.txt` detection files for the images of `dataset`; absent
/// files mean no detections. A file for an unknown image is DatasetMismatch.
DetectionMap load_detections(const std::filesystem::path& dir, const Dataset& dataset);

void save_detections(const DetectionMap& detections, const std::filesystem::path& dir);

}  // namespace softlabel
