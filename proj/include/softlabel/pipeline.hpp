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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softlabel/dataset.hpp"

namespace softlabel {

struct SoftLabelConfig {
    double confidence_threshold = 0.3;
    std::optional<double> nms_iou = 0.45;  // nullopt disables suppression
    bool keep_confidence_sidecar = true;
};

void validate(const SoftLabelConfig& cfg);

/// Detections with confidence >= threshold, in input order.
std::vector<Detection> filter_confidence(std::span<const Detection> detections, double threshold);

/// Category-aware greedy non-maximum suppression by descending confidence.
/// Survivors keep their input order.
std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold);

/// A soft-label dataset. Per image, `confidences[id][k]` belongs to
/// `dataset.images[i].annotations[k]`; annotations are in label-file order.
struct SoftDataset {
    Dataset dataset;
    std::map<std::string, std::vector<double>> confidences;
};

/// Thresholds, optionally suppresses, and strips detections into annotations
/// on a copy of `source` (whose own annotations are ignored). Images left
/// without detections become background.
SoftDataset generate_soft_dataset(const Dataset& source, const DetectionMap& detections,
                                  const SoftLabelConfig& cfg);

/// Writes the soft dataset; sidecars only when the config keeps them.
void save_soft_dataset(const SoftDataset& soft, const std::filesystem::path& dir,
                       const SoftLabelConfig& cfg);

/// Dataset-level analogs of box, objectness and classification loss between
/// ground truth and a soft-label dataset.
struct DiscrepancyReport {
    double box_mse = 0.0;  // mean over matched pairs and the four box fields
    double coverage = 1.0;  // matched truths / all truths
    double false_positive_rate = 0.0;  // unmatched soft labels per image
    double class_disagreement = 0.0;  // matched pairs with differing category
    std::size_t truths = 0;
    std::size_t soft_labels = 0;
    std::size_t matched = 0;
    std::size_t images = 0;
};

/// Category-agnostic greedy match at IoU 0.50 per image; categories are
/// compared afterwards. Throws DatasetMismatch if the image id sets differ.
DiscrepancyReport compare_datasets(const Dataset& truth, const Dataset& soft);

}  // namespace softlabel
