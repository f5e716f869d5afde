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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "softlabel/box.hpp"

namespace softlabel {

/// Values this far outside [0,1] are clamped with a warning; anything
/// further is a MalformedRecord.
inline constexpr double kCoordinateSlack = 1e-6;

/// Parses `<category_id> <cx> <cy> <w> <h>` lines. Blank lines are ignored
/// and empty text is a background image. Errors carry `source:line`.
std::vector<Annotation> parse_yolo_labels(std::string_view text,
                                          std::string_view source = "<labels>");

/// One line per annotation with six-decimal coordinates, sorted by
/// (category, cx, cy, w, h) as printed.
std::string emit_yolo_labels(std::span<const Annotation> annotations);

/// Permutation that puts `annotations` in emission order.
std::vector<std::size_t> label_order(std::span<const Annotation> annotations);

/// Label format with a sixth `<confidence>` field in [0,1].
std::vector<Detection> parse_detections(std::string_view text,
                                        std::string_view source = "<detections>");

/// Detection lines in input order.
std::string emit_detections(std::span<const Detection> detections);

struct SoftLabelText {
    std::string labels;       // five-field label file
    std::string confidences;  // `.conf` sidecar, one value per label line
};

/// Label file plus an aligned confidence sidecar. Lines follow the same order
/// emit_yolo_labels would produce for the stripped annotations.
SoftLabelText emit_soft_labels(std::span<const Detection> detections);

std::vector<double> parse_confidence_sidecar(std::string_view text,
                                             std::string_view source = "<sidecar>");

/// Fixed six-decimal rendering used by every emitter.
std::string format_fixed6(double value);

}  // namespace softlabel
