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

#include "softlabel/dataset.hpp"

namespace softlabel {

struct OverlayStyle {
    std::string image_href;  // background image; omitted when empty
    double stroke_width = 2.0;
};

/// SVG 1.1 document the size of the image: ground-truth boxes stroked green,
/// soft labels red, unfilled. Corners are clamped to the image.
std::string render_overlay(const ImageRecord& image, std::span<const Annotation> truth,
                           std::span<const Annotation> soft, const OverlayStyle& style = {});

}  // namespace softlabel
