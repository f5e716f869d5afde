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

#include <algorithm>

namespace softlabel {

/// Normalized center-format bounding box. Valid boxes have their center in
/// [0,1] and a size in (0,1]; corners may extend past the image edge and are
/// only clamped when written out in pixel or corner form.
struct Box {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    double x_min() const { return cx - 0.5 * w; }
    double x_max() const { return cx + 0.5 * w; }
    double y_min() const { return cy - 0.5 * h; }
    double y_max() const { return cy + 0.5 * h; }
    double area() const { return w * h; }

    friend bool operator==(const Box&, const Box&) = default;
};

bool is_valid(const Box& box);

/// Corner form clamped to the unit square.
struct Corners {
    double x0, y0, x1, y1;
};
Corners clamped_corners(const Box& box);

/// Box from pixel corner bounds; no validation.
Box box_from_corners(double x0, double y0, double x1, double y1, double width, double height);

struct Annotation {
    int category_id = 0;
    Box box;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Detection {
    int category_id = 0;
    Box box;
    double confidence = 0.0;

    Annotation annotation() const { return {category_id, box}; }

    friend bool operator==(const Detection&, const Detection&) = default;
};

/// Intersection over union; symmetric, in [0,1], 0 for disjoint boxes.
double iou(const Box& a, const Box& b);

}  // namespace softlabel
