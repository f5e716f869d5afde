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

#include "softlabel/box.hpp"

#include <cmath>

namespace softlabel {

bool is_valid(const Box& box)
{
    auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    return unit(box.cx) && unit(box.cy) && unit(box.w) && unit(box.h) && box.w > 0.0 &&
           box.h > 0.0;
}

Corners clamped_corners(const Box& box)
{
    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    return {clamp01(box.x_min()), clamp01(box.y_min()), clamp01(box.x_max()),
            clamp01(box.y_max())};
}

Box box_from_corners(double x0, double y0, double x1, double y1, double width, double height)
{
    return {(x0 + x1) / (2.0 * width), (y0 + y1) / (2.0 * height), (x1 - x0) / width,
            (y1 - y0) / height};
}

double iou(const Box& a, const Box& b)
{
    if (a == b) {
        return 1.0;
    }
    const double iw = std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
    const double ih = std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) {
        return 0.0;
    }
    return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace softlabel
