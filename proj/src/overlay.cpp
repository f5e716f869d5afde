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

#include "softlabel/overlay.hpp"

#include <fmt/format.h>

namespace softlabel {

namespace {

std::string escape_attr(std::string_view s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += ch;
        }
    }
    return out;
}

void append_rects(std::string& out, std::span<const Annotation> boxes, const ImageRecord& image,
                  std::string_view color, std::string_view cls, double stroke)
{
    for (const auto& a : boxes) {
        const auto c = clamped_corners(a.box);
        const double x = c.x0 * image.width;
        const double y = c.y0 * image.height;
        const double w = (c.x1 - c.x0) * image.width;
        const double h = (c.y1 - c.y0) * image.height;
        out += fmt::format(
            "  <rect class=\"{}\" data-category=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" "
            "height=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
            cls, a.category_id, x, y, w, h, color, stroke);
    }
}

}  // namespace

std::string render_overlay(const ImageRecord& image, std::span<const Annotation> truth,
                           std::span<const Annotation> soft, const OverlayStyle& style)
{
    std::string out = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" "
        "version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
        image.width, image.height);
    if (!style.image_href.empty()) {
        out += fmt::format(
            "  <image xlink:href=\"{}\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\"/>\n",
            escape_attr(style.image_href), image.width, image.height);
    }
    append_rects(out, truth, image, "green", "truth", style.stroke_width);
    append_rects(out, soft, image, "red", "soft", style.stroke_width);
    out += "</svg>\n";
    return out;
}

}  // namespace softlabel
