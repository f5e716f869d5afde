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

#include "softlabel/labels.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "softlabel/error.hpp"
#include "softlabel/logging.hpp"

namespace softlabel {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> fields;
};

std::vector<Line> split_records(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        Line rec{number, {}};
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            if (i > start) {
                rec.fields.push_back(line.substr(start, i - start));
            }
        }
        if (!rec.fields.empty()) {
            out.push_back(std::move(rec));
        }
    }
    return out;
}

std::string locate(std::string_view source, std::size_t line)
{
    return fmt::format("{}:{}", source, line);
}

double parse_real(std::string_view token, std::string_view what, std::string_view source,
                  std::size_t line)
{
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        fail(ErrorCode::MalformedRecord, fmt::format("{} '{}' is not a finite number", what, token),
             locate(source, line));
    }
    return value;
}

int parse_category(std::string_view token, std::string_view source, std::size_t line)
{
    int value = -1;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value < 0) {
        fail(ErrorCode::MalformedRecord,
             fmt::format("category id '{}' is not a non-negative integer", token),
             locate(source, line));
    }
    return value;
}

double unit_coordinate(double v, std::string_view what, std::string_view source,
                       std::size_t line)
{
    if (v < -kCoordinateSlack || v > 1.0 + kCoordinateSlack) {
        fail(ErrorCode::MalformedRecord, fmt::format("{} = {} outside [0,1]", what, v),
             locate(source, line));
    }
    if (v < 0.0 || v > 1.0) {
        logger()->warn("{}: {} = {} clamped to [0,1]", locate(source, line), what, v);
        v = std::clamp(v, 0.0, 1.0);
    }
    return v;
}

Annotation parse_annotation(const Line& rec, std::string_view source)
{
    Annotation a;
    a.category_id = parse_category(rec.fields[0], source, rec.number);
    static constexpr std::array<std::string_view, 4> kNames{"cx", "cy", "w", "h"};
    std::array<double, 4> v{};
    for (std::size_t k = 0; k < 4; ++k) {
        v[k] = unit_coordinate(parse_real(rec.fields[k + 1], kNames[k], source, rec.number),
                               kNames[k], source, rec.number);
    }
    if (v[2] <= 0.0 || v[3] <= 0.0) {
        fail(ErrorCode::MalformedRecord, "degenerate box: width and height must be positive",
             locate(source, rec.number));
    }
    a.box = {v[0], v[1], v[2], v[3]};
    return a;
}

struct Formatted {
    int category_id;
    std::array<std::string, 4> coords;
};

Formatted format_annotation(const Annotation& a)
{
    Formatted f{a.category_id, {format_fixed6(a.box.cx), format_fixed6(a.box.cy),
                                format_fixed6(a.box.w), format_fixed6(a.box.h)}};
    // Sizes that round to zero would not parse back.
    for (std::size_t k = 2; k < 4; ++k) {
        if (f.coords[k] == "0.000000") {
            f.coords[k] = "0.000001";
        }
    }
    return f;
}

// Fixed-width "d.dddddd" strings order lexicographically as numbers.
std::vector<std::size_t> canonical_order(const std::vector<Formatted>& rows)
{
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(rows[a].category_id, rows[a].coords) <
               std::tie(rows[b].category_id, rows[b].coords);
    });
    return order;
}

void append_line(std::string& out, const Formatted& f)
{
    out += fmt::format("{} {} {} {} {}", f.category_id, f.coords[0], f.coords[1], f.coords[2],
                       f.coords[3]);
}

}  // namespace

std::string format_fixed6(double value)
{
    return fmt::format("{:.6f}", value + 0.0);
}

std::vector<std::size_t> label_order(std::span<const Annotation> annotations)
{
    std::vector<Formatted> rows;
    rows.reserve(annotations.size());
    for (const auto& a : annotations) {
        rows.push_back(format_annotation(a));
    }
    return canonical_order(rows);
}

std::vector<Annotation> parse_yolo_labels(std::string_view text, std::string_view source)
{
    std::vector<Annotation> out;
    for (const auto& rec : split_records(text)) {
        if (rec.fields.size() != 5) {
            fail(ErrorCode::MalformedRecord,
                 fmt::format("expected 5 fields, found {}", rec.fields.size()),
                 locate(source, rec.number));
        }
        out.push_back(parse_annotation(rec, source));
    }
    return out;
}

std::string emit_yolo_labels(std::span<const Annotation> annotations)
{
    std::vector<Formatted> rows;
    rows.reserve(annotations.size());
    for (const auto& a : annotations) {
        rows.push_back(format_annotation(a));
    }
    std::string out;
    for (std::size_t i : canonical_order(rows)) {
        append_line(out, rows[i]);
        out += '\n';
    }
    return out;
}

std::vector<Detection> parse_detections(std::string_view text, std::string_view source)
{
    std::vector<Detection> out;
    for (const auto& rec : split_records(text)) {
        if (rec.fields.size() != 6) {
            fail(ErrorCode::MalformedRecord,
                 fmt::format("expected 6 fields, found {}", rec.fields.size()),
                 locate(source, rec.number));
        }
        const auto a = parse_annotation(rec, source);
        const double conf = parse_real(rec.fields[5], "confidence", source, rec.number);
        if (conf < 0.0 || conf > 1.0) {
            fail(ErrorCode::MalformedRecord, fmt::format("confidence {} outside [0,1]", conf),
                 locate(source, rec.number));
        }
        out.push_back({a.category_id, a.box, conf});
    }
    return out;
}

std::string emit_detections(std::span<const Detection> detections)
{
    std::string out;
    for (const auto& d : detections) {
        append_line(out, format_annotation(d.annotation()));
        out += ' ';
        out += format_fixed6(d.confidence);
        out += '\n';
    }
    return out;
}

SoftLabelText emit_soft_labels(std::span<const Detection> detections)
{
    std::vector<Formatted> rows;
    rows.reserve(detections.size());
    for (const auto& d : detections) {
        rows.push_back(format_annotation(d.annotation()));
    }
    SoftLabelText out;
    for (std::size_t i : canonical_order(rows)) {
        append_line(out.labels, rows[i]);
        out.labels += '\n';
        out.confidences += format_fixed6(detections[i].confidence);
        out.confidences += '\n';
    }
    return out;
}

std::vector<double> parse_confidence_sidecar(std::string_view text, std::string_view source)
{
    std::vector<double> out;
    for (const auto& rec : split_records(text)) {
        if (rec.fields.size() != 1) {
            fail(ErrorCode::MalformedRecord,
                 fmt::format("expected 1 field, found {}", rec.fields.size()),
                 locate(source, rec.number));
        }
        const double conf = parse_real(rec.fields[0], "confidence", source, rec.number);
        if (conf < 0.0 || conf > 1.0) {
            fail(ErrorCode::MalformedRecord, fmt::format("confidence {} outside [0,1]", conf),
                 locate(source, rec.number));
        }
        out.push_back(conf);
    }
    return out;
}

}  // namespace softlabel
