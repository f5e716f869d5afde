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

#include "softlabel/stats.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "softlabel/error.hpp"

namespace softlabel {

namespace {

std::size_t cell(double v, int n)
{
    const auto k = static_cast<long>(std::floor(v * n));
    return static_cast<std::size_t>(std::clamp(k, 0L, static_cast<long>(n) - 1));
}

// Bin k covers (k/B, (k+1)/B].
std::size_t bin(double v, int n)
{
    const auto k = static_cast<long>(std::ceil(v * n)) - 1;
    return static_cast<std::size_t>(std::clamp(k, 0L, static_cast<long>(n) - 1));
}

void finalize(DatasetStats& s)
{
    s.fractions.assign(s.counts.size(), 0.0);
    if (s.instances > 0) {
        for (std::size_t c = 0; c < s.counts.size(); ++c) {
            s.fractions[c] = static_cast<double>(s.counts[c]) / static_cast<double>(s.instances);
        }
    }
    s.background_fraction = s.images == 0 ? 0.0
                                          : static_cast<double>(s.background_images) /
                                                static_cast<double>(s.images);
}

}  // namespace

DatasetStats dataset_stats(const Dataset& dataset, int grid, int bins)
{
    if (grid < 1 || bins < 1) {
        fail(ErrorCode::BadConfig, "heatmap grid and histogram bins must be positive");
    }
    DatasetStats s;
    s.categories = dataset.categories;
    s.counts.assign(dataset.categories.size(), 0);
    s.grid = grid;
    s.bins = bins;
    s.center_heatmap.assign(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid), 0);
    s.width_histogram.assign(static_cast<std::size_t>(bins), 0);
    s.height_histogram.assign(static_cast<std::size_t>(bins), 0);
    for (const auto& img : dataset.images) {
        ++s.images;
        if (img.background()) {
            ++s.background_images;
        }
        for (const auto& a : img.annotations) {
            if (a.category_id < 0 || static_cast<std::size_t>(a.category_id) >= s.counts.size()) {
                fail(ErrorCode::UnknownCategory,
                     fmt::format("category {} not in table", a.category_id), img.id);
            }
            ++s.counts[static_cast<std::size_t>(a.category_id)];
            ++s.instances;
            ++s.center_heatmap[cell(a.box.cy, grid) * static_cast<std::size_t>(grid) +
                               cell(a.box.cx, grid)];
            ++s.width_histogram[bin(a.box.w, bins)];
            ++s.height_histogram[bin(a.box.h, bins)];
        }
    }
    finalize(s);
    return s;
}

void merge_stats(DatasetStats& into, const DatasetStats& other)
{
    if (into.categories != other.categories || into.grid != other.grid ||
        into.bins != other.bins) {
        fail(ErrorCode::BadConfig, "cannot merge statistics with different layouts");
    }
    auto add = [](std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(into.counts, other.counts);
    add(into.center_heatmap, other.center_heatmap);
    add(into.width_histogram, other.width_histogram);
    add(into.height_histogram, other.height_histogram);
    into.images += other.images;
    into.background_images += other.background_images;
    into.instances += other.instances;
    finalize(into);
}

std::string stats_json(const DatasetStats& s)
{
    nlohmann::ordered_json per_category = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < s.categories.size(); ++c) {
        per_category.push_back(
            {{"name", s.categories[c]}, {"count", s.counts[c]}, {"fraction", s.fractions[c]}});
    }
    nlohmann::ordered_json heat = nlohmann::ordered_json::array();
    for (int r = 0; r < s.grid; ++r) {
        const auto begin = s.center_heatmap.begin() + static_cast<long>(r) * s.grid;
        heat.push_back(std::vector<std::size_t>(begin, begin + s.grid));
    }
    nlohmann::ordered_json doc;
    doc["images"] = s.images;
    doc["background_images"] = s.background_images;
    doc["background_fraction"] = s.background_fraction;
    doc["instances"] = s.instances;
    doc["categories"] = std::move(per_category);
    doc["grid"] = s.grid;
    doc["center_heatmap"] = std::move(heat);
    doc["bins"] = s.bins;
    doc["width_histogram"] = s.width_histogram;
    doc["height_histogram"] = s.height_histogram;
    return doc.dump(2) + "\n";
}

}  // namespace softlabel
