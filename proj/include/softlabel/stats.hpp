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
#include <string>
#include <vector>

#include "softlabel/dataset.hpp"

namespace softlabel {

struct DatasetStats {
    std::vector<std::string> categories;
    std::vector<std::size_t> counts;
    std::vector<double> fractions;  // of all instances
    std::size_t images = 0;
    std::size_t background_images = 0;
    double background_fraction = 0.0;
    std::size_t instances = 0;
    int grid = 64;
    std::vector<std::size_t> center_heatmap;  // grid x grid, row = y, column = x
    int bins = 50;
    std::vector<std::size_t> width_histogram;   // uniform bins on (0,1]
    std::vector<std::size_t> height_histogram;
};

DatasetStats dataset_stats(const Dataset& dataset, int grid = 64, int bins = 50);

/// Adds the counts of `other` (same categories, grid and bins) into `into`
/// and recomputes the fractions. Order of merging does not matter.
void merge_stats(DatasetStats& into, const DatasetStats& other);

std::string stats_json(const DatasetStats& stats);

}  // namespace softlabel
