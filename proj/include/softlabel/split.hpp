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

#include <array>
#include <cstdint>

#include "softlabel/dataset.hpp"

namespace softlabel {

struct SplitSpec {
    std::array<double, 3> ratios{0.4, 0.4, 0.2};
    std::uint64_t seed = 0;
};

void validate(const SplitSpec& spec);

struct DatasetSplit {
    Dataset train1;
    Dataset train2;
    Dataset valid;
};

/// Seeded Fisher-Yates shuffle of the images, then cuts at round(N*r1) and
/// round(N*(r1+r2)). Each part keeps the input's relative image order.
DatasetSplit split_dataset(const Dataset& dataset, const SplitSpec& spec);

}  // namespace softlabel
