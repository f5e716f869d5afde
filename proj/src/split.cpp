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

#include "softlabel/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "softlabel/error.hpp"
#include "softlabel/rng.hpp"

namespace softlabel {

void validate(const SplitSpec& spec)
{
    double sum = 0.0;
    for (double r : spec.ratios) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            fail(ErrorCode::BadConfig, fmt::format("split ratio {} is negative", r));
        }
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        fail(ErrorCode::BadConfig, fmt::format("split ratios sum to {}, not 1", sum));
    }
}

DatasetSplit split_dataset(const Dataset& dataset, const SplitSpec& spec)
{
    validate(spec);
    const std::size_t n = dataset.images.size();
    if (n == 0) {
        fail(ErrorCode::EmptyInput, "cannot split an empty dataset");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_below(i + 1));
        std::swap(order[i], order[j]);
    }

    const auto total = static_cast<double>(n);
    const auto cut1 = static_cast<std::size_t>(std::round(total * spec.ratios[0]));
    const auto cut2 = std::min(
        n, static_cast<std::size_t>(std::round(total * (spec.ratios[0] + spec.ratios[1]))));

    std::vector<int> part(n, 2);
    for (std::size_t k = 0; k < n; ++k) {
        part[order[k]] = k < cut1 ? 0 : (k < cut2 ? 1 : 2);
    }

    DatasetSplit out;
    for (Dataset* d : {&out.train1, &out.train2, &out.valid}) {
        d->categories = dataset.categories;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Dataset& target = part[i] == 0 ? out.train1 : (part[i] == 1 ? out.train2 : out.valid);
        target.images.push_back(dataset.images[i]);
    }
    return out;
}

}  // namespace softlabel
