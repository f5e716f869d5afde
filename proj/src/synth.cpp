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

#include "softlabel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "softlabel/error.hpp"
#include "softlabel/labels.hpp"
#include "softlabel/rng.hpp"

namespace softlabel {

namespace {

constexpr double kMaxOverlap = 0.1;
constexpr int kPlacementAttempts = 32;
constexpr double kMinSide = 0.004;
constexpr double kMaxSide = 0.5;

int draw_category(SplitMix64& rng, const std::vector<double>& mixture)
{
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t c = 0; c < mixture.size(); ++c) {
        acc += mixture[c];
        if (u < acc) {
            return static_cast<int>(c);
        }
    }
    // Rounding left u above the cumulative sum; take the last non-empty class.
    for (std::size_t c = mixture.size(); c-- > 0;) {
        if (mixture[c] > 0.0) return static_cast<int>(c);
    }
    return 0;
}

}  // namespace

void validate(const SynthConfig& cfg)
{
    if (cfg.categories.empty()) {
        fail(ErrorCode::BadConfig, "synthetic dataset needs at least one category");
    }
    if (cfg.mixture.size() != cfg.categories.size() ||
        cfg.typical_size.size() != cfg.categories.size()) {
        fail(ErrorCode::BadConfig, "mixture and typical_size need one entry per category");
    }
    double sum = 0.0;
    for (double m : cfg.mixture) {
        if (!(m >= 0.0)) fail(ErrorCode::BadConfig, fmt::format("mixture fraction {} < 0", m));
        sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        fail(ErrorCode::BadConfig, fmt::format("mixture fractions sum to {}, not 1", sum));
    }
    for (double s : cfg.typical_size) {
        if (!(s > 0.0 && s < 1.0)) {
            fail(ErrorCode::BadConfig, fmt::format("typical size {} outside (0,1)", s));
        }
    }
    if (!(cfg.background_fraction >= 0.0 && cfg.background_fraction <= 1.0)) {
        fail(ErrorCode::BadConfig,
             fmt::format("background fraction {} outside [0,1]", cfg.background_fraction));
    }
    if (!(cfg.mean_objects >= 1.0)) {
        fail(ErrorCode::BadConfig, "mean_objects must be at least 1");
    }
    if (cfg.width < 1 || cfg.height < 1) {
        fail(ErrorCode::BadConfig, "image dimensions must be positive");
    }
}

Dataset synth_dataset(const SynthConfig& cfg)
{
    validate(cfg);
    const std::size_t n = cfg.n_images;
    Dataset out;
    out.categories = cfg.categories;

    std::vector<bool> background(n, false);
    {
        SplitMix64 rng(derive_seed(cfg.seed, "synth/background"));
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        const auto nb = std::min(
            n, static_cast<std::size_t>(std::round(static_cast<double>(n) * cfg.background_fraction)));
        for (std::size_t k = 0; k < nb; ++k) {
            const auto j = k + static_cast<std::size_t>(rng.uniform_below(n - k));
            std::swap(idx[k], idx[j]);
            background[idx[k]] = true;
        }
    }

    out.images.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ImageRecord img{fmt::format("img_{:06d}", i), cfg.width, cfg.height, {}};
        if (!background[i]) {
            SplitMix64 rng(derive_seed(cfg.seed, img.id));
            const auto count = 1 + rng.poisson(cfg.mean_objects - 1.0);
            for (std::uint64_t k = 0; k < count; ++k) {
                const int cat = draw_category(rng, cfg.mixture);
                const double side =
                    cfg.typical_size[static_cast<std::size_t>(cat)] * std::exp(0.25 * rng.normal());
                const double aspect = std::exp(0.2 * rng.normal());
                const double w = std::clamp(side * std::sqrt(aspect), kMinSide, kMaxSide);
                const double h = std::clamp(side / std::sqrt(aspect), kMinSide, kMaxSide);
                for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
                    const Box box{rng.uniform(0.5 * w, 1.0 - 0.5 * w),
                                  rng.uniform(0.5 * h, 1.0 - 0.5 * h), w, h};
                    const bool clash =
                        std::any_of(img.annotations.begin(), img.annotations.end(),
                                    [&](const Annotation& a) { return iou(a.box, box) > kMaxOverlap; });
                    if (!clash) {
                        img.annotations.push_back({cat, box});
                        break;
                    }
                }
            }
            // Store in emission order so a save/load round trip is the identity.
            std::vector<Annotation> sorted;
            sorted.reserve(img.annotations.size());
            for (std::size_t k : label_order(img.annotations)) sorted.push_back(img.annotations[k]);
            img.annotations = std::move(sorted);
        }
        out.images.push_back(std::move(img));
    }
    return out;
}

}  // namespace softlabel
