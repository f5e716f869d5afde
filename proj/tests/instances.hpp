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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "softlabel/metrics.hpp"

namespace testutil {

// Random instance on a coarse lattice so IoU and confidence ties are common.
inline std::vector<oracle::Image> random_instance(std::mt19937_64& gen, int n_categories)
{
    std::uniform_int_distribution<int> n_img(1, 3), n_truth(0, 5), n_det(0, 8), cat(0, n_categories - 1);
    std::uniform_int_distribution<int> pos(2, 8), size(1, 4), conf(1, 10);
    auto box = [&] { return softlabel::Box{pos(gen) / 10.0, pos(gen) / 10.0, size(gen) / 10.0, size(gen) / 10.0}; };
    std::vector<oracle::Image> images(static_cast<std::size_t>(n_img(gen)));
    for (std::size_t i = 0; i < images.size(); ++i) {
        images[i].id = "img" + std::to_string(i);
        const int t = n_truth(gen), d = n_det(gen);
        for (int k = 0; k < t; ++k) images[i].truths.push_back({cat(gen), box()});
        for (int k = 0; k < d; ++k) {
            // Half the detections sit on a truth to make true positives likely.
            softlabel::Box b = box();
            if (!images[i].truths.empty() && gen() % 2 == 0) {
                b = images[i].truths[gen() % images[i].truths.size()].second;
                b.cx = std::clamp(b.cx + (static_cast<int>(gen() % 3) - 1) * 0.05, 0.1, 0.9);
            }
            images[i].dets.push_back({cat(gen), {conf(gen) / 10.0, b}});
        }
    }
    return images;
}

inline std::pair<softlabel::DetectionMap, softlabel::TruthMap> to_maps(const std::vector<oracle::Image>& images)
{
    softlabel::DetectionMap dets;
    softlabel::TruthMap truths;
    for (const auto& im : images) {
        auto& t = truths[im.id];
        auto& d = dets[im.id];
        for (const auto& [c, b] : im.truths) t.push_back({c, b});
        for (const auto& [c, det] : im.dets) d.push_back({c, det.box, det.conf});
    }
    return {dets, truths};
}

}  // namespace testutil
