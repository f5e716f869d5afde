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
#include <cstdint>
#include <string>
#include <vector>

#include "softlabel/dataset.hpp"

namespace softlabel {

struct SynthConfig {
    std::size_t n_images = 2000;
    std::vector<std::string> categories{"ship", "car", "plane"};
    std::vector<double> mixture{0.15, 0.77, 0.08};
    /// Median normalized box side per category; cars smallest, planes largest.
    std::vector<double> typical_size{0.06, 0.025, 0.10};
    double background_fraction = 1.0 / 3.0;
    double mean_objects = 10.0;  // per non-background image, at least 1
    int width = 640;
    int height = 640;
    std::uint64_t seed = 0;
};

void validate(const SynthConfig& cfg);

/// Seeded synthetic ground truth. Exactly round(n * background_fraction)
/// images are background; the rest hold 1 + Poisson(mean_objects - 1) boxes
/// with categories drawn from the mixture and log-normal sizes around the
/// category's typical size. Boxes lie inside the image and overlap any
/// earlier box in the same image by IoU <= 0.1.
Dataset synth_dataset(const SynthConfig& cfg);

}  // namespace softlabel
