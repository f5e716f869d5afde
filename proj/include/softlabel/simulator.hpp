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
#include <string_view>
#include <vector>

#include "softlabel/dataset.hpp"
#include "softlabel/rng.hpp"

namespace softlabel {

/// Confidence distribution: Beta(alpha, beta) or a point mass.
struct ConfidenceModel {
    bool constant = false;
    double alpha = 8.0;
    double beta = 2.0;
    double value = 1.0;  // used when constant

    static ConfidenceModel beta_distribution(double a, double b) { return {false, a, b, 1.0}; }
    static ConfidenceModel point_mass(double v) { return {true, 1.0, 1.0, v}; }

    double sample(SplitMix64& rng) const { return constant ? value : rng.beta(alpha, beta); }
};

/// Stand-in for a trained detector: every truth is dropped, jittered and
/// possibly relabelled, and spurious boxes are added per image. The defaults
/// put mAP50 near 0.8 and mAP95 near 0.5 on the synthetic data.
struct NoiseModel {
    double drop_rate = 0.1;
    double center_jitter_sd = 0.002;  // normalized units on cx, cy
    double size_jitter_sd = 0.08;     // on log w, log h
    /// Row-stochastic K x K table; when empty it is built from confusion_rate
    /// (diagonal 1 - rate, remainder spread evenly).
    std::vector<std::vector<double>> confusion;
    double confusion_rate = 0.03;
    double fp_per_image = 1.0;  // Poisson mean
    ConfidenceModel tp_confidence = ConfidenceModel::beta_distribution(8.0, 2.0);
    ConfidenceModel fp_confidence = ConfidenceModel::beta_distribution(2.0, 4.0);
    /// Extra drop probability for small boxes: drop_rate * (1 + s * (1 - min(1, sqrt(area)/0.1))).
    /// Zero disables it.
    double area_drop_scale = 0.0;
    std::uint64_t seed = 0;

    /// Detections equal to the truths at confidence 1.
    static NoiseModel zero_noise(std::uint64_t seed = 0);
};

void validate(const NoiseModel& model, std::size_t category_count);

/// The effective K x K confusion table.
std::vector<std::vector<double>> confusion_matrix(const NoiseModel& model,
                                                  std::size_t category_count);

NoiseModel parse_noise_model(std::string_view json_text);
std::string noise_model_json(const NoiseModel& model);

/// Minimum side of a simulated box.
inline constexpr double kMinSimulatedSide = 1e-4;

/// Per image, a substream seeded from (model.seed, image id) draws, for each
/// truth in order: the drop uniform, then (if kept) cx, cy, log w, log h
/// normals, the category uniform and the confidence; then the Poisson count
/// of spurious boxes and their geometry, category and confidence. Output is
/// independent of image processing order.
DetectionMap simulate_detections(const Dataset& dataset, const NoiseModel& model);

}  // namespace softlabel
