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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softlabel/pipeline.hpp"
#include "softlabel/report.hpp"
#include "softlabel/simulator.hpp"
#include "softlabel/split.hpp"
#include "softlabel/synth.hpp"

namespace softlabel {

struct ExperimentConfig {
    /// Ground-truth manifest; when absent a synthetic dataset is generated.
    std::optional<std::filesystem::path> manifest;
    SynthConfig synth;
    SplitSpec split;
    NoiseModel noise;
    std::vector<double> thresholds{0.3, 0.5};
    std::optional<double> nms_iou = 0.45;
    std::filesystem::path output_dir = "experiment_out";
    /// Master seed; the synth, split and model seeds are derived from it.
    std::uint64_t seed = 0;
    /// Overlays written per soft dataset; -1 writes all.
    int overlay_limit = 16;
    DeltaMode delta_mode = DeltaMode::Percent;
    /// Fraction of each label discrepancy passed on to a soft-trained model.
    double label_noise_transfer = 0.25;
};

void validate(const ExperimentConfig& cfg);

/// JSON keys: manifest, synth{n_images, categories, mixture, typical_size,
/// background_fraction, mean_objects, width, height}, split{ratios},
/// noise{...}, thresholds, nms_iou (null disables), output_dir, seed,
/// overlay_limit, delta_mode, label_noise_transfer. Relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir = {});

/// Detector for a model trained on a soft dataset: the base detector made
/// worse by a fraction `transfer` of the label discrepancies it was trained on
///   drop'      = 1 - (1 - drop) * (1 - transfer * (1 - coverage))
///   center_sd' = sqrt(center_sd^2 + transfer * box_mse)
///   confusion' = (1 - transfer * disagreement) * confusion + transfer * disagreement * off-diagonal
///   fp'        = fp + transfer * fp_rate
/// A zero report returns the base model's behavior unchanged.
NoiseModel student_model(const NoiseModel& base, const DiscrepancyReport& labels,
                         std::size_t category_count, double transfer = 0.25);

struct ExperimentResult {
    Report report;
    /// (train set, threshold) -> label discrepancy of that soft dataset
    std::vector<std::pair<std::string, DiscrepancyReport>> discrepancies;
};

/// Split, soft-label each training half with the detector of the other half,
/// compare soft to true labels, evaluate every model on the validation split
/// and write datasets, detections, sidecars, overlays and report.{json,md,csv}
/// under the output directory.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace softlabel
