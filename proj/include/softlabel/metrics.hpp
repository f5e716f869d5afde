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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "softlabel/box.hpp"

namespace softlabel {

/// Recall grid used for interpolated AP: {0.00, 0.01, ..., 1.00}.
inline constexpr int kRecallGridPoints = 101;
/// Confidence grid used by the F1 sweep: {0.000, 0.001, ..., 1.000}.
inline constexpr int kConfidenceGridPoints = 1001;
/// IoU thresholds 0.50:0.05:0.95 averaged into map5095.
std::vector<double> coco_iou_thresholds();

struct MatchPair {
    std::size_t detection;
    std::size_t truth;
    double iou;
};

struct MatchSet {
    std::vector<MatchPair> pairs;
    std::vector<std::size_t> unmatched_detections;  // false positives
    std::vector<std::size_t> unmatched_truths;      // false negatives
    double iou_threshold = 0.5;
};

/// Greedy matching for one category. Detections are taken in descending
/// confidence (stable on input order); each claims the unmatched truth with
/// the highest IoU >= threshold, lower truth index winning ties.
MatchSet match_detections(std::span<const Detection> detections,
                          std::span<const Annotation> truths, double iou_threshold);

/// Same greedy rule on bare geometry; `candidates` are processed in the given
/// order.
MatchSet match_boxes(std::span<const Box> candidates, std::span<const Box> truths,
                     double iou_threshold);

struct PRPoint {
    double recall;
    double precision;
};

struct PRCurve {
    std::vector<PRPoint> points;  // one per detection rank
    double ap = 0.0;
    double iou_threshold = 0.5;
};

/// Mean over the 101-point recall grid of max(precision at recall >= r).
double interpolated_ap(std::span<const PRPoint> points);

/// Builds the cumulative curve from a ranked true/false-positive sequence.
PRCurve curve_from_ranks(const std::vector<bool>& true_positive, std::size_t truth_count,
                         double iou_threshold);

/// PR curve and AP for one category on one image. Throws NoGroundTruth when
/// `truths` is empty.
PRCurve pr_curve(std::span<const Detection> detections, std::span<const Annotation> truths,
                 double iou_threshold);

using DetectionMap = std::map<std::string, std::vector<Detection>>;
using TruthMap = std::map<std::string, std::vector<Annotation>>;

struct CategoryMetrics {
    int category_id = 0;
    std::string name;
    std::size_t truths = 0;
    std::size_t detections = 0;
    double ap50 = 0.0;    // AP at the primary IoU (0.50 by default)
    double ap5095 = 0.0;  // AP averaged over 0.50:0.05:0.95
    double precision = 0.0;  // at the best mean-F1 confidence
    double recall = 0.0;
    double f1 = 0.0;
};

struct CategoryPR {
    int category_id = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct F1Sweep {
    std::vector<double> mean_f1;  // indexed by confidence grid point
    double best_f1 = 0.0;
    double best_confidence = 0.0;
    std::vector<CategoryPR> at_best;  // categories with ground truth only
    // Per category with ground truth, indexed like mean_f1.
    std::vector<std::vector<double>> precision;
    std::vector<std::vector<double>> recall;
};

struct EvalSummary {
    std::vector<CategoryMetrics> categories;  // categories with ground truth only
    double map50 = 0.0;
    double map5095 = 0.0;
    double best_f1 = 0.0;
    double best_f1_confidence = 0.0;
    std::vector<double> f1_curve;
    double iou_threshold = 0.5;
};

/// Mean-F1 sweep over the confidence grid at `iou_threshold`; ties go to the
/// lowest confidence. Throws NoGroundTruth if no category has ground truth.
F1Sweep f1_sweep(const DetectionMap& detections, const TruthMap& truths,
                 const std::vector<std::string>& categories, double iou_threshold = 0.5);

/// Full evaluation: per-category AP at the primary IoU and over 0.50:0.95,
/// their unweighted means, and the F1 sweep. Categories without ground truth
/// are left out of every mean.
EvalSummary map_summary(const DetectionMap& detections, const TruthMap& truths,
                        const std::vector<std::string>& categories, double iou_threshold = 0.5);

}  // namespace softlabel
