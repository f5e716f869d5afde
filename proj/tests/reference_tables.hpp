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

// Reference figures for the ground-truth vs soft-label comparison: model-level
// metrics with loss columns, and per-class P/R/mAP rows, as printed.

#include <string>
#include <vector>

#include "softlabel/report.hpp"

namespace reference {

struct ModelLine {
    const char* name;
    const char* train_set;
    double conf;  // < 0 for baselines
    double map50, map5095, f1, f1_conf;
    double box_loss, obj_loss, cls_loss;
};

inline const std::vector<ModelLine>& model_lines()
{
    static const std::vector<ModelLine> lines{
        {"Train Set 1", "train1", -1, 0.76251, 0.45069, 0.71, 0.419, 0.052841, 0.03327, 0.0058541},
        {"Train Set 1 Soft 0.3", "train1", 0.3, 0.73275, 0.42357, 0.70, 0.482, 0.042647, 0.029469, 0.0033020},
        {"Train Set 1 Soft 0.5", "train1", 0.5, 0.70798, 0.40687, 0.69, 0.318, 0.044096, 0.030910, 0.0041233},
        {"Train Set 2", "train2", -1, 0.77470, 0.46090, 0.72, 0.421, 0.0415, 0.027994, 0.002451},
        {"Train Set 2 Soft 0.3", "train2", 0.3, 0.72932, 0.42006, 0.70, 0.503, 0.042767, 0.031548, 0.0033173},
        {"Train Set 2 Soft 0.5", "train2", 0.5, 0.71681, 0.41578, 0.70, 0.308, 0.044652, 0.030846, 0.0044479},
    };
    return lines;
}

/// Printed percent columns for box, objectness and classification loss, in
/// soft-row order.
struct PrintedDeltas {
    double box, obj, cls;
};

inline const std::vector<PrintedDeltas>& printed_loss_deltas()
{
    static const std::vector<PrintedDeltas> d{
        {-21.35, -12.11, -55.74}, {-18.04, -7.35, -34.69}, {+3.01, +11.93, +30.04}, {+7.32, +9.69, +57.89}};
    return d;
}

struct ClassLine {
    const char* model;
    const char* category;
    double p, r, map50, map5095;
};

inline const std::vector<ClassLine>& class_lines()
{
    static const std::vector<ClassLine> lines{
        {"Train Set 1", "ship", 0.758, 0.625, 0.720, 0.389},
        {"Train Set 1", "car", 0.689, 0.693, 0.735, 0.371},
        {"Train Set 1", "plane", 0.876, 0.674, 0.823, 0.585},
        {"Train Set 1 Soft 0.3", "ship", 0.677, 0.645, 0.694, 0.355},
        {"Train Set 1 Soft 0.3", "car", 0.786, 0.649, 0.752, 0.390},
        {"Train Set 1 Soft 0.3", "plane", 0.787, 0.661, 0.756, 0.528},
        {"Train Set 1 Soft 0.5", "ship", 0.658, 0.625, 0.663, 0.334},
        {"Train Set 1 Soft 0.5", "car", 0.742, 0.656, 0.743, 0.389},
        {"Train Set 1 Soft 0.5", "plane", 0.836, 0.647, 0.717, 0.498},
        {"Train Set 2", "ship", 0.732, 0.641, 0.728, 0.393},
        {"Train Set 2", "car", 0.781, 0.671, 0.766, 0.403},
        {"Train Set 2", "plane", 0.806, 0.719, 0.826, 0.584},
        {"Train Set 2 Soft 0.3", "ship", 0.750, 0.622, 0.707, 0.382},
        {"Train Set 2 Soft 0.3", "car", 0.694, 0.700, 0.716, 0.364},
        {"Train Set 2 Soft 0.3", "plane", 0.828, 0.665, 0.765, 0.514},
        {"Train Set 2 Soft 0.5", "ship", 0.755, 0.588, 0.681, 0.362},
        {"Train Set 2 Soft 0.5", "car", 0.687, 0.719, 0.754, 0.386},
        {"Train Set 2 Soft 0.5", "plane", 0.860, 0.645, 0.715, 0.499},
    };
    return lines;
}

/// Report holding the reference rows. Loss columns go in the discrepancy
/// slots (box -> box_mse, objectness -> fp_rate, classification ->
/// class_disagreement) so their deltas flow through the same machinery.
inline softlabel::Report report(softlabel::DeltaMode mode = softlabel::DeltaMode::Percent)
{
    softlabel::Report r;
    r.delta_mode = mode;
    std::string baseline;
    for (const auto& m : model_lines()) {
        softlabel::ModelRow row;
        row.name = m.name;
        row.train_set = m.train_set;
        if (m.conf < 0) {
            baseline = m.name;
        } else {
            row.conf = m.conf;
            row.baseline = baseline;
        }
        row.map50 = m.map50;
        row.map5095 = m.map5095;
        row.best_f1 = m.f1;
        row.best_f1_confidence = m.f1_conf;
        row.box_mse = m.box_loss;
        row.fp_rate = m.obj_loss;
        row.class_disagreement = m.cls_loss;
        for (const auto& c : class_lines()) {
            if (row.name == c.model) row.per_category.push_back({c.category, c.p, c.r, c.map50, c.map5095});
        }
        r.models.push_back(std::move(row));
    }
    return r;
}

}  // namespace reference
