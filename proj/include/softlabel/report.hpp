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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softlabel/metrics.hpp"

namespace softlabel {

enum class DeltaMode {
    Percent,   // 100 * (value - baseline) / baseline
    LogRatio,  // 100 * ln(value / baseline)
};

std::string_view to_string(DeltaMode mode);
DeltaMode parse_delta_mode(std::string_view text);

/// Percent change of `value` against `baseline`. Throws UndefinedDelta when
/// the baseline is zero (or, for LogRatio, either side is not positive).
double relative_delta(double baseline, double value, DeltaMode mode = DeltaMode::Percent);

struct CategoryRow {
    std::string category;
    double precision = 0.0;
    double recall = 0.0;
    double map50 = 0.0;
    double map5095 = 0.0;

    friend bool operator==(const CategoryRow&, const CategoryRow&) = default;
};

struct ModelRow {
    std::string name;
    std::string train_set;
    std::optional<double> conf;             // soft-label threshold; none for baselines
    std::optional<std::string> baseline;    // name of the row deltas are taken against
    double map50 = 0.0;
    double map5095 = 0.0;
    double best_f1 = 0.0;
    double best_f1_confidence = 0.0;
    std::optional<double> box_mse;
    std::optional<double> coverage;
    std::optional<double> fp_rate;
    std::optional<double> class_disagreement;
    std::vector<CategoryRow> per_category;

    friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

struct Report {
    std::vector<ModelRow> models;
    DeltaMode delta_mode = DeltaMode::Percent;

    const ModelRow* find(std::string_view name) const;

    friend bool operator==(const Report&, const Report&) = default;
};

/// Every baseline reference must name an existing row that is itself a
/// baseline; row names must be unique.
void validate(const Report& report);

/// Percent deltas, one row per soft model. Cells are empty where the delta
/// is undefined or a value is missing.
struct DeltaTable {
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    std::vector<std::optional<double>> cells;  // row-major

    std::optional<double> at(std::size_t row, std::size_t column) const
    {
        return cells[row * columns.size() + column];
    }
};

/// Empty lists select everything.
struct DeltaSelector {
    std::vector<std::string> rows;
    std::vector<std::string> columns;
};

enum class AggregateMode { SignedMean, AbsoluteMean };

/// Mean of the selected non-empty cells. Throws EmptySelection if none.
double aggregate_deltas(const DeltaTable& table, const DeltaSelector& selector,
                        AggregateMode mode);

/// Columns mAP50, mAP95, F1, box_mse, coverage, fp_rate, class_disagreement.
DeltaTable model_deltas(const Report& report);

/// Columns "<category>/<metric>" for metric in P, R, mAP50, mAP95.
DeltaTable category_deltas(const Report& report);

struct ReportSummary {
    std::optional<double> max_map50_gap_points;   // baseline - soft, absolute
    std::optional<double> max_map50_gap_percent;  // relative to the baseline
    std::string max_map50_gap_row;
    std::map<std::string, double> category_signed_mean;  // per category, all soft rows
    std::optional<double> overall_signed_mean;
};

ReportSummary summarize(const Report& report);

enum class ReportFormat { Json, Csv, Markdown };
ReportFormat parse_report_format(std::string_view text);

std::string emit_report(const Report& report, ReportFormat format);

/// Evaluation metrics of a single detection set; JSON includes the F1 curve.
std::string emit_eval_summary(const EvalSummary& summary, ReportFormat format);

/// Reads the stored values of a JSON report; derived delta and summary
/// sections are ignored and recomputed on emission.
Report report_from_json(std::string_view json_text);

}  // namespace softlabel
