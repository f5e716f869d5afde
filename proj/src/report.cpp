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

#include "softlabel/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "softlabel/error.hpp"

namespace softlabel {

using ojson = nlohmann::ordered_json;

std::string_view to_string(DeltaMode mode)
{
    return mode == DeltaMode::Percent ? "percent" : "log_ratio";
}

DeltaMode parse_delta_mode(std::string_view text)
{
    if (text == "percent") return DeltaMode::Percent;
    if (text == "log_ratio" || text == "log-ratio") return DeltaMode::LogRatio;
    fail(ErrorCode::BadConfig, fmt::format("unknown delta mode '{}'", text));
}

double relative_delta(double baseline, double value, DeltaMode mode)
{
    if (baseline == 0.0) {
        fail(ErrorCode::UndefinedDelta, "relative change from a zero baseline");
    }
    if (mode == DeltaMode::LogRatio) {
        if (baseline < 0.0 || value <= 0.0) {
            fail(ErrorCode::UndefinedDelta, "log ratio needs positive values");
        }
        return 100.0 * std::log(value / baseline);
    }
    return 100.0 * (value - baseline) / baseline;
}

const ModelRow* Report::find(std::string_view name) const
{
    for (const auto& m : models) {
        if (m.name == name) return &m;
    }
    return nullptr;
}

void validate(const Report& report)
{
    std::set<std::string> names;
    for (const auto& m : report.models) {
        if (!names.insert(m.name).second) {
            fail(ErrorCode::BadConfig, fmt::format("duplicate model row '{}'", m.name));
        }
    }
    for (const auto& m : report.models) {
        if (!m.baseline) continue;
        const auto* b = report.find(*m.baseline);
        if (b == nullptr) {
            fail(ErrorCode::BadConfig,
                 fmt::format("row '{}' references missing baseline '{}'", m.name, *m.baseline));
        }
        if (b->baseline) {
            fail(ErrorCode::BadConfig,
                 fmt::format("row '{}' uses '{}', which is not a baseline row", m.name, b->name));
        }
    }
}

double aggregate_deltas(const DeltaTable& table, const DeltaSelector& selector,
                        AggregateMode mode)
{
    auto wanted = [](const std::vector<std::string>& list, const std::string& v) {
        return list.empty() || std::find(list.begin(), list.end(), v) != list.end();
    };
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (!wanted(selector.rows, table.rows[r])) continue;
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (!wanted(selector.columns, table.columns[c])) continue;
            if (const auto v = table.at(r, c)) {
                sum += mode == AggregateMode::AbsoluteMean ? std::abs(*v) : *v;
                ++n;
            }
        }
    }
    if (n == 0) {
        fail(ErrorCode::EmptySelection, "no deltas match the selection");
    }
    return sum / static_cast<double>(n);
}

namespace {

std::optional<double> safe_delta(std::optional<double> baseline, std::optional<double> value,
                                 DeltaMode mode)
{
    if (!baseline || !value) return std::nullopt;
    try {
        return relative_delta(*baseline, *value, mode);
    } catch (const Error&) {
        return std::nullopt;
    }
}

const CategoryRow* find_category(const ModelRow& row, const std::string& name)
{
    for (const auto& c : row.per_category) {
        if (c.category == name) return &c;
    }
    return nullptr;
}

std::vector<std::string> category_names(const Report& report)
{
    std::vector<std::string> out;
    for (const auto& m : report.models) {
        for (const auto& c : m.per_category) {
            if (std::find(out.begin(), out.end(), c.category) == out.end()) {
                out.push_back(c.category);
            }
        }
    }
    return out;
}

struct ModelMetric {
    const char* column;
    std::optional<double> (*get)(const ModelRow&);
};

const ModelMetric kModelMetrics[] = {
    {"mAP50", [](const ModelRow& m) -> std::optional<double> { return m.map50; }},
    {"mAP95", [](const ModelRow& m) -> std::optional<double> { return m.map5095; }},
    {"F1", [](const ModelRow& m) -> std::optional<double> { return m.best_f1; }},
    {"box_mse", [](const ModelRow& m) { return m.box_mse; }},
    {"coverage", [](const ModelRow& m) { return m.coverage; }},
    {"fp_rate", [](const ModelRow& m) { return m.fp_rate; }},
    {"class_disagreement", [](const ModelRow& m) { return m.class_disagreement; }},
};

struct CategoryMetric {
    const char* column;
    double CategoryRow::*field;
};

const CategoryMetric kCategoryMetrics[] = {
    {"P", &CategoryRow::precision},
    {"R", &CategoryRow::recall},
    {"mAP50", &CategoryRow::map50},
    {"mAP95", &CategoryRow::map5095},
};

}  // namespace

DeltaTable model_deltas(const Report& report)
{
    validate(report);
    DeltaTable t;
    for (const auto& metric : kModelMetrics) t.columns.emplace_back(metric.column);
    for (const auto& m : report.models) {
        if (!m.baseline) continue;
        const auto& b = *report.find(*m.baseline);
        t.rows.push_back(m.name);
        for (const auto& metric : kModelMetrics) {
            t.cells.push_back(safe_delta(metric.get(b), metric.get(m), report.delta_mode));
        }
    }
    return t;
}

DeltaTable category_deltas(const Report& report)
{
    validate(report);
    DeltaTable t;
    const auto names = category_names(report);
    for (const auto& name : names) {
        for (const auto& metric : kCategoryMetrics) {
            t.columns.push_back(fmt::format("{}/{}", name, metric.column));
        }
    }
    for (const auto& m : report.models) {
        if (!m.baseline) continue;
        const auto& b = *report.find(*m.baseline);
        t.rows.push_back(m.name);
        for (const auto& name : names) {
            const auto* mc = find_category(m, name);
            const auto* bc = find_category(b, name);
            for (const auto& metric : kCategoryMetrics) {
                if (mc == nullptr || bc == nullptr) {
                    t.cells.emplace_back();
                } else {
                    t.cells.push_back(
                        safe_delta(bc->*metric.field, mc->*metric.field, report.delta_mode));
                }
            }
        }
    }
    return t;
}

ReportSummary summarize(const Report& report)
{
    validate(report);
    ReportSummary s;
    for (const auto& m : report.models) {
        if (!m.baseline) continue;
        const auto& b = *report.find(*m.baseline);
        const double gap = std::abs(b.map50 - m.map50);
        if (!s.max_map50_gap_points || gap > *s.max_map50_gap_points) {
            s.max_map50_gap_points = gap;
            s.max_map50_gap_row = m.name;
            s.max_map50_gap_percent =
                b.map50 != 0.0 ? std::optional<double>(100.0 * gap / b.map50) : std::nullopt;
        }
    }
    const auto table = category_deltas(report);
    for (const auto& name : category_names(report)) {
        DeltaSelector sel;
        for (const auto& metric : kCategoryMetrics) {
            sel.columns.push_back(fmt::format("{}/{}", name, metric.column));
        }
        try {
            s.category_signed_mean[name] = aggregate_deltas(table, sel, AggregateMode::SignedMean);
        } catch (const Error&) {
        }
    }
    try {
        s.overall_signed_mean = aggregate_deltas(table, {}, AggregateMode::SignedMean);
    } catch (const Error&) {
    }
    return s;
}

ReportFormat parse_report_format(std::string_view text)
{
    if (text == "json") return ReportFormat::Json;
    if (text == "csv") return ReportFormat::Csv;
    if (text == "markdown" || text == "md") return ReportFormat::Markdown;
    fail(ErrorCode::BadConfig, fmt::format("unknown report format '{}'", text));
}

namespace {

ojson opt(std::optional<double> v) { return v ? ojson(*v) : ojson(nullptr); }

ojson table_json(const DeltaTable& t, const std::string& row)
{
    ojson out = ojson::object();
    const auto it = std::find(t.rows.begin(), t.rows.end(), row);
    if (it == t.rows.end()) return out;
    const auto r = static_cast<std::size_t>(it - t.rows.begin());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        out[t.columns[c]] = opt(t.at(r, c));
    }
    return out;
}

std::string emit_json(const Report& report)
{
    const auto md = model_deltas(report);
    const auto cd = category_deltas(report);
    const auto summary = summarize(report);

    ojson models = ojson::array();
    for (const auto& m : report.models) {
        ojson row;
        row["name"] = m.name;
        row["train_set"] = m.train_set;
        row["conf"] = opt(m.conf);
        row["baseline"] = m.baseline ? ojson(*m.baseline) : ojson(nullptr);
        row["map50"] = m.map50;
        row["map5095"] = m.map5095;
        row["best_f1"] = m.best_f1;
        row["best_f1_confidence"] = m.best_f1_confidence;
        row["box_mse"] = opt(m.box_mse);
        row["coverage"] = opt(m.coverage);
        row["fp_rate"] = opt(m.fp_rate);
        row["class_disagreement"] = opt(m.class_disagreement);
        ojson cats = ojson::array();
        for (const auto& c : m.per_category) {
            cats.push_back({{"category", c.category},
                            {"precision", c.precision},
                            {"recall", c.recall},
                            {"map50", c.map50},
                            {"map5095", c.map5095}});
        }
        row["per_category"] = std::move(cats);
        if (m.baseline) {
            row["deltas"] = table_json(md, m.name);
            row["per_category_deltas"] = table_json(cd, m.name);
        }
        models.push_back(std::move(row));
    }

    ojson s;
    s["max_map50_gap_points"] = opt(summary.max_map50_gap_points);
    s["max_map50_gap_percent"] = opt(summary.max_map50_gap_percent);
    s["max_map50_gap_row"] = summary.max_map50_gap_row;
    ojson per = ojson::object();
    for (const auto& [k, v] : summary.category_signed_mean) per[k] = v;
    s["category_signed_mean_delta"] = std::move(per);
    s["overall_signed_mean_delta"] = opt(summary.overall_signed_mean);

    ojson doc;
    doc["delta_mode"] = std::string(to_string(report.delta_mode));
    doc["map5095_definition"] = "mean AP over IoU 0.50:0.05:0.95";
    doc["models"] = std::move(models);
    doc["summary"] = std::move(s);
    return doc.dump(2) + "\n";
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string num(std::optional<double> v) { return v ? fmt::format("{}", *v) : std::string(); }

std::string emit_csv(const Report& report)
{
    validate(report);
    std::string out =
        "model,train_set,conf,baseline,category,precision,recall,map50,map5095,best_f1,"
        "best_f1_confidence,box_mse,coverage,fp_rate,class_disagreement\n";
    for (const auto& m : report.models) {
        out += fmt::format("{},{},{},{},all,,,{},{},{},{},{},{},{},{}\n", csv_field(m.name),
                           csv_field(m.train_set), num(m.conf),
                           m.baseline ? csv_field(*m.baseline) : "", m.map50, m.map5095,
                           m.best_f1, m.best_f1_confidence, num(m.box_mse), num(m.coverage),
                           num(m.fp_rate), num(m.class_disagreement));
    }
    for (const auto& m : report.models) {
        for (const auto& c : m.per_category) {
            out += fmt::format("{},{},{},{},{},{},{},{},{},,,,,,\n", csv_field(m.name),
                               csv_field(m.train_set), num(m.conf),
                               m.baseline ? csv_field(*m.baseline) : "", csv_field(c.category),
                               c.precision, c.recall, c.map50, c.map5095);
        }
    }
    return out;
}

std::string with_delta(std::string value, std::optional<double> delta)
{
    if (delta) value += fmt::format(" ({:+.2f}%)", *delta);
    return value;
}

std::string fmt_opt(std::optional<double> v, const char* spec)
{
    return v ? fmt::format(fmt::runtime(spec), *v) : std::string("n/a");
}

std::string emit_markdown(const Report& report)
{
    const auto md = model_deltas(report);
    const auto cd = category_deltas(report);
    const auto summary = summarize(report);
    auto cell = [](const DeltaTable& t, const std::string& row,
                   const std::string& col) -> std::optional<double> {
        const auto r = std::find(t.rows.begin(), t.rows.end(), row);
        const auto c = std::find(t.columns.begin(), t.columns.end(), col);
        if (r == t.rows.end() || c == t.columns.end()) return std::nullopt;
        return t.at(static_cast<std::size_t>(r - t.rows.begin()),
                    static_cast<std::size_t>(c - t.columns.begin()));
    };

    std::string out = "## Test Set Metrics\n\n";
    out += "| Model | Conf | mAP50 | mAP95 | F1 | box_mse | coverage | fp_rate | "
           "class_disagreement |\n";
    out += "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& m : report.models) {
        out += fmt::format(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n", m.name,
            m.conf ? fmt::format("{:g}", *m.conf) : "-",
            with_delta(fmt::format("{:.5f}", m.map50), cell(md, m.name, "mAP50")),
            with_delta(fmt::format("{:.5f}", m.map5095), cell(md, m.name, "mAP95")),
            with_delta(fmt::format("{:.2f} @ {:.3f}", m.best_f1, m.best_f1_confidence),
                       cell(md, m.name, "F1")),
            with_delta(fmt_opt(m.box_mse, "{:.6g}"), cell(md, m.name, "box_mse")),
            with_delta(fmt_opt(m.coverage, "{:.4f}"), cell(md, m.name, "coverage")),
            with_delta(fmt_opt(m.fp_rate, "{:.4f}"), cell(md, m.name, "fp_rate")),
            with_delta(fmt_opt(m.class_disagreement, "{:.4f}"),
                       cell(md, m.name, "class_disagreement")));
    }
    out += "\nmAP95 is the mean AP over IoU thresholds 0.50:0.05:0.95. Deltas are ";
    out += report.delta_mode == DeltaMode::Percent ? "percent change" : "100 * ln(value/baseline)";
    out += " against the row's baseline.\n";

    bool any_category = false;
    for (const auto& m : report.models) any_category = any_category || !m.per_category.empty();
    if (any_category) {
        out += "\n## Per Class Test Set Metrics\n\n";
        out += "| Model | Class | P | R | mAP50 | mAP95 |\n";
        out += "|---|---|---|---|---|---|\n";
        for (const auto& m : report.models) {
            for (const auto& c : m.per_category) {
                auto col = [&](const char* metric) {
                    return cell(cd, m.name, fmt::format("{}/{}", c.category, metric));
                };
                out += fmt::format("| {} | {} | {} | {} | {} | {} |\n", m.name,
                                   c.category,
                                   with_delta(fmt::format("{:.3f}", c.precision), col("P")),
                                   with_delta(fmt::format("{:.3f}", c.recall), col("R")),
                                   with_delta(fmt::format("{:.3f}", c.map50), col("mAP50")),
                                   with_delta(fmt::format("{:.3f}", c.map5095), col("mAP95")));
            }
        }
    }

    out += "\n## Summary\n\n";
    if (summary.max_map50_gap_points) {
        out += fmt::format("- Max mAP50 gap vs baseline: {:.4f} points ({} relative) in {}\n",
                           *summary.max_map50_gap_points,
                           summary.max_map50_gap_percent
                               ? fmt::format("{:.2f}%", *summary.max_map50_gap_percent)
                               : std::string("n/a"),
                           summary.max_map50_gap_row);
    }
    for (const auto& [name, v] : summary.category_signed_mean) {
        out += fmt::format("- Mean per-class delta, {}: {:+.2f}%\n", name, v);
    }
    if (summary.overall_signed_mean) {
        out += fmt::format("- Mean per-class delta, all classes: {:+.2f}%\n",
                           *summary.overall_signed_mean);
    }
    return out;
}

std::optional<double> read_opt(const nlohmann::json& row, const char* key)
{
    if (!row.contains(key) || row.at(key).is_null()) return std::nullopt;
    return row.at(key).get<double>();
}

}  // namespace

std::string emit_report(const Report& report, ReportFormat format)
{
    switch (format) {
    case ReportFormat::Json: return emit_json(report);
    case ReportFormat::Csv: return emit_csv(report);
    case ReportFormat::Markdown: return emit_markdown(report);
    }
    return {};
}

std::string emit_eval_summary(const EvalSummary& e, ReportFormat format)
{
    if (format == ReportFormat::Json) {
        ojson doc;
        doc["iou_threshold"] = e.iou_threshold;
        doc["map50"] = e.map50;
        doc["map5095"] = e.map5095;
        doc["best_f1"] = e.best_f1;
        doc["best_f1_confidence"] = e.best_f1_confidence;
        ojson cats = ojson::array();
        for (const auto& c : e.categories) {
            cats.push_back({{"category_id", c.category_id},
                            {"name", c.name},
                            {"truths", c.truths},
                            {"detections", c.detections},
                            {"ap50", c.ap50},
                            {"ap5095", c.ap5095},
                            {"precision", c.precision},
                            {"recall", c.recall},
                            {"f1", c.f1}});
        }
        doc["categories"] = std::move(cats);
        doc["f1_curve"] = e.f1_curve;
        return doc.dump(2) + "\n";
    }
    if (format == ReportFormat::Csv) {
        std::string out = "category,truths,detections,ap50,ap5095,precision,recall,f1\n";
        for (const auto& c : e.categories) {
            out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(c.name), c.truths,
                               c.detections, c.ap50, c.ap5095, c.precision, c.recall, c.f1);
        }
        out += fmt::format("all,,,{},{},,,{}\n", e.map50, e.map5095, e.best_f1);
        return out;
    }
    std::string out = "| Class | Instances | P | R | mAP50 | mAP95 |\n|---|---|---|---|---|---|\n";
    for (const auto& c : e.categories) {
        out += fmt::format("| {} | {} | {:.3f} | {:.3f} | {:.3f} | {:.3f} |\n", c.name, c.truths,
                           c.precision, c.recall, c.ap50, c.ap5095);
    }
    out += fmt::format("\nmAP50 {:.5f}, mAP95 {:.5f}, F1 {:.2f} @ {:.3f}\n", e.map50, e.map5095,
                       e.best_f1, e.best_f1_confidence);
    return out;
}

Report report_from_json(std::string_view json_text)
{
    Report r;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        r.delta_mode = parse_delta_mode(doc.value("delta_mode", std::string("percent")));
        for (const auto& row : doc.at("models")) {
            ModelRow m;
            m.name = row.at("name").get<std::string>();
            m.train_set = row.value("train_set", std::string());
            m.conf = read_opt(row, "conf");
            if (row.contains("baseline") && !row.at("baseline").is_null()) {
                m.baseline = row.at("baseline").get<std::string>();
            }
            m.map50 = row.at("map50").get<double>();
            m.map5095 = row.at("map5095").get<double>();
            m.best_f1 = row.value("best_f1", 0.0);
            m.best_f1_confidence = row.value("best_f1_confidence", 0.0);
            m.box_mse = read_opt(row, "box_mse");
            m.coverage = read_opt(row, "coverage");
            m.fp_rate = read_opt(row, "fp_rate");
            m.class_disagreement = read_opt(row, "class_disagreement");
            if (row.contains("per_category")) {
                for (const auto& c : row.at("per_category")) {
                    m.per_category.push_back({c.at("category").get<std::string>(),
                                              c.at("precision").get<double>(),
                                              c.at("recall").get<double>(),
                                              c.at("map50").get<double>(),
                                              c.at("map5095").get<double>()});
                }
            }
            r.models.push_back(std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::MalformedRecord, e.what(), "report");
    }
    validate(r);
    return r;
}

}  // namespace softlabel
