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

#include <cmath>

#include "doctest.h"
#include "reference_tables.hpp"
#include "softlabel/error.hpp"
#include "softlabel/report.hpp"
#include "test_util.hpp"

using namespace softlabel;
using testutil::code;
using testutil::error_code_of;

TEST_CASE("relative delta")
{
    CHECK(relative_delta(0.0415, 0.042767) == doctest::Approx(100 * (0.042767 - 0.0415) / 0.0415));
    CHECK(relative_delta(0.0415, 0.042767) == doctest::Approx(3.053).epsilon(1e-3));
    CHECK(relative_delta(0.0415, 0.042767, DeltaMode::LogRatio) ==
          doctest::Approx(100 * std::log(0.042767 / 0.0415)));
    CHECK(std::abs(relative_delta(0.0415, 0.042767, DeltaMode::LogRatio) - 3.01) < 0.005);
    CHECK(relative_delta(0.37, 0.37) == 0.0);
    CHECK(error_code_of([] { relative_delta(0.0, 0.5); }) == code(ErrorCode::UndefinedDelta));
    CHECK(parse_delta_mode("log-ratio") == DeltaMode::LogRatio);
    CHECK(to_string(parse_delta_mode(to_string(DeltaMode::Percent))) == "percent");
}

TEST_CASE("aggregate modes and empty selections")
{
    DeltaTable t;
    t.rows = {"a", "b"};
    t.columns = {"x", "y"};
    t.cells = {1.0, -3.0, std::nullopt, 5.0};
    CHECK(aggregate_deltas(t, {}, AggregateMode::SignedMean) == doctest::Approx(1.0));
    CHECK(aggregate_deltas(t, {}, AggregateMode::AbsoluteMean) == doctest::Approx(3.0));
    CHECK(aggregate_deltas(t, {{"a"}, {}}, AggregateMode::SignedMean) == doctest::Approx(-1.0));
    CHECK(aggregate_deltas(t, {{}, {"y"}}, AggregateMode::SignedMean) == doctest::Approx(1.0));
    CHECK(error_code_of([&] { aggregate_deltas(t, {{"b"}, {"x"}}, AggregateMode::SignedMean); }) ==
          code(ErrorCode::EmptySelection));
    CHECK(error_code_of([&] { aggregate_deltas(t, {{"zzz"}, {}}, AggregateMode::SignedMean); }) ==
          code(ErrorCode::EmptySelection));
}

TEST_CASE("every stored delta equals a recomputed relative delta")
{
    for (auto mode : {DeltaMode::Percent, DeltaMode::LogRatio}) {
        const auto r = reference::report(mode);
        const auto md = model_deltas(r);
        REQUIRE(md.rows.size() == 4);
        for (std::size_t i = 0; i < md.rows.size(); ++i) {
            const auto& m = *r.find(md.rows[i]);
            const auto& b = *r.find(*m.baseline);
            CHECK(*md.at(i, 0) == relative_delta(b.map50, m.map50, mode));
            CHECK(*md.at(i, 1) == relative_delta(b.map5095, m.map5095, mode));
            CHECK(*md.at(i, 3) == relative_delta(*b.box_mse, *m.box_mse, mode));
        }
        const auto cd = category_deltas(r);
        CHECK(cd.columns.size() == 12);
        for (std::size_t i = 0; i < cd.rows.size(); ++i) {
            const auto& m = *r.find(cd.rows[i]);
            const auto& b = *r.find(*m.baseline);
            for (std::size_t c = 0; c < 3; ++c) {
                CHECK(*cd.at(i, 4 * c) == relative_delta(b.per_category[c].precision, m.per_category[c].precision, mode));
                CHECK(*cd.at(i, 4 * c + 3) == relative_delta(b.per_category[c].map5095, m.per_category[c].map5095, mode));
            }
        }
    }
}

TEST_CASE("JSON round trip")
{
    const auto r = reference::report();
    const auto json = emit_report(r, ReportFormat::Json);
    const auto back = report_from_json(json);
    CHECK(back == r);
    CHECK(emit_report(back, ReportFormat::Json) == json);
    auto lr = reference::report(DeltaMode::LogRatio);
    lr.models[1].coverage = std::nullopt;
    CHECK(report_from_json(emit_report(lr, ReportFormat::Json)) == lr);
}

TEST_CASE("CSV rows")
{
    auto r = reference::report();
    const auto full = emit_report(r, ReportFormat::Csv);
    auto lines = [](const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); };
    CHECK(lines(full) == 1 + 6 + 18);
    for (auto& m : r.models) m.per_category.clear();
    const auto summary_only = emit_report(r, ReportFormat::Csv);
    CHECK(lines(summary_only) == 1 + 6);
    CHECK(summary_only.find(",all,") != std::string::npos);
    CHECK(summary_only.find(",ship,") == std::string::npos);
}

TEST_CASE("markdown layout")
{
    const auto md = emit_report(reference::report(), ReportFormat::Markdown);
    const auto header = md.substr(md.find("| Model"), md.find('\n', md.find("| Model")) - md.find("| Model"));
    for (const char* col : {"Model", "Conf", "mAP50", "mAP95", "F1"}) {
        CHECK(header.find(col) != std::string::npos);
    }
    CHECK(md.find("## Per Class Test Set Metrics") != std::string::npos);
    CHECK(md.find("| Train Set 2 Soft 0.5 | 0.5 | 0.71681 (-7.47%)") != std::string::npos);
    CHECK(md.find("0.0579 points") != std::string::npos);
}

TEST_CASE("report validation")
{
    auto r = reference::report();
    r.models[1].baseline = "nobody";
    CHECK(error_code_of([&] { validate(r); }) == code(ErrorCode::BadConfig));
    r = reference::report();
    r.models.push_back(r.models[0]);
    CHECK(error_code_of([&] { validate(r); }) == code(ErrorCode::BadConfig));
    CHECK(error_code_of([] { report_from_json("{\"models\": 3}"); }) != -1);
    CHECK(error_code_of([] { parse_report_format("xml"); }) == code(ErrorCode::BadConfig));
}

TEST_CASE("eval summary emission")
{
    EvalSummary e;
    e.map50 = 0.5;
    e.map5095 = 0.25;
    e.best_f1 = 0.6;
    e.best_f1_confidence = 0.419;
    e.categories.push_back({0, "ship", 3, 4, 0.5, 0.25, 0.75, 0.5, 0.6});
    const auto md = emit_eval_summary(e, ReportFormat::Markdown);
    CHECK(md.find("0.60 @ 0.419") != std::string::npos);
    const auto js = emit_eval_summary(e, ReportFormat::Json);
    CHECK(js.find("\"map5095\"") != std::string::npos);
    CHECK(emit_eval_summary(e, ReportFormat::Csv).find("ship") != std::string::npos);
}
