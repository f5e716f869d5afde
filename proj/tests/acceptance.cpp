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

// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "instances.hpp"
#include "oracles.hpp"
#include "reference_tables.hpp"
#include "softlabel/cli.hpp"
#include "softlabel/dataset.hpp"
#include "softlabel/error.hpp"
#include "softlabel/experiment.hpp"
#include "softlabel/labels.hpp"
#include "softlabel/logging.hpp"
#include "softlabel/metrics.hpp"
#include "softlabel/pipeline.hpp"
#include "softlabel/report.hpp"
#include "softlabel/simulator.hpp"
#include "softlabel/synth.hpp"
#include "test_util.hpp"

using namespace softlabel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok, std::move(detail)}; }

double signed_mean(const DeltaSelector& sel)
{
    return aggregate_deltas(category_deltas(reference::report()), sel, AggregateMode::SignedMean);
}

const std::vector<std::string> kSoftRows{"Train Set 1 Soft 0.3", "Train Set 1 Soft 0.5",
                                         "Train Set 2 Soft 0.3", "Train Set 2 Soft 0.5"};

Outcome plane_drop()
{
    const double v = signed_mean({{"Train Set 1 Soft 0.5", "Train Set 2 Soft 0.5"},
                                  {"plane/P", "plane/R", "plane/mAP50", "plane/mAP95"}});
    return check(std::abs(v - -8.49) <= 0.01, fmt::format("plane tau=0.5 signed mean {:.4f}%", v));
}

Outcome car_drop()
{
    const double v = signed_mean({kSoftRows, {"car/P", "car/R", "car/mAP50", "car/mAP95"}});
    return check(std::abs(v - -0.64) <= 0.02, fmt::format("car signed mean over 16 deltas {:.4f}%", v));
}

Outcome overall_drop()
{
    const auto table = category_deltas(reference::report());
    std::size_t n = 0;
    for (const auto& c : table.cells) n += c.has_value();
    const double v = signed_mean({});
    return check(n == 48 && std::abs(v - -4.44) <= 0.02,
                 fmt::format("signed mean over {} deltas {:.4f}%", n, v));
}

Outcome loss_columns()
{
    DeltaTable t;
    t.columns = {"box", "obj", "cls"};
    for (const auto& d : reference::printed_loss_deltas()) {
        t.rows.push_back("row" + std::to_string(t.rows.size()));
        t.cells.insert(t.cells.end(), {d.box, d.obj, d.cls});
    }
    const double bo = aggregate_deltas(t, {{}, {"box", "obj"}}, AggregateMode::AbsoluteMean);
    const double cl = aggregate_deltas(t, {{}, {"cls"}}, AggregateMode::AbsoluteMean);
    return check(std::abs(bo - 11.35) < 1e-9 && std::abs(cl - 44.59) < 1e-9,
                 fmt::format("box+objectness {:.6f}%, classification {:.6f}%", bo, cl));
}

Outcome map_gap()
{
    const auto r = reference::report();
    const auto s = summarize(r);
    const auto md = emit_report(r, ReportFormat::Markdown);
    const bool ok = s.max_map50_gap_points && std::abs(*s.max_map50_gap_points - 0.05789) < 1e-9 &&
                    s.max_map50_gap_row == "Train Set 2 Soft 0.5" &&
                    md.find("0.0579 points") != std::string::npos;
    return check(ok, fmt::format("max gap {:.5f} points ({:.2f}% relative) in {}",
                                 s.max_map50_gap_points.value_or(-1), s.max_map50_gap_percent.value_or(-1),
                                 s.max_map50_gap_row));
}

Outcome metric_oracle()
{
    std::mt19937_64 gen(6);
    double worst = 0.0;
    std::size_t compared = 0, order_failures = 0;
    const std::vector<std::string> cats{"a", "b", "c"};
    for (int trial = 0; trial < 1000; ++trial) {
        auto images = testutil::random_instance(gen, 3);
        const auto [dmap, tmap] = testutil::to_maps(images);
        for (int c = 0; c < 3; ++c) {
            // pr_curve takes one category of one image.
            std::vector<Detection> d;
            std::vector<Annotation> t;
            for (const auto& x : dmap.begin()->second) if (x.category_id == c) d.push_back(x);
            for (const auto& x : tmap.begin()->second) if (x.category_id == c) t.push_back(x);
            if (t.empty()) continue;
            const std::vector<oracle::Image> one{images.front()};
            worst = std::max(worst, std::abs(pr_curve(d, t, 0.5).ap - oracle::category_ap(one, c, 0.5)));
            ++compared;
        }
        std::size_t truths = 0;
        for (const auto& [id, t] : tmap) truths += t.size();
        if (truths == 0) continue;
        const auto base = map_summary(dmap, tmap, cats);
        for (const auto& m : base.categories) {
            worst = std::max(worst, std::abs(m.ap50 - oracle::category_ap(images, m.category_id, 0.5)));
        }
        // Permute images and rename them in an order-preserving way.
        auto perm = images;
        std::shuffle(perm.begin(), perm.end(), gen);
        std::sort(perm.begin(), perm.end(), [](auto& a, auto& b) { return a.id < b.id; });
        for (auto& im : perm) im.id = "z" + im.id;
        const auto [pd, pt] = testutil::to_maps(perm);
        const auto p = map_summary(pd, pt, cats);
        order_failures += p.map50 != base.map50 || p.map5095 != base.map5095;
    }
    return check(worst <= 1e-9 && compared > 500 && order_failures == 0,
                 fmt::format("{} category curves, max |AP - oracle| = {:.3g}, order failures {}", compared,
                             worst, order_failures));
}

Outcome identity_chain()
{
    SynthConfig sc;
    sc.n_images = 300;
    sc.seed = 8;
    const auto truth = synth_dataset(sc);
    const auto dets = simulate_detections(truth, NoiseModel::zero_noise(4));
    bool ok = true;
    for (double tau : {0.3, 0.5}) {
        const auto soft = generate_soft_dataset(truth.skeleton(), dets, {tau, 0.45, true});
        const auto r = compare_datasets(truth, soft.dataset);
        ok = ok && soft.dataset == truth && r.box_mse == 0 && r.coverage == 1 && r.false_positive_rate == 0 &&
             r.class_disagreement == 0;
    }
    const auto s = map_summary(dets, truth.truth_map(), truth.categories);
    ok = ok && s.map50 == 1.0 && s.map5095 == 1.0 && s.best_f1 == 1.0;
    return check(ok, fmt::format("map50 {} map5095 {} best_f1 {}", s.map50, s.map5095, s.best_f1));
}

Outcome dropout()
{
    SynthConfig sc;
    sc.n_images = 1500;
    sc.background_fraction = 0.0;
    sc.seed = 21;
    const auto truth = synth_dataset(sc);
    NoiseModel pure = NoiseModel::zero_noise(5);
    pure.drop_rate = 0.3;
    const auto dets = simulate_detections(truth, pure);
    const auto soft = generate_soft_dataset(truth.skeleton(), dets, {0.0, std::nullopt, true});
    const double cov = compare_datasets(truth, soft.dataset).coverage;

    NoiseModel noisy;
    noisy.drop_rate = 0.3;
    noisy.seed = 5;
    const auto nd = simulate_detections(truth, noisy);
    bool monotone = true;
    double last = 2.0;
    std::string sweep;
    for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto s = generate_soft_dataset(truth.skeleton(), nd, {tau, 0.45, true});
        const double c = compare_datasets(truth, s.dataset).coverage;
        monotone = monotone && c <= last;
        last = c;
        sweep += fmt::format(" {:.3f}", c);
    }
    return check(truth.instance_count() >= 10000 && std::abs(cov - 0.70) <= 0.02 && monotone,
                 fmt::format("{} truths, coverage {:.4f}; sweep{}", truth.instance_count(), cov, sweep));
}

Outcome round_trips()
{
    std::mt19937_64 gen(9);
    std::uniform_int_distribution<int> n(0, 12), cat(0, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0), s(1e-6, 1.0);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<Annotation> a(static_cast<std::size_t>(n(gen)));
        for (auto& x : a) x = {cat(gen), {u(gen), u(gen), s(gen), s(gen)}};
        const auto text = emit_yolo_labels(a);
        mismatches += emit_yolo_labels(parse_yolo_labels(text)) != text;
    }
    const std::string alphabet = "0123456789.-+eE \tx,nai";
    std::size_t errors = 0, unlocated = 0, foreign = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string line = "2 0.512345 0.400000 0.250000 0.125000";
        for (int e = 0, k = 1 + static_cast<int>(gen() % 4); e < k; ++e) {
            const std::size_t pos = gen() % (line.size() + 1);
            switch (gen() % 3) {
                case 0: line.insert(pos, 1, alphabet[gen() % alphabet.size()]); break;
                case 1: if (pos < line.size()) line.erase(pos, 1); break;
                default: if (pos < line.size()) line[pos] = alphabet[gen() % alphabet.size()];
            }
        }
        try {
            parse_yolo_labels(line, "fuzz.txt");
        } catch (const Error& e) {
            ++errors;
            unlocated += e.locator() != "fuzz.txt:1";
        } catch (...) {
            ++foreign;
        }
    }
    return check(mismatches == 0 && unlocated == 0 && foreign == 0,
                 fmt::format("1000 round trips, {} mismatches; 10000 mutated lines, {} rejected, {} without "
                             "locator, {} foreign exceptions",
                             mismatches, errors, unlocated, foreign));
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the CLI with stdout captured so reports do not mix with verdict lines.
int quiet_cli(const std::vector<std::string>& args)
{
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int rc = run_cli(args);
    std::cout.rdbuf(old);
    return rc;
}

double seconds(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome performance()
{
    testutil::TempDir dir("acceptance_perf");
    const auto p = dir.path();
    SynthConfig sc;
    sc.n_images = 10000;
    sc.background_fraction = 0.0;
    sc.mean_objects = 10.0;
    sc.seed = 1;
    const auto truth = synth_dataset(sc);
    save_dataset(truth, p / "gt");
    NoiseModel m;
    m.seed = 2;
    save_detections(simulate_detections(truth, m), p / "det");

    int eval_rc = -1;
    const double eval_s = seconds([&] {
        eval_rc = quiet_cli({"eval", "--truth", (p / "gt/manifest.json").string(),
                                                   "--detections", (p / "det").string(), "--format", "json",
                                                   "--out", (p / "eval.json").string()});
    });

    int rc_a = -1, rc_b = -1;
    const double exp_s = seconds([&] {
        rc_a = quiet_cli({"experiment", "--out", (p / "exp_a").string()});
    });
    rc_b = quiet_cli({"experiment", "--out", (p / "exp_b").string()});
    bool identical = true;
    for (const char* f : {"report.json", "report.md", "report.csv"}) {
        identical = identical && slurp(p / "exp_a" / f) == slurp(p / "exp_b" / f) && !slurp(p / "exp_a" / f).empty();
    }
    const bool ok = truth.images.size() == 10000 && truth.instance_count() >= 100000 && eval_rc == 0 &&
                    eval_s < 10.0 && rc_a == 0 && rc_b == 0 && exp_s < 60.0 && identical;
    return check(ok, fmt::format("eval {} images / {} boxes in {:.2f}s; experiment defaults in {:.2f}s, "
                                 "reruns identical: {}",
                                 truth.images.size(), truth.instance_count(), eval_s, exp_s, identical));
}

}  // namespace

int main()
{
    logger()->set_level(spdlog::level::err);
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"per-class arithmetic, planes", plane_drop},
        {"per-class arithmetic, cars", car_drop},
        {"per-class arithmetic, overall", overall_drop},
        {"loss-column absolute means", loss_columns},
        {"mAP50 gap display", map_gap},
        {"metric oracle equivalence", metric_oracle},
        {"zero-noise identity chain", identity_chain},
        {"dropout coverage", dropout},
        {"format round trips and fuzzing", round_trips},
        {"performance and determinism", performance},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o{false, {}};
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        fmt::print("{} {:2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
    }
    return failures == 0 ? 0 : 1;
}
