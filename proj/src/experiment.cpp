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

#include "softlabel/experiment.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "softlabel/error.hpp"
#include "softlabel/file_util.hpp"
#include "softlabel/logging.hpp"
#include "softlabel/metrics.hpp"
#include "softlabel/overlay.hpp"

namespace softlabel {

namespace fs = std::filesystem;
using nlohmann::json;

void validate(const ExperimentConfig& cfg)
{
    if (cfg.thresholds.empty()) {
        fail(ErrorCode::BadConfig, "at least one soft-label threshold is required");
    }
    for (double t : cfg.thresholds) {
        validate(SoftLabelConfig{t, cfg.nms_iou, true});
    }
    validate(cfg.split);
    if (!cfg.manifest) {
        validate(cfg.synth);
    }
    if (!(cfg.label_noise_transfer >= 0.0 && cfg.label_noise_transfer <= 1.0)) {
        fail(ErrorCode::BadConfig, "label_noise_transfer outside [0,1]");
    }
    if (cfg.output_dir.empty()) {
        fail(ErrorCode::BadConfig, "output directory is required");
    }
}

ExperimentConfig parse_experiment_config(std::string_view json_text, const fs::path& base_dir)
{
    ExperimentConfig cfg;
    try {
        const json j = json::parse(json_text);
        if (j.contains("manifest") && !j.at("manifest").is_null()) {
            cfg.manifest = base_dir / j.at("manifest").get<std::string>();
        }
        if (j.contains("synth")) {
            const auto& s = j.at("synth");
            auto& t = cfg.synth;
            t.n_images = s.value("n_images", t.n_images);
            t.categories = s.value("categories", t.categories);
            t.mixture = s.value("mixture", t.mixture);
            t.typical_size = s.value("typical_size", t.typical_size);
            t.background_fraction = s.value("background_fraction", t.background_fraction);
            t.mean_objects = s.value("mean_objects", t.mean_objects);
            t.width = s.value("width", t.width);
            t.height = s.value("height", t.height);
        }
        if (j.contains("split")) {
            const auto ratios = j.at("split").value("ratios", std::vector<double>{0.4, 0.4, 0.2});
            if (ratios.size() != 3) fail(ErrorCode::BadConfig, "split.ratios needs 3 values");
            cfg.split.ratios = {ratios[0], ratios[1], ratios[2]};
        }
        if (j.contains("noise")) {
            cfg.noise = parse_noise_model(j.at("noise").dump());
        }
        cfg.thresholds = j.value("thresholds", cfg.thresholds);
        if (j.contains("nms_iou")) {
            cfg.nms_iou = j.at("nms_iou").is_null() ? std::nullopt
                                                    : std::optional(j.at("nms_iou").get<double>());
        }
        if (j.contains("output_dir")) {
            cfg.output_dir = base_dir / j.at("output_dir").get<std::string>();
        }
        cfg.seed = j.value("seed", cfg.seed);
        cfg.overlay_limit = j.value("overlay_limit", cfg.overlay_limit);
        cfg.delta_mode = parse_delta_mode(j.value("delta_mode", std::string("percent")));
        cfg.label_noise_transfer = j.value("label_noise_transfer", cfg.label_noise_transfer);
    } catch (const json::exception& e) {
        fail(ErrorCode::BadConfig, e.what(), "experiment config");
    }
    validate(cfg);
    return cfg;
}

NoiseModel student_model(const NoiseModel& base, const DiscrepancyReport& labels,
                         std::size_t category_count, double transfer)
{
    if (!(transfer >= 0.0 && transfer <= 1.0)) {
        fail(ErrorCode::BadConfig, fmt::format("label noise transfer {} outside [0,1]", transfer));
    }
    NoiseModel m = base;
    // Unlabelled objects are learned as background.
    if (labels.coverage < 1.0) {
        m.drop_rate = 1.0 - (1.0 - base.drop_rate) * (1.0 - transfer * (1.0 - labels.coverage));
    }
    if (labels.box_mse > 0.0) {
        m.center_jitter_sd = std::sqrt(base.center_jitter_sd * base.center_jitter_sd +
                                       transfer * labels.box_mse);
    }
    if (labels.class_disagreement > 0.0 && category_count > 1) {
        auto table = confusion_matrix(base, category_count);
        const double d = transfer * labels.class_disagreement;
        const double off = 1.0 / static_cast<double>(category_count - 1);
        for (std::size_t i = 0; i < category_count; ++i) {
            for (std::size_t j = 0; j < category_count; ++j) {
                table[i][j] = (1.0 - d) * table[i][j] + d * (i == j ? 0.0 : off);
            }
        }
        m.confusion = std::move(table);
    }
    m.fp_per_image = base.fp_per_image + transfer * labels.false_positive_rate;
    return m;
}

namespace {

std::string conf_tag(double t) { return fmt::format("conf{:.2f}", t); }

ModelRow evaluate_row(const Dataset& valid, const NoiseModel& model, ModelRow row)
{
    const auto dets = simulate_detections(valid, model);
    const auto eval = map_summary(dets, valid.truth_map(), valid.categories);
    row.map50 = eval.map50;
    row.map5095 = eval.map5095;
    row.best_f1 = eval.best_f1;
    row.best_f1_confidence = eval.best_f1_confidence;
    for (const auto& c : eval.categories) {
        row.per_category.push_back({c.name, c.precision, c.recall, c.ap50, c.ap5095});
    }
    return row;
}

std::string stage(const char* name, const std::exception& e)
{
    return fmt::format("{} stage: {}", name, e.what());
}

template <typename F>
auto run_stage(const char* name, F&& f)
{
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code(), stage(name, e), e.locator());
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    const fs::path& out = cfg.output_dir;

    Dataset source = run_stage("load", [&] {
        if (cfg.manifest) return load_dataset(*cfg.manifest);
        SynthConfig synth = cfg.synth;
        synth.seed = derive_seed(cfg.seed, "synth");
        return synth_dataset(synth);
    });
    const std::size_t k = source.categories.size();

    SplitSpec split_spec = cfg.split;
    split_spec.seed = derive_seed(cfg.seed, "split");
    const auto split = run_stage("split", [&] { return split_dataset(source, split_spec); });
    run_stage("write splits", [&] {
        save_dataset(split.train1, out / "splits" / "train1");
        save_dataset(split.train2, out / "splits" / "train2");
        save_dataset(split.valid, out / "splits" / "valid");
        return 0;
    });

    NoiseModel model1 = cfg.noise;
    model1.seed = derive_seed(cfg.seed, "model/train1");
    NoiseModel model2 = cfg.noise;
    model2.seed = derive_seed(cfg.seed, "model/train2");

    struct Half {
        std::string label;
        std::string set_name;
        const Dataset* truth;
        const NoiseModel* own_model;      // model trained on this half's labels
        const NoiseModel* teacher_model;  // model of the other half, labels this one
    };
    const Half halves[] = {
        {"train1", "Train Set 1", &split.train1, &model1, &model2},
        {"train2", "Train Set 2", &split.train2, &model2, &model1},
    };

    ExperimentResult result;
    result.report.delta_mode = cfg.delta_mode;
    for (const auto& half : halves) {
        logger()->info("{}: labelling {} images", half.set_name, half.truth->images.size());
        const auto dets = run_stage("simulate", [&] {
            return simulate_detections(*half.truth, *half.teacher_model);
        });
        run_stage("write detections", [&] {
            save_detections(dets, out / "detections" / half.label);
            return 0;
        });

        ModelRow baseline;
        baseline.name = half.set_name;
        baseline.train_set = half.label;
        baseline.box_mse = 0.0;
        baseline.coverage = 1.0;
        baseline.fp_rate = 0.0;
        baseline.class_disagreement = 0.0;
        baseline = run_stage("evaluate",
                             [&] { return evaluate_row(split.valid, *half.own_model, baseline); });
        result.report.models.push_back(baseline);

        for (double tau : cfg.thresholds) {
            const SoftLabelConfig soft_cfg{tau, cfg.nms_iou, true};
            const std::string tag = fmt::format("{}_{}", half.label, conf_tag(tau));
            const auto soft = run_stage("softlabel", [&] {
                return generate_soft_dataset(half.truth->skeleton(), dets, soft_cfg);
            });
            run_stage("write soft dataset", [&] {
                save_soft_dataset(soft, out / "soft" / tag, soft_cfg);
                std::size_t written = 0;
                for (std::size_t i = 0; i < soft.dataset.images.size(); ++i) {
                    if (cfg.overlay_limit >= 0 &&
                        written >= static_cast<std::size_t>(cfg.overlay_limit)) {
                        break;
                    }
                    const auto& truth_img = half.truth->images[i];
                    const auto& soft_img = soft.dataset.images[i];
                    write_text_atomic(out / "overlays" / tag / (truth_img.id + ".svg"),
                                      render_overlay(truth_img, truth_img.annotations,
                                                     soft_img.annotations));
                    ++written;
                }
                return 0;
            });
            const auto disc =
                run_stage("compare", [&] { return compare_datasets(*half.truth, soft.dataset); });
            result.discrepancies.emplace_back(tag, disc);

            ModelRow row;
            row.name = fmt::format("{} Soft {:g}", half.set_name, tau);
            row.train_set = half.label;
            row.conf = tau;
            row.baseline = half.set_name;
            row.box_mse = disc.box_mse;
            row.coverage = disc.coverage;
            row.fp_rate = disc.false_positive_rate;
            row.class_disagreement = disc.class_disagreement;
            const auto student = student_model(*half.own_model, disc, k, cfg.label_noise_transfer);
            row = run_stage("evaluate", [&] { return evaluate_row(split.valid, student, row); });
            result.report.models.push_back(std::move(row));
        }
    }

    run_stage("write report", [&] {
        write_text_atomic(out / "report.json", emit_report(result.report, ReportFormat::Json));
        write_text_atomic(out / "report.md", emit_report(result.report, ReportFormat::Markdown));
        write_text_atomic(out / "report.csv", emit_report(result.report, ReportFormat::Csv));
        write_text_atomic(out / "noise_model.json", noise_model_json(cfg.noise));
        return 0;
    });
    return result;
}

}  // namespace softlabel
