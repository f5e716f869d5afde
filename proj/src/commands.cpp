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

#include "softlabel/cli.hpp"

#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "softlabel/dataset.hpp"
#include "softlabel/error.hpp"
#include "softlabel/experiment.hpp"
#include "softlabel/file_util.hpp"
#include "softlabel/logging.hpp"
#include "softlabel/overlay.hpp"
#include "softlabel/pipeline.hpp"
#include "softlabel/report.hpp"
#include "softlabel/simulator.hpp"
#include "softlabel/split.hpp"
#include "softlabel/stats.hpp"
#include "softlabel/synth.hpp"
#include "softlabel/xview.hpp"

namespace softlabel {

namespace fs = std::filesystem;

namespace {

void emit(const std::string& out_path, const std::string& text)
{
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        std::cout.flush();
    } else {
        write_text_atomic(out_path, text);
    }
}

std::string discrepancy_json(const DiscrepancyReport& d)
{
    nlohmann::ordered_json j;
    j["box_mse"] = d.box_mse;
    j["coverage"] = d.coverage;
    j["false_positive_rate"] = d.false_positive_rate;
    j["class_disagreement"] = d.class_disagreement;
    j["truths"] = d.truths;
    j["soft_labels"] = d.soft_labels;
    j["matched"] = d.matched;
    j["images"] = d.images;
    return j.dump(2) + "\n";
}

DetectionMap filtered(const DetectionMap& dets, double conf)
{
    if (conf <= 0.0) return dets;
    DetectionMap out;
    for (const auto& [id, list] : dets) out.emplace(id, filter_confidence(list, conf));
    return out;
}

struct Options {
    std::string truth, detections, soft, manifest, out, format = "json", image, href, noise,
        config, geojson, dims, remap, input, delta_mode = "percent";
    double iou = 0.5;
    double conf = 0.0;
    double nms_iou = 0.45;
    bool no_nms = false;
    bool no_sidecar = false;
    bool compare = false;
    bool zero_noise = false;
    std::uint64_t seed = 0;
    std::vector<double> ratios{0.4, 0.4, 0.2};
    std::vector<double> confs;
    int grid = 64;
    int bins = 50;
    std::size_t images = 2000;
    double background = 1.0 / 3.0;
    double mean_objects = 10.0;
    int overlays = 16;
};

}  // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"Soft-label dataset generation and detection evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "softlabel 0.1.0");
    Options o;

    auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
    eval->add_option("--truth", o.truth, "Ground-truth manifest")->required();
    eval->add_option("--detections", o.detections, "Directory of <id>.txt detection files")
        ->required();
    eval->add_option("--iou", o.iou, "IoU for the AP50 column and the F1 sweep")
        ->check(CLI::Range(0.0, 1.0));
    eval->add_option("--conf", o.conf, "Ignore detections below this confidence")
        ->check(CLI::Range(0.0, 1.0));
    eval->add_option("--format", o.format, "json, csv or markdown");
    eval->add_option("--out", o.out, "Output file (default stdout)");

    auto* softlabel = app.add_subcommand("softlabel", "Turn detections into a soft-label dataset");
    softlabel->add_option("--truth", o.truth, "Manifest whose images are labelled")->required();
    softlabel->add_option("--detections", o.detections, "Directory of detection files")
        ->required();
    softlabel->add_option("--conf", o.conf, "Confidence threshold")->check(CLI::Range(0.0, 1.0));
    softlabel->add_option("--nms", o.nms_iou, "NMS IoU threshold")->check(CLI::Range(0.0, 1.0));
    softlabel->add_flag("--no-nms", o.no_nms, "Disable non-maximum suppression");
    softlabel->add_flag("--no-sidecar", o.no_sidecar, "Do not write .conf sidecars");
    softlabel->add_flag("--compare", o.compare,
                        "Print the discrepancy of the soft labels against --truth");
    softlabel->add_option("--out", o.out, "Output directory")->required();

    auto* split = app.add_subcommand("split", "Seeded train1/train2/valid split");
    split->add_option("--manifest", o.manifest, "Dataset manifest")->required();
    split->add_option("--seed", o.seed, "Shuffle seed");
    split->add_option("--ratios", o.ratios, "Three ratios summing to 1")->expected(3);
    split->add_option("--out", o.out, "Output directory")->required();

    auto* stats = app.add_subcommand("stats", "Instance counts, center heatmap, size histograms");
    stats->add_option("--manifest", o.manifest, "Dataset manifest")->required();
    stats->add_option("--grid", o.grid, "Heatmap cells per side");
    stats->add_option("--bins", o.bins, "Histogram bins");
    stats->add_option("--out", o.out, "Output file (default stdout)");

    auto* render = app.add_subcommand("render", "SVG overlay of true (green) and soft (red) boxes");
    render->add_option("--truth", o.truth, "Ground-truth manifest")->required();
    render->add_option("--soft", o.soft, "Soft-label manifest");
    render->add_option("--image", o.image, "Image id")->required();
    render->add_option("--href", o.href, "Background image reference");
    render->add_option("--out", o.out, "Output file (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "Synthetic detector over a dataset");
    simulate->add_option("--manifest", o.manifest, "Dataset manifest")->required();
    simulate->add_option("--noise", o.noise, "Noise model JSON");
    auto* seed_opt = simulate->add_option("--seed", o.seed, "Override the noise model seed");
    simulate->add_flag("--zero-noise", o.zero_noise, "Emit the truths at confidence 1");
    simulate->add_option("--out", o.out, "Output directory for detection files")->required();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic ground-truth dataset");
    synth->add_option("--images", o.images, "Number of images");
    synth->add_option("--background", o.background, "Background image fraction")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--mean-objects", o.mean_objects, "Mean boxes per non-background image");
    synth->add_option("--seed", o.seed, "Seed");
    synth->add_option("--out", o.out, "Output directory")->required();

    auto* experiment = app.add_subcommand("experiment", "Full split/soft-label/evaluate flow");
    experiment->add_option("--config", o.config, "Experiment config JSON");
    auto* exp_images = experiment->add_option("--images", o.images, "Synthetic dataset size");
    auto* exp_seed = experiment->add_option("--seed", o.seed, "Master seed");
    auto* exp_conf = experiment->add_option("--conf", o.confs, "Soft-label thresholds");
    auto* exp_overlays = experiment->add_option("--overlays", o.overlays,
                                                "Overlays per soft dataset (-1 for all)");
    auto* exp_delta = experiment->add_option("--delta-mode", o.delta_mode, "percent or log_ratio");
    auto* exp_format =
        experiment->add_option("--format", o.format, "Report printed to stdout (markdown)");
    auto* exp_out = experiment->add_option("--out", o.out, "Output directory");

    auto* ingest = app.add_subcommand("ingest-xview", "Convert xView GeoJSON to a dataset");
    ingest->add_option("--geojson", o.geojson, "FeatureCollection file")->required();
    ingest->add_option("--dims", o.dims, "Image dimension table JSON")->required();
    ingest->add_option("--remap", o.remap, "Type id remap table JSON")->required();
    ingest->add_option("--out", o.out, "Output directory")->required();

    auto* report = app.add_subcommand("report", "Recompute deltas and aggregates of a report");
    report->add_option("--in", o.input, "Report JSON")->required();
    report->add_option("--format", o.format, "json, csv or markdown");
    auto* rep_delta = report->add_option("--delta-mode", o.delta_mode, "percent or log_ratio");
    report->add_option("--out", o.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (*eval) {
            const auto format = parse_report_format(o.format);
            const auto truth = load_dataset(o.truth);
            const auto dets = filtered(load_detections(o.detections, truth), o.conf);
            const auto summary = map_summary(dets, truth.truth_map(), truth.categories, o.iou);
            emit(o.out, emit_eval_summary(summary, format));
        } else if (*softlabel) {
            const auto truth = load_dataset(o.truth);
            const auto dets = load_detections(o.detections, truth);
            SoftLabelConfig cfg;
            cfg.confidence_threshold = o.conf;
            cfg.nms_iou = o.no_nms ? std::nullopt : std::optional<double>(o.nms_iou);
            cfg.keep_confidence_sidecar = !o.no_sidecar;
            const auto soft = generate_soft_dataset(truth, dets, cfg);
            save_soft_dataset(soft, o.out, cfg);
            if (o.compare) {
                emit("", discrepancy_json(compare_datasets(truth, soft.dataset)));
            }
        } else if (*split) {
            SplitSpec spec;
            spec.ratios = {o.ratios[0], o.ratios[1], o.ratios[2]};
            spec.seed = o.seed;
            const auto parts = split_dataset(load_dataset(o.manifest), spec);
            save_dataset(parts.train1, fs::path(o.out) / "train1");
            save_dataset(parts.train2, fs::path(o.out) / "train2");
            save_dataset(parts.valid, fs::path(o.out) / "valid");
        } else if (*stats) {
            emit(o.out, stats_json(dataset_stats(load_dataset(o.manifest), o.grid, o.bins)));
        } else if (*render) {
            const auto truth = load_dataset(o.truth);
            const auto* img = truth.find(o.image);
            if (img == nullptr) {
                fail(ErrorCode::DatasetMismatch, "image not in the truth manifest", o.image);
            }
            std::vector<Annotation> soft_annotations;
            if (!o.soft.empty()) {
                const auto soft = load_dataset(o.soft);
                const auto* s = soft.find(o.image);
                if (s == nullptr) {
                    fail(ErrorCode::DatasetMismatch, "image not in the soft manifest", o.image);
                }
                soft_annotations = s->annotations;
            }
            emit(o.out, render_overlay(*img, img->annotations, soft_annotations, {o.href}));
        } else if (*simulate) {
            const auto dataset = load_dataset(o.manifest);
            NoiseModel model;
            if (o.zero_noise) {
                model = NoiseModel::zero_noise();
            } else if (!o.noise.empty()) {
                model = parse_noise_model(read_text_file(o.noise));
            }
            if (seed_opt->count() > 0) model.seed = o.seed;
            save_detections(simulate_detections(dataset, model), o.out);
        } else if (*synth) {
            SynthConfig cfg;
            cfg.n_images = o.images;
            cfg.background_fraction = o.background;
            cfg.mean_objects = o.mean_objects;
            cfg.seed = o.seed;
            save_dataset(synth_dataset(cfg), o.out);
        } else if (*experiment) {
            ExperimentConfig cfg;
            if (!o.config.empty()) {
                const fs::path path(o.config);
                cfg = parse_experiment_config(read_text_file(path), path.parent_path());
            }
            if (exp_images->count() > 0) cfg.synth.n_images = o.images;
            if (exp_seed->count() > 0) cfg.seed = o.seed;
            if (exp_conf->count() > 0) cfg.thresholds = o.confs;
            if (exp_overlays->count() > 0) cfg.overlay_limit = o.overlays;
            if (exp_delta->count() > 0) cfg.delta_mode = parse_delta_mode(o.delta_mode);
            if (exp_out->count() > 0) cfg.output_dir = o.out;
            const auto format =
                exp_format->count() > 0 ? parse_report_format(o.format) : ReportFormat::Markdown;
            const auto result = run_experiment(cfg);
            emit("", emit_report(result.report, format));
        } else if (*ingest) {
            const auto result = ingest_xview(read_text_file(o.geojson),
                                             parse_image_dims(read_text_file(o.dims)),
                                             parse_remap_table(read_text_file(o.remap)));
            save_dataset(result.dataset, o.out);
            nlohmann::ordered_json j;
            j["total"] = result.total;
            j["mapped"] = result.mapped;
            nlohmann::ordered_json skipped = nlohmann::ordered_json::object();
            for (const auto& [type, n] : result.skipped) skipped[std::to_string(type)] = n;
            j["skipped"] = std::move(skipped);
            emit("", j.dump(2) + "\n");
        } else if (*report) {
            auto r = report_from_json(read_text_file(o.input));
            if (rep_delta->count() > 0) r.delta_mode = parse_delta_mode(o.delta_mode);
            emit(o.out, emit_report(r, parse_report_format(o.format)));
        }
    } catch (const Error& e) {
        std::cerr << "softlabel: " << e.what() << "\n";
        return exit_code(e.code());
    }
    return 0;
}

int run_cli(const std::vector<std::string>& args)
{
    std::vector<const char*> argv{"softlabel"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace softlabel
