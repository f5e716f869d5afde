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

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "softlabel/box.hpp"
#include "softlabel/cli.hpp"
#include "softlabel/dataset.hpp"
#include "softlabel/error.hpp"
#include "softlabel/experiment.hpp"
#include "softlabel/labels.hpp"
#include "softlabel/metrics.hpp"
#include "softlabel/overlay.hpp"
#include "softlabel/pipeline.hpp"
#include "softlabel/report.hpp"
#include "softlabel/simulator.hpp"
#include "softlabel/split.hpp"
#include "softlabel/stats.hpp"
#include "softlabel/synth.hpp"

namespace py = pybind11;
using namespace softlabel;

namespace {

template <class T>
std::string repr_box(const T& b)
{
    return "Box(" + std::to_string(b.cx) + ", " + std::to_string(b.cy) + ", " + std::to_string(b.w) +
           ", " + std::to_string(b.h) + ")";
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Soft-label dataset generation and detection evaluation";

    // The module attribute keeps the type alive for the translator.
    static PyObject* error_type = py::exception<Error>(m, "SoftlabelError", PyExc_RuntimeError).ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            inst.attr("locator") = e.locator();
            PyErr_SetObject(error_type, inst.ptr());
        }
    });

    // Geometry and evaluation.
    py::class_<Box>(m, "Box")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("cx"), py::arg("cy"), py::arg("w"),
             py::arg("h"))
        .def_readwrite("cx", &Box::cx)
        .def_readwrite("cy", &Box::cy)
        .def_readwrite("w", &Box::w)
        .def_readwrite("h", &Box::h)
        .def("area", &Box::area)
        .def(py::self == py::self)
        .def("__repr__", &repr_box<Box>);

    py::class_<Annotation>(m, "Annotation")
        .def(py::init<>())
        .def(py::init<int, Box>(), py::arg("category_id"), py::arg("box"))
        .def_readwrite("category_id", &Annotation::category_id)
        .def_readwrite("box", &Annotation::box)
        .def(py::self == py::self);

    py::class_<Detection>(m, "Detection")
        .def(py::init<>())
        .def(py::init<int, Box, double>(), py::arg("category_id"), py::arg("box"), py::arg("confidence"))
        .def_readwrite("category_id", &Detection::category_id)
        .def_readwrite("box", &Detection::box)
        .def_readwrite("confidence", &Detection::confidence)
        .def(py::self == py::self);

    m.def("iou", &iou, py::arg("a"), py::arg("b"));

    py::class_<MatchSet>(m, "MatchSet")
        .def_property_readonly("pairs",
                               [](const MatchSet& s) {
                                   py::list out;
                                   for (const auto& p : s.pairs) out.append(py::make_tuple(p.detection, p.truth, p.iou));
                                   return out;
                               })
        .def_readonly("unmatched_detections", &MatchSet::unmatched_detections)
        .def_readonly("unmatched_truths", &MatchSet::unmatched_truths)
        .def_readonly("iou_threshold", &MatchSet::iou_threshold);

    m.def(
        "match_detections",
        [](const std::vector<Detection>& d, const std::vector<Annotation>& t, double thr) {
            return match_detections(d, t, thr);
        },
        py::arg("detections"), py::arg("truths"), py::arg("iou_threshold") = 0.5);

    py::class_<PRCurve>(m, "PRCurve")
        .def_property_readonly("points",
                               [](const PRCurve& c) {
                                   py::list out;
                                   for (const auto& p : c.points) out.append(py::make_tuple(p.recall, p.precision));
                                   return out;
                               })
        .def_readonly("ap", &PRCurve::ap)
        .def_readonly("iou_threshold", &PRCurve::iou_threshold);

    m.def(
        "pr_curve",
        [](const std::vector<Detection>& d, const std::vector<Annotation>& t, double thr) {
            return pr_curve(d, t, thr);
        },
        py::arg("detections"), py::arg("truths"), py::arg("iou_threshold") = 0.5);

    py::class_<CategoryMetrics>(m, "CategoryMetrics")
        .def_readonly("category_id", &CategoryMetrics::category_id)
        .def_readonly("name", &CategoryMetrics::name)
        .def_readonly("truths", &CategoryMetrics::truths)
        .def_readonly("detections", &CategoryMetrics::detections)
        .def_readonly("ap50", &CategoryMetrics::ap50)
        .def_readonly("ap5095", &CategoryMetrics::ap5095)
        .def_readonly("precision", &CategoryMetrics::precision)
        .def_readonly("recall", &CategoryMetrics::recall)
        .def_readonly("f1", &CategoryMetrics::f1);

    py::class_<EvalSummary>(m, "EvalSummary")
        .def_readonly("categories", &EvalSummary::categories)
        .def_readonly("map50", &EvalSummary::map50)
        .def_readonly("map5095", &EvalSummary::map5095)
        .def_readonly("best_f1", &EvalSummary::best_f1)
        .def_readonly("best_f1_confidence", &EvalSummary::best_f1_confidence)
        .def_readonly("f1_curve", &EvalSummary::f1_curve);

    m.def("map_summary", &map_summary, py::arg("detections"), py::arg("truths"), py::arg("categories"),
          py::arg("iou_threshold") = 0.5);

    // Label formats.
    m.def("parse_yolo_labels", &parse_yolo_labels, py::arg("text"), py::arg("source") = "<labels>");
    m.def(
        "emit_yolo_labels", [](const std::vector<Annotation>& a) { return emit_yolo_labels(a); },
        py::arg("annotations"));
    m.def("parse_detections", &parse_detections, py::arg("text"), py::arg("source") = "<detections>");
    m.def(
        "emit_detections", [](const std::vector<Detection>& d) { return emit_detections(d); },
        py::arg("detections"));

    // Datasets.
    py::class_<ImageRecord>(m, "ImageRecord")
        .def(py::init<>())
        .def(py::init([](std::string id, int w, int h, std::vector<Annotation> a) {
                 return ImageRecord{std::move(id), w, h, std::move(a)};
             }),
             py::arg("id"), py::arg("width"), py::arg("height"), py::arg("annotations") = std::vector<Annotation>{})
        .def_readwrite("id", &ImageRecord::id)
        .def_readwrite("width", &ImageRecord::width)
        .def_readwrite("height", &ImageRecord::height)
        .def_readwrite("annotations", &ImageRecord::annotations)
        .def_property_readonly("background", &ImageRecord::background);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readwrite("categories", &Dataset::categories)
        .def_readwrite("images", &Dataset::images)
        .def("instance_count", &Dataset::instance_count)
        .def("truth_map", &Dataset::truth_map)
        .def("skeleton", &Dataset::skeleton)
        .def(py::self == py::self);

    m.def("validate_dataset", py::overload_cast<const Dataset&>(&validate), py::arg("dataset"));
    m.def("load_dataset", &load_dataset, py::arg("manifest_path"));
    m.def(
        "save_dataset", [](const Dataset& d, const std::filesystem::path& dir) { save_dataset(d, dir); },
        py::arg("dataset"), py::arg("directory"));
    m.def("load_detections", &load_detections, py::arg("directory"), py::arg("dataset"));

    // Soft labels.
    py::class_<SoftLabelConfig>(m, "SoftLabelConfig")
        .def(py::init<>())
        .def_readwrite("confidence_threshold", &SoftLabelConfig::confidence_threshold)
        .def_readwrite("nms_iou", &SoftLabelConfig::nms_iou)
        .def_readwrite("keep_confidence_sidecar", &SoftLabelConfig::keep_confidence_sidecar);

    m.def(
        "generate_soft_dataset",
        [](const Dataset& source, const DetectionMap& dets, double threshold, std::optional<double> nms_iou) {
            return generate_soft_dataset(source, dets, SoftLabelConfig{threshold, nms_iou, true}).dataset;
        },
        py::arg("source"), py::arg("detections"), py::arg("confidence_threshold") = 0.3,
        py::arg("nms_iou") = std::optional<double>(0.45));

    py::class_<DiscrepancyReport>(m, "DiscrepancyReport")
        .def_readonly("box_mse", &DiscrepancyReport::box_mse)
        .def_readonly("coverage", &DiscrepancyReport::coverage)
        .def_readonly("false_positive_rate", &DiscrepancyReport::false_positive_rate)
        .def_readonly("class_disagreement", &DiscrepancyReport::class_disagreement)
        .def_readonly("truths", &DiscrepancyReport::truths)
        .def_readonly("soft_labels", &DiscrepancyReport::soft_labels)
        .def_readonly("matched", &DiscrepancyReport::matched);

    m.def("compare_datasets", &compare_datasets, py::arg("truth"), py::arg("soft"));

    // Dataset tools.
    m.def(
        "split_dataset",
        [](const Dataset& d, std::array<double, 3> ratios, std::uint64_t seed) {
            const auto s = split_dataset(d, SplitSpec{ratios, seed});
            return py::make_tuple(s.train1, s.train2, s.valid);
        },
        py::arg("dataset"), py::arg("ratios") = std::array<double, 3>{0.4, 0.4, 0.2}, py::arg("seed") = 0);
    m.def(
        "dataset_stats_json", [](const Dataset& d, int grid, int bins) { return stats_json(dataset_stats(d, grid, bins)); },
        py::arg("dataset"), py::arg("grid") = 64, py::arg("bins") = 50);
    m.def(
        "render_overlay",
        [](const ImageRecord& img, const std::vector<Annotation>& truth, const std::vector<Annotation>& soft,
           const std::string& href) { return render_overlay(img, truth, soft, {href, 2.0}); },
        py::arg("image"), py::arg("truth"), py::arg("soft"), py::arg("image_href") = "");
    m.def(
        "synth_dataset",
        [](std::size_t n, std::uint64_t seed, double background) {
            SynthConfig cfg;
            cfg.n_images = n;
            cfg.seed = seed;
            cfg.background_fraction = background;
            return synth_dataset(cfg);
        },
        py::arg("n_images"), py::arg("seed") = 0, py::arg("background_fraction") = 1.0 / 3.0);

    // Simulator.
    m.def(
        "simulate_detections",
        [](const Dataset& d, const std::string& noise_json, bool zero_noise, std::uint64_t seed) {
            NoiseModel model = zero_noise ? NoiseModel::zero_noise(seed) : parse_noise_model(noise_json);
            if (!zero_noise && noise_json.find("\"seed\"") == std::string::npos) model.seed = seed;
            return simulate_detections(d, model);
        },
        py::arg("dataset"), py::arg("noise_json") = "{}", py::arg("zero_noise") = false, py::arg("seed") = 0);

    // Reports and the harness.
    m.def(
        "relative_delta",
        [](double baseline, double value, const std::string& mode) {
            return relative_delta(baseline, value, parse_delta_mode(mode));
        },
        py::arg("baseline"), py::arg("value"), py::arg("mode") = "percent");
    m.def(
        "render_report",
        [](const std::string& json, const std::string& format) {
            return emit_report(report_from_json(json), parse_report_format(format));
        },
        py::arg("report_json"), py::arg("format") = "markdown");
    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::filesystem::path& out) {
            auto cfg = parse_experiment_config(config_json);
            cfg.output_dir = out;
            py::gil_scoped_release release;
            return emit_report(run_experiment(cfg).report, ReportFormat::Json);
        },
        py::arg("config_json"), py::arg("output_dir"));
    m.def(
        "run_cli", [](const std::vector<std::string>& args) { return run_cli(args); }, py::arg("args"));
}
