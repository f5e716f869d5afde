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

#include "softlabel/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "softlabel/error.hpp"

namespace softlabel {

using nlohmann::json;

NoiseModel NoiseModel::zero_noise(std::uint64_t seed)
{
    NoiseModel m;
    m.drop_rate = 0.0;
    m.center_jitter_sd = 0.0;
    m.size_jitter_sd = 0.0;
    m.confusion_rate = 0.0;
    m.fp_per_image = 0.0;
    m.tp_confidence = ConfidenceModel::point_mass(1.0);
    m.fp_confidence = ConfidenceModel::point_mass(1.0);
    m.seed = seed;
    return m;
}

namespace {

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_confidence(const ConfidenceModel& c, std::string_view what)
{
    if (c.constant ? !probability(c.value) : !(c.alpha > 0.0 && c.beta > 0.0)) {
        fail(ErrorCode::BadConfig, fmt::format("invalid {} distribution", what));
    }
}

int draw_row(SplitMix64& rng, const std::vector<double>& row)
{
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
        acc += row[c];
        if (u < acc) return static_cast<int>(c);
    }
    for (std::size_t c = row.size(); c-- > 0;) {
        if (row[c] > 0.0) return static_cast<int>(c);
    }
    return 0;
}

json confidence_json(const ConfidenceModel& c)
{
    if (c.constant) return {{"constant", c.value}};
    return {{"alpha", c.alpha}, {"beta", c.beta}};
}

ConfidenceModel confidence_from(const json& j)
{
    if (j.contains("constant")) return ConfidenceModel::point_mass(j.at("constant").get<double>());
    return ConfidenceModel::beta_distribution(j.at("alpha").get<double>(), j.at("beta").get<double>());
}

}  // namespace

void validate(const NoiseModel& m, std::size_t category_count)
{
    if (!probability(m.drop_rate)) fail(ErrorCode::BadConfig, "drop_rate outside [0,1]");
    if (!probability(m.confusion_rate)) fail(ErrorCode::BadConfig, "confusion_rate outside [0,1]");
    if (!(m.center_jitter_sd >= 0.0) || !(m.size_jitter_sd >= 0.0)) {
        fail(ErrorCode::BadConfig, "jitter standard deviations must be >= 0");
    }
    if (!(m.fp_per_image >= 0.0)) fail(ErrorCode::BadConfig, "fp_per_image must be >= 0");
    if (!(m.area_drop_scale >= 0.0)) fail(ErrorCode::BadConfig, "area_drop_scale must be >= 0");
    check_confidence(m.tp_confidence, "tp_confidence");
    check_confidence(m.fp_confidence, "fp_confidence");
    if (!m.confusion.empty()) {
        if (m.confusion.size() != category_count) {
            fail(ErrorCode::BadConfig, fmt::format("confusion table has {} rows for {} categories",
                                                   m.confusion.size(), category_count));
        }
        for (const auto& row : m.confusion) {
            if (row.size() != category_count) fail(ErrorCode::BadConfig, "confusion row size");
            double sum = 0.0;
            for (double p : row) {
                if (!probability(p)) fail(ErrorCode::BadConfig, "confusion entry outside [0,1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                fail(ErrorCode::BadConfig, fmt::format("confusion row sums to {}", sum));
            }
        }
    }
}

std::vector<std::vector<double>> confusion_matrix(const NoiseModel& m, std::size_t k)
{
    if (!m.confusion.empty()) return m.confusion;
    std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        if (k == 1) {
            out[i][i] = 1.0;
            continue;
        }
        for (std::size_t j = 0; j < k; ++j) {
            out[i][j] = i == j ? 1.0 - m.confusion_rate
                               : m.confusion_rate / static_cast<double>(k - 1);
        }
    }
    return out;
}

NoiseModel parse_noise_model(std::string_view json_text)
{
    NoiseModel m;
    try {
        const json j = json::parse(json_text);
        m.drop_rate = j.value("drop_rate", m.drop_rate);
        m.center_jitter_sd = j.value("center_jitter_sd", m.center_jitter_sd);
        m.size_jitter_sd = j.value("size_jitter_sd", m.size_jitter_sd);
        m.confusion_rate = j.value("confusion_rate", m.confusion_rate);
        if (j.contains("confusion")) {
            m.confusion = j.at("confusion").get<std::vector<std::vector<double>>>();
        }
        m.fp_per_image = j.value("fp_per_image", m.fp_per_image);
        if (j.contains("tp_confidence")) m.tp_confidence = confidence_from(j.at("tp_confidence"));
        if (j.contains("fp_confidence")) m.fp_confidence = confidence_from(j.at("fp_confidence"));
        m.area_drop_scale = j.value("area_drop_scale", m.area_drop_scale);
        m.seed = j.value("seed", m.seed);
    } catch (const json::exception& e) {
        fail(ErrorCode::BadConfig, e.what(), "noise model");
    }
    return m;
}

std::string noise_model_json(const NoiseModel& m)
{
    nlohmann::ordered_json j;
    j["drop_rate"] = m.drop_rate;
    j["center_jitter_sd"] = m.center_jitter_sd;
    j["size_jitter_sd"] = m.size_jitter_sd;
    if (m.confusion.empty()) {
        j["confusion_rate"] = m.confusion_rate;
    } else {
        j["confusion"] = m.confusion;
    }
    j["fp_per_image"] = m.fp_per_image;
    j["tp_confidence"] = confidence_json(m.tp_confidence);
    j["fp_confidence"] = confidence_json(m.fp_confidence);
    j["area_drop_scale"] = m.area_drop_scale;
    j["seed"] = m.seed;
    return j.dump(2) + "\n";
}

DetectionMap simulate_detections(const Dataset& dataset, const NoiseModel& model)
{
    const std::size_t k = dataset.categories.size();
    validate(model, k);
    const auto confusion = confusion_matrix(model, k);
    const double log_fp_min = std::log(0.01);
    const double log_fp_max = std::log(0.2);

    DetectionMap out;
    for (const auto& img : dataset.images) {
        SplitMix64 rng(derive_seed(model.seed, img.id));
        std::vector<Detection> dets;
        for (const auto& truth : img.annotations) {
            double p_drop = model.drop_rate;
            if (model.area_drop_scale > 0.0) {
                const double small = 1.0 - std::min(1.0, std::sqrt(truth.box.area()) / 0.1);
                p_drop = std::min(1.0, p_drop * (1.0 + model.area_drop_scale * small));
            }
            if (rng.uniform01() < p_drop) {
                continue;
            }
            const double cx = truth.box.cx + model.center_jitter_sd * rng.normal();
            const double cy = truth.box.cy + model.center_jitter_sd * rng.normal();
            const double w = truth.box.w * std::exp(model.size_jitter_sd * rng.normal());
            const double h = truth.box.h * std::exp(model.size_jitter_sd * rng.normal());
            Detection d;
            d.box = {std::clamp(cx, 0.0, 1.0), std::clamp(cy, 0.0, 1.0),
                     std::clamp(w, kMinSimulatedSide, 1.0), std::clamp(h, kMinSimulatedSide, 1.0)};
            d.category_id = draw_row(rng, confusion[static_cast<std::size_t>(truth.category_id)]);
            d.confidence = std::clamp(model.tp_confidence.sample(rng), 0.0, 1.0);
            dets.push_back(d);
        }
        const auto spurious = k == 0 ? 0 : rng.poisson(model.fp_per_image);
        for (std::uint64_t s = 0; s < spurious; ++s) {
            const double side = std::exp(rng.uniform(log_fp_min, log_fp_max));
            const double aspect = std::exp(0.2 * rng.normal());
            Detection d;
            d.box.w = std::clamp(side * std::sqrt(aspect), kMinSimulatedSide, 1.0);
            d.box.h = std::clamp(side / std::sqrt(aspect), kMinSimulatedSide, 1.0);
            d.box.cx = rng.uniform01();
            d.box.cy = rng.uniform01();
            d.category_id = static_cast<int>(rng.uniform_below(k));
            d.confidence = std::clamp(model.fp_confidence.sample(rng), 0.0, 1.0);
            dets.push_back(d);
        }
        out.emplace(img.id, std::move(dets));
    }
    return out;
}

}  // namespace softlabel
