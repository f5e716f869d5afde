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

#include "softlabel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <fmt/format.h>

#include "softlabel/error.hpp"

namespace softlabel {

std::vector<double> coco_iou_thresholds()
{
    std::vector<double> out;
    for (int k = 0; k < 10; ++k) {
        out.push_back((50 + 5 * k) / 100.0);
    }
    return out;
}

namespace {

// Greedy assignment over a precomputed row-major IoU matrix (candidates x truths).
MatchSet greedy_match(std::span<const std::size_t> order, std::span<const double> ious,
                      std::size_t truth_count, double iou_threshold)
{
    MatchSet out;
    out.iou_threshold = iou_threshold;
    std::vector<bool> taken(truth_count, false);
    for (std::size_t d : order) {
        std::size_t best = truth_count;
        double best_iou = iou_threshold;
        for (std::size_t t = 0; t < truth_count; ++t) {
            if (taken[t]) {
                continue;
            }
            const double v = ious[d * truth_count + t];
            // Strict improvement keeps the lower index on ties.
            if (v >= iou_threshold && (best == truth_count || v > best_iou)) {
                best = t;
                best_iou = v;
            }
        }
        if (best == truth_count) {
            out.unmatched_detections.push_back(d);
        } else {
            taken[best] = true;
            out.pairs.push_back({d, best, best_iou});
        }
    }
    std::sort(out.unmatched_detections.begin(), out.unmatched_detections.end());
    for (std::size_t t = 0; t < truth_count; ++t) {
        if (!taken[t]) {
            out.unmatched_truths.push_back(t);
        }
    }
    return out;
}

std::vector<std::size_t> confidence_order(std::span<const Detection> detections)
{
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].confidence > detections[b].confidence;
    });
    return order;
}

std::vector<double> iou_matrix(std::span<const Detection> detections,
                               std::span<const Annotation> truths)
{
    std::vector<double> out(detections.size() * truths.size());
    for (std::size_t d = 0; d < detections.size(); ++d) {
        for (std::size_t t = 0; t < truths.size(); ++t) {
            out[d * truths.size() + t] = iou(detections[d].box, truths[t].box);
        }
    }
    return out;
}

}  // namespace

MatchSet match_detections(std::span<const Detection> detections,
                          std::span<const Annotation> truths, double iou_threshold)
{
    const auto order = confidence_order(detections);
    const auto ious = iou_matrix(detections, truths);
    return greedy_match(order, ious, truths.size(), iou_threshold);
}

MatchSet match_boxes(std::span<const Box> candidates, std::span<const Box> truths,
                     double iou_threshold)
{
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> ious(candidates.size() * truths.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (std::size_t t = 0; t < truths.size(); ++t) {
            ious[c * truths.size() + t] = iou(candidates[c], truths[t]);
        }
    }
    return greedy_match(order, ious, truths.size(), iou_threshold);
}

double interpolated_ap(std::span<const PRPoint> points)
{
    if (points.empty()) {
        return 0.0;
    }
    // Precision envelope: best precision at this rank or any later one.
    std::vector<double> envelope(points.size());
    double running = 0.0;
    for (std::size_t k = points.size(); k-- > 0;) {
        running = std::max(running, points[k].precision);
        envelope[k] = running;
    }
    double sum = 0.0;
    for (int i = 0; i < kRecallGridPoints; ++i) {
        const double r = i / 100.0;
        const auto it = std::lower_bound(points.begin(), points.end(), r,
                                         [](const PRPoint& p, double v) { return p.recall < v; });
        if (it != points.end()) {
            sum += envelope[static_cast<std::size_t>(it - points.begin())];
        }
    }
    return sum / kRecallGridPoints;
}

PRCurve curve_from_ranks(const std::vector<bool>& true_positive, std::size_t truth_count,
                         double iou_threshold)
{
    PRCurve curve;
    curve.iou_threshold = iou_threshold;
    if (truth_count == 0) {
        fail(ErrorCode::NoGroundTruth, "category has no ground-truth instances");
    }
    curve.points.reserve(true_positive.size());
    std::size_t tp = 0;
    for (std::size_t k = 0; k < true_positive.size(); ++k) {
        tp += true_positive[k] ? 1 : 0;
        curve.points.push_back({static_cast<double>(tp) / static_cast<double>(truth_count),
                                static_cast<double>(tp) / static_cast<double>(k + 1)});
    }
    curve.ap = interpolated_ap(curve.points);
    return curve;
}

PRCurve pr_curve(std::span<const Detection> detections, std::span<const Annotation> truths,
                 double iou_threshold)
{
    if (truths.empty()) {
        fail(ErrorCode::NoGroundTruth, "pr_curve needs at least one ground-truth box");
    }
    const auto order = confidence_order(detections);
    const auto match = greedy_match(order, iou_matrix(detections, truths), truths.size(),
                                    iou_threshold);
    std::vector<bool> matched(detections.size(), false);
    for (const auto& p : match.pairs) {
        matched[p.detection] = true;
    }
    std::vector<bool> ranked(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        ranked[k] = matched[order[k]];
    }
    return curve_from_ranks(ranked, truths.size(), iou_threshold);
}

namespace {

struct Ranked {
    double confidence;
    std::uint32_t tp_mask;  // bit k set: true positive at threshold k
};

struct CategoryRanking {
    std::size_t truths = 0;
    std::vector<Ranked> ranked;  // descending confidence, stable on (image, index)
};

// Matches every image at every threshold and pools the results per category.
std::vector<CategoryRanking> rank_all(const DetectionMap& detections, const TruthMap& truths,
                                      std::size_t category_count,
                                      std::span<const double> thresholds)
{
    for (const auto& [id, dets] : detections) {
        if (!dets.empty() && truths.find(id) == truths.end()) {
            fail(ErrorCode::DatasetMismatch,
                 fmt::format("detections given for image '{}' which has no ground-truth record",
                             id));
        }
    }

    std::vector<CategoryRanking> out(category_count);
    std::vector<std::vector<Detection>> dets_by_cat(category_count);
    std::vector<std::vector<Annotation>> truths_by_cat(category_count);

    static const std::vector<Detection> kNoDetections;
    for (const auto& [id, image_truths] : truths) {
        const auto found = detections.find(id);
        const auto& image_dets = found == detections.end() ? kNoDetections : found->second;

        for (auto& v : dets_by_cat) v.clear();
        for (auto& v : truths_by_cat) v.clear();
        for (const auto& a : image_truths) {
            if (a.category_id < 0 || static_cast<std::size_t>(a.category_id) >= category_count) {
                fail(ErrorCode::UnknownCategory,
                     fmt::format("ground-truth category {} not in table", a.category_id), id);
            }
            truths_by_cat[static_cast<std::size_t>(a.category_id)].push_back(a);
        }
        for (const auto& d : image_dets) {
            if (d.category_id < 0 || static_cast<std::size_t>(d.category_id) >= category_count) {
                fail(ErrorCode::UnknownCategory,
                     fmt::format("detection category {} not in table", d.category_id), id);
            }
            dets_by_cat[static_cast<std::size_t>(d.category_id)].push_back(d);
        }

        for (std::size_t c = 0; c < category_count; ++c) {
            const auto& cd = dets_by_cat[c];
            const auto& ct = truths_by_cat[c];
            out[c].truths += ct.size();
            if (cd.empty()) {
                continue;
            }
            const auto order = confidence_order(cd);
            const auto ious = iou_matrix(cd, ct);
            std::vector<std::uint32_t> masks(cd.size(), 0);
            for (std::size_t k = 0; k < thresholds.size(); ++k) {
                const auto m = greedy_match(order, ious, ct.size(), thresholds[k]);
                for (const auto& p : m.pairs) {
                    masks[p.detection] |= (1u << k);
                }
            }
            for (std::size_t i = 0; i < cd.size(); ++i) {
                out[c].ranked.push_back({cd[i].confidence, masks[i]});
            }
        }
    }
    for (auto& cat : out) {
        std::stable_sort(cat.ranked.begin(), cat.ranked.end(),
                         [](const Ranked& a, const Ranked& b) { return a.confidence > b.confidence; });
    }
    return out;
}

double ap_at(const CategoryRanking& cat, std::size_t bit, double threshold)
{
    std::vector<bool> flags(cat.ranked.size());
    for (std::size_t k = 0; k < cat.ranked.size(); ++k) {
        flags[k] = (cat.ranked[k].tp_mask >> bit) & 1u;
    }
    return curve_from_ranks(flags, cat.truths, threshold).ap;
}

F1Sweep sweep(const std::vector<CategoryRanking>& ranking, std::size_t bit)
{
    std::vector<std::size_t> active;
    for (std::size_t c = 0; c < ranking.size(); ++c) {
        if (ranking[c].truths > 0) {
            active.push_back(c);
        }
    }
    if (active.empty()) {
        fail(ErrorCode::NoGroundTruth, "no category has ground-truth instances");
    }

    // Per category: cumulative true positives by rank and a moving cut.
    struct State {
        std::vector<std::size_t> cum_tp;  // cum_tp[k] = TPs among the first k ranks
        std::size_t cut;
    };
    std::vector<State> states;
    for (std::size_t c : active) {
        const auto& r = ranking[c].ranked;
        State s{std::vector<std::size_t>(r.size() + 1, 0), r.size()};
        for (std::size_t k = 0; k < r.size(); ++k) {
            s.cum_tp[k + 1] = s.cum_tp[k] + ((r[k].tp_mask >> bit) & 1u);
        }
        states.push_back(std::move(s));
    }

    auto pr_at = [&](std::size_t a, std::size_t cut) {
        const auto& cat = ranking[active[a]];
        const double tp = static_cast<double>(states[a].cum_tp[cut]);
        const double p = cut == 0 ? 0.0 : tp / static_cast<double>(cut);
        const double r = tp / static_cast<double>(cat.truths);
        const double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        return CategoryPR{static_cast<int>(active[a]), p, r, f};
    };

    F1Sweep out;
    out.mean_f1.resize(kConfidenceGridPoints);
    out.precision.assign(active.size(), std::vector<double>(kConfidenceGridPoints));
    out.recall.assign(active.size(), std::vector<double>(kConfidenceGridPoints));
    std::vector<std::size_t> best_cuts(active.size());
    bool have_best = false;
    for (int i = 0; i < kConfidenceGridPoints; ++i) {
        const double tau = i / 1000.0;
        double total = 0.0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const auto& r = ranking[active[a]].ranked;
            auto& cut = states[a].cut;
            while (cut > 0 && r[cut - 1].confidence < tau) {
                --cut;
            }
            const auto pr = pr_at(a, cut);
            out.precision[a][static_cast<std::size_t>(i)] = pr.precision;
            out.recall[a][static_cast<std::size_t>(i)] = pr.recall;
            total += pr.f1;
        }
        const double mean = total / static_cast<double>(active.size());
        out.mean_f1[static_cast<std::size_t>(i)] = mean;
        if (!have_best || mean > out.best_f1) {
            have_best = true;
            out.best_f1 = mean;
            out.best_confidence = tau;
            for (std::size_t a = 0; a < active.size(); ++a) {
                best_cuts[a] = states[a].cut;
            }
        }
    }
    for (std::size_t a = 0; a < active.size(); ++a) {
        out.at_best.push_back(pr_at(a, best_cuts[a]));
    }
    return out;
}

std::size_t threshold_bit(std::vector<double>& thresholds, double iou_threshold)
{
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
        fail(ErrorCode::BadConfig, fmt::format("IoU threshold {} outside (0,1]", iou_threshold));
    }
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        if (std::abs(thresholds[k] - iou_threshold) < 1e-12) {
            return k;
        }
    }
    thresholds.push_back(iou_threshold);
    return thresholds.size() - 1;
}

}  // namespace

F1Sweep f1_sweep(const DetectionMap& detections, const TruthMap& truths,
                 const std::vector<std::string>& categories, double iou_threshold)
{
    std::vector<double> thresholds;
    const auto bit = threshold_bit(thresholds, iou_threshold);
    return sweep(rank_all(detections, truths, categories.size(), thresholds), bit);
}

EvalSummary map_summary(const DetectionMap& detections, const TruthMap& truths,
                        const std::vector<std::string>& categories, double iou_threshold)
{
    auto thresholds = coco_iou_thresholds();
    const std::size_t coco_count = thresholds.size();
    const auto primary = threshold_bit(thresholds, iou_threshold);
    const auto ranking = rank_all(detections, truths, categories.size(), thresholds);

    EvalSummary out;
    out.iou_threshold = iou_threshold;
    auto f1 = sweep(ranking, primary);
    out.best_f1 = f1.best_f1;
    out.best_f1_confidence = f1.best_confidence;
    out.f1_curve = std::move(f1.mean_f1);

    double sum50 = 0.0;
    double sum5095 = 0.0;
    std::size_t pr_index = 0;
    for (std::size_t c = 0; c < ranking.size(); ++c) {
        const auto& cat = ranking[c];
        if (cat.truths == 0) {
            continue;
        }
        CategoryMetrics m;
        m.category_id = static_cast<int>(c);
        m.name = categories[c];
        m.truths = cat.truths;
        m.detections = cat.ranked.size();
        m.ap50 = ap_at(cat, primary, thresholds[primary]);
        double acc = 0.0;
        for (std::size_t k = 0; k < coco_count; ++k) {
            acc += ap_at(cat, k, thresholds[k]);
        }
        m.ap5095 = acc / static_cast<double>(coco_count);
        const auto& pr = f1.at_best[pr_index++];
        m.precision = pr.precision;
        m.recall = pr.recall;
        m.f1 = pr.f1;
        sum50 += m.ap50;
        sum5095 += m.ap5095;
        out.categories.push_back(std::move(m));
    }
    const auto n = static_cast<double>(out.categories.size());
    out.map50 = sum50 / n;
    out.map5095 = sum5095 / n;
    return out;
}

}  // namespace softlabel
