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

// Reference implementations used only by tests. They follow the definitions
// literally (rasterization, explicit tables, quadratic scans). The greedy
// oracle takes IoU values from softlabel::iou, itself checked against the
// raster oracle, so threshold comparisons see identical floating-point values.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "softlabel/box.hpp"

namespace oracle {

/// IoU by counting pixel centers of an n x n grid over the unit square.
inline double raster_iou(const softlabel::Box& a, const softlabel::Box& b, int n = 1000)
{
    long inter = 0, in_a = 0, in_b = 0;
    auto inside = [](const softlabel::Box& box, double x, double y) {
        return x >= box.cx - box.w / 2 && x < box.cx + box.w / 2 && y >= box.cy - box.h / 2 &&
               y < box.cy + box.h / 2;
    };
    for (int i = 0; i < n; ++i) {
        const double y = (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            const double x = (j + 0.5) / n;
            const bool ia = inside(a, x, y);
            const bool ib = inside(b, x, y);
            in_a += ia;
            in_b += ib;
            inter += ia && ib;
        }
    }
    const long uni = in_a + in_b - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Closed-form IoU written independently of the library.
inline double plain_iou(const softlabel::Box& a, const softlabel::Box& b)
{
    const double ax0 = a.cx - a.w / 2, ax1 = a.cx + a.w / 2, ay0 = a.cy - a.h / 2,
                 ay1 = a.cy + a.h / 2;
    const double bx0 = b.cx - b.w / 2, bx1 = b.cx + b.w / 2, by0 = b.cy - b.h / 2,
                 by1 = b.cy + b.h / 2;
    const double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
    const double ih = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
    const double inter = iw * ih;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0 ? inter / uni : 0.0;
}

struct Det {
    double conf;
    softlabel::Box box;
};

/// TP flags in input order for one image and one category: repeatedly take
/// the highest-confidence unprocessed detection (earliest on ties) and give
/// it the best free truth with IoU >= thr (lowest index on ties).
inline std::vector<bool> greedy_flags(const std::vector<Det>& dets,
                                      const std::vector<softlabel::Box>& truths, double thr)
{
    std::vector<bool> done(dets.size(), false), taken(truths.size(), false), tp(dets.size(), false);
    for (std::size_t step = 0; step < dets.size(); ++step) {
        std::size_t pick = dets.size();
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (!done[d] && (pick == dets.size() || dets[d].conf > dets[pick].conf)) pick = d;
        }
        done[pick] = true;
        std::size_t best = truths.size();
        double best_iou = -1;
        for (std::size_t t = 0; t < truths.size(); ++t) {
            const double v = softlabel::iou(dets[pick].box, truths[t]);
            if (!taken[t] && v >= thr && v > best_iou) {
                best = t;
                best_iou = v;
            }
        }
        if (best < truths.size()) {
            taken[best] = true;
            tp[pick] = true;
        }
    }
    return tp;
}

/// 101-point interpolated AP from a ranked TP/FP sequence via an explicit
/// table: for each grid recall r, the max precision over ranks reaching r.
inline double table_ap(const std::vector<bool>& ranked_tp, std::size_t n_truth)
{
    std::vector<double> recall, precision;
    std::size_t tp = 0;
    for (std::size_t k = 0; k < ranked_tp.size(); ++k) {
        tp += ranked_tp[k];
        recall.push_back(static_cast<double>(tp) / n_truth);
        precision.push_back(static_cast<double>(tp) / (k + 1));
    }
    double table[101];
    for (int i = 0; i <= 100; ++i) {
        const double r = i / 100.0;
        double best = 0.0;
        for (std::size_t k = 0; k < recall.size(); ++k) {
            if (recall[k] >= r) best = std::max(best, precision[k]);
        }
        table[i] = best;
    }
    double sum = 0;
    for (double v : table) sum += v;
    return sum / 101.0;
}

struct Image {
    std::string id;
    std::vector<std::pair<int, softlabel::Box>> truths;
    std::vector<std::pair<int, Det>> dets;
};

struct Ranked {
    double conf;
    bool tp;
};

struct Ranking {
    std::vector<Ranked> entries;
    std::size_t truths = 0;
};

/// One category over several images: per-image greedy flags, then a global
/// order by (confidence desc, image id asc, index asc).
inline Ranking category_ranking(std::vector<Image> images, int category, double thr)
{
    std::sort(images.begin(), images.end(),
              [](const Image& a, const Image& b) { return a.id < b.id; });
    struct Entry {
        double conf;
        std::size_t image, index;
        bool tp;
    };
    std::vector<Entry> all;
    Ranking out;
    for (std::size_t i = 0; i < images.size(); ++i) {
        std::vector<Det> d;
        std::vector<softlabel::Box> t;
        for (const auto& [c, det] : images[i].dets) if (c == category) d.push_back(det);
        for (const auto& [c, box] : images[i].truths) if (c == category) t.push_back(box);
        out.truths += t.size();
        const auto flags = greedy_flags(d, t, thr);
        for (std::size_t k = 0; k < d.size(); ++k) all.push_back({d[k].conf, i, k, flags[k]});
    }
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
        if (a.conf != b.conf) return a.conf > b.conf;
        if (a.image != b.image) return a.image < b.image;
        return a.index < b.index;
    });
    for (const auto& e : all) out.entries.push_back({e.conf, e.tp});
    return out;
}

inline double category_ap(const std::vector<Image>& images, int category, double thr)
{
    const auto r = category_ranking(images, category, thr);
    std::vector<bool> ranked;
    for (const auto& e : r.entries) ranked.push_back(e.tp);
    return table_ap(ranked, r.truths);
}

inline double harmonic(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

/// Best mean F1 over the grid i/1000 (lowest tau on ties), scanning every
/// ranked entry per grid point.
inline std::pair<double, double> best_mean_f1(const std::vector<Image>& images,
                                              const std::vector<int>& categories)
{
    std::vector<Ranking> ranks;
    for (int c : categories) {
        auto r = category_ranking(images, c, 0.5);
        if (r.truths > 0) ranks.push_back(std::move(r));
    }
    double best = -1, best_tau = 0;
    for (int i = 0; i <= 1000; ++i) {
        const double tau = i / 1000.0;
        double sum = 0;
        for (const auto& r : ranks) {
            std::size_t kept = 0, tp = 0;
            for (const auto& e : r.entries) {
                if (e.conf >= tau) {
                    ++kept;
                    tp += e.tp;
                }
            }
            const double p = kept ? static_cast<double>(tp) / kept : 0.0;
            sum += harmonic(p, static_cast<double>(tp) / r.truths);
        }
        const double mean = sum / ranks.size();
        if (mean > best) {
            best = mean;
            best_tau = tau;
        }
    }
    return {best, best_tau};
}

}  // namespace oracle
