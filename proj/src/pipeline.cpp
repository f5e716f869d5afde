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

#include "softlabel/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "softlabel/error.hpp"
#include "softlabel/labels.hpp"

namespace softlabel {

void validate(const SoftLabelConfig& cfg)
{
    if (!(cfg.confidence_threshold >= 0.0 && cfg.confidence_threshold <= 1.0)) {
        fail(ErrorCode::BadConfig,
             fmt::format("confidence threshold {} outside [0,1]", cfg.confidence_threshold));
    }
    if (cfg.nms_iou && !(*cfg.nms_iou > 0.0 && *cfg.nms_iou <= 1.0)) {
        fail(ErrorCode::BadConfig, fmt::format("NMS IoU {} outside (0,1]", *cfg.nms_iou));
    }
}

std::vector<Detection> filter_confidence(std::span<const Detection> detections, double threshold)
{
    std::vector<Detection> out;
    std::copy_if(detections.begin(), detections.end(), std::back_inserter(out),
                 [threshold](const Detection& d) { return d.confidence >= threshold; });
    return out;
}

std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold)
{
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].confidence > detections[b].confidence;
    });
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
        const auto& d = detections[i];
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return detections[k].category_id == d.category_id &&
                   iou(detections[k].box, d.box) >= iou_threshold;
        });
        if (!suppressed) {
            kept.push_back(i);
        }
    }
    std::sort(kept.begin(), kept.end());
    std::vector<Detection> out;
    out.reserve(kept.size());
    for (std::size_t i : kept) {
        out.push_back(detections[i]);
    }
    return out;
}

namespace {

// Reorders detections to label-file order so annotations and sidecar align.
void to_label_order(std::vector<Detection>& dets)
{
    std::vector<Annotation> anns;
    anns.reserve(dets.size());
    for (const auto& d : dets) anns.push_back(d.annotation());
    std::vector<Detection> out;
    out.reserve(dets.size());
    for (std::size_t i : label_order(anns)) out.push_back(dets[i]);
    dets = std::move(out);
}

}  // namespace

SoftDataset generate_soft_dataset(const Dataset& source, const DetectionMap& detections,
                                  const SoftLabelConfig& cfg)
{
    validate(cfg);
    SoftDataset out;
    out.dataset = source.skeleton();
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < out.dataset.images.size(); ++i) {
        slot.emplace(out.dataset.images[i].id, i);
    }
    for (const auto& [id, dets] : detections) {
        if (slot.find(id) == slot.end()) {
            fail(ErrorCode::MalformedRecord, "detections for an image not in the dataset", id);
        }
    }
    const auto n_categories = static_cast<int>(source.categories.size());
    for (auto& img : out.dataset.images) {
        auto& conf = out.confidences[img.id];
        const auto found = detections.find(img.id);
        if (found == detections.end()) {
            continue;
        }
        for (const auto& d : found->second) {
            if (d.category_id < 0 || d.category_id >= n_categories) {
                fail(ErrorCode::UnknownCategory,
                     fmt::format("detection category {} not in table", d.category_id), img.id);
            }
        }
        auto kept = filter_confidence(found->second, cfg.confidence_threshold);
        if (cfg.nms_iou) {
            kept = nms(kept, *cfg.nms_iou);
        }
        to_label_order(kept);
        for (const auto& d : kept) {
            img.annotations.push_back(d.annotation());
            conf.push_back(d.confidence);
        }
    }
    return out;
}

void save_soft_dataset(const SoftDataset& soft, const std::filesystem::path& dir,
                       const SoftLabelConfig& cfg)
{
    save_dataset(soft.dataset, dir, cfg.keep_confidence_sidecar ? &soft.confidences : nullptr);
}

DiscrepancyReport compare_datasets(const Dataset& truth, const Dataset& soft)
{
    std::unordered_map<std::string, const ImageRecord*> soft_index;
    for (const auto& img : soft.images) {
        soft_index.emplace(img.id, &img);
    }
    if (soft_index.size() != truth.images.size()) {
        fail(ErrorCode::DatasetMismatch,
             fmt::format("truth has {} images, soft has {}", truth.images.size(),
                         soft.images.size()));
    }

    DiscrepancyReport r;
    double squared = 0.0;
    std::size_t disagreements = 0;
    std::size_t unmatched_soft = 0;
    for (const auto& t_img : truth.images) {
        const auto found = soft_index.find(t_img.id);
        if (found == soft_index.end()) {
            fail(ErrorCode::DatasetMismatch, "image missing from soft dataset", t_img.id);
        }
        const auto& s_img = *found->second;
        std::vector<Box> t_boxes, s_boxes;
        for (const auto& a : t_img.annotations) t_boxes.push_back(a.box);
        for (const auto& a : s_img.annotations) s_boxes.push_back(a.box);
        const auto m = match_boxes(s_boxes, t_boxes, 0.5);
        for (const auto& p : m.pairs) {
            const auto& sb = s_boxes[p.detection];
            const auto& tb = t_boxes[p.truth];
            squared += (sb.cx - tb.cx) * (sb.cx - tb.cx) + (sb.cy - tb.cy) * (sb.cy - tb.cy) +
                       (sb.w - tb.w) * (sb.w - tb.w) + (sb.h - tb.h) * (sb.h - tb.h);
            if (s_img.annotations[p.detection].category_id !=
                t_img.annotations[p.truth].category_id) {
                ++disagreements;
            }
        }
        r.truths += t_boxes.size();
        r.soft_labels += s_boxes.size();
        r.matched += m.pairs.size();
        unmatched_soft += m.unmatched_detections.size();
        ++r.images;
    }
    if (r.matched > 0) {
        r.box_mse = squared / (4.0 * static_cast<double>(r.matched));
        r.class_disagreement =
            static_cast<double>(disagreements) / static_cast<double>(r.matched);
    }
    r.coverage = r.truths == 0 ? 1.0
                               : static_cast<double>(r.matched) / static_cast<double>(r.truths);
    r.false_positive_rate =
        r.images == 0 ? 0.0 : static_cast<double>(unmatched_soft) / static_cast<double>(r.images);
    return r;
}

}  // namespace softlabel
