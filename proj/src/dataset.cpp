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

#include "softlabel/dataset.hpp"

#include <set>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "softlabel/error.hpp"
#include "softlabel/file_util.hpp"
#include "softlabel/labels.hpp"

namespace softlabel {

namespace fs = std::filesystem;
using nlohmann::json;

const ImageRecord* Dataset::find(const std::string& id) const
{
    for (const auto& img : images) {
        if (img.id == id) {
            return &img;
        }
    }
    return nullptr;
}

std::size_t Dataset::instance_count() const
{
    std::size_t n = 0;
    for (const auto& img : images) {
        n += img.annotations.size();
    }
    return n;
}

TruthMap Dataset::truth_map() const
{
    TruthMap out;
    for (const auto& img : images) {
        out.emplace(img.id, img.annotations);
    }
    return out;
}

Dataset Dataset::skeleton() const
{
    Dataset out{categories, images};
    for (auto& img : out.images) {
        img.annotations.clear();
    }
    return out;
}

namespace {

void check_id(const std::string& id)
{
    if (id.empty()) {
        fail(ErrorCode::MalformedRecord, "empty image id");
    }
    const fs::path p(id);
    if (p.is_absolute() || id.front() == '/') {
        fail(ErrorCode::MalformedRecord, "image id must be a relative path stem", id);
    }
    for (const auto& part : p) {
        if (part == "..") {
            fail(ErrorCode::MalformedRecord, "image id may not contain '..'", id);
        }
    }
}

}  // namespace

void validate(const Dataset& dataset)
{
    std::unordered_set<std::string> seen;
    const auto n_categories = static_cast<int>(dataset.categories.size());
    for (const auto& img : dataset.images) {
        check_id(img.id);
        if (!seen.insert(img.id).second) {
            fail(ErrorCode::DuplicateImageId, "image id appears more than once", img.id);
        }
        if (img.width < 1 || img.height < 1) {
            fail(ErrorCode::MalformedRecord, "image dimensions must be positive", img.id);
        }
        for (std::size_t k = 0; k < img.annotations.size(); ++k) {
            const auto& a = img.annotations[k];
            if (a.category_id < 0 || a.category_id >= n_categories) {
                fail(ErrorCode::UnknownCategory,
                     fmt::format("category {} with {} declared categories", a.category_id,
                                 n_categories),
                     fmt::format("{}#{}", img.id, k));
            }
            if (!is_valid(a.box)) {
                fail(ErrorCode::MalformedRecord, "invalid box", fmt::format("{}#{}", img.id, k));
            }
        }
    }
}

Dataset load_dataset(const fs::path& manifest_path)
{
    const std::string text = read_text_file(manifest_path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedRecord, e.what(), manifest_path.string());
    }
    const fs::path base = manifest_path.parent_path();

    Dataset out;
    try {
        out.categories = doc.at("categories").get<std::vector<std::string>>();
        const auto& images = doc.at("images");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < images.size(); ++i) {
            const auto& rec = images[i];
            const std::string locator = fmt::format("{}: images[{}]", manifest_path.string(), i);
            ImageRecord img;
            img.id = rec.at("id").get<std::string>();
            img.width = rec.at("width").get<int>();
            img.height = rec.at("height").get<int>();
            if (!seen.insert(img.id).second) {
                fail(ErrorCode::DuplicateImageId, fmt::format("image id '{}' repeated", img.id),
                     locator);
            }
            const bool background = rec.value("background", false);
            const bool has_labels = rec.contains("labels") && !rec.at("labels").is_null();
            if (has_labels) {
                const fs::path label_path = base / rec.at("labels").get<std::string>();
                if (fs::exists(label_path)) {
                    img.annotations =
                        parse_yolo_labels(read_text_file(label_path), label_path.string());
                } else if (!background) {
                    fail(ErrorCode::MissingLabelFile,
                         fmt::format("label file '{}' not found", label_path.string()), locator);
                }
            } else if (!background) {
                fail(ErrorCode::MissingLabelFile, "record has no label file and is not background",
                     locator);
            }
            if (background && !img.annotations.empty()) {
                fail(ErrorCode::MalformedRecord, "record flagged background has annotations",
                     locator);
            }
            out.images.push_back(std::move(img));
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::MalformedRecord, e.what(), manifest_path.string());
    }
    validate(out);
    return out;
}

std::string manifest_json(const Dataset& dataset)
{
    json images = json::array();
    for (const auto& img : dataset.images) {
        json rec = {{"id", img.id},
                    {"width", img.width},
                    {"height", img.height},
                    {"labels", "labels/" + img.id + ".txt"}};
        if (img.background()) {
            rec["background"] = true;
        }
        images.push_back(std::move(rec));
    }
    json doc = {{"categories", dataset.categories}, {"images", std::move(images)}};
    return doc.dump(2) + "\n";
}

void save_dataset(const Dataset& dataset, const fs::path& dir,
                  const std::map<std::string, std::vector<double>>* confidences)
{
    validate(dataset);
    for (const auto& img : dataset.images) {
        const fs::path label_path = dir / "labels" / (img.id + ".txt");
        if (confidences == nullptr) {
            write_text_atomic(label_path, emit_yolo_labels(img.annotations));
            continue;
        }
        const auto found = confidences->find(img.id);
        const std::size_t n = found == confidences->end() ? 0 : found->second.size();
        if (n != img.annotations.size()) {
            fail(ErrorCode::DatasetMismatch,
                 fmt::format("{} confidences for {} annotations", n, img.annotations.size()),
                 img.id);
        }
        std::vector<Detection> dets;
        dets.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            dets.push_back({img.annotations[k].category_id, img.annotations[k].box,
                            found->second[k]});
        }
        const auto text = emit_soft_labels(dets);
        write_text_atomic(label_path, text.labels);
        write_text_atomic(dir / "labels" / (img.id + ".conf"), text.confidences);
    }
    write_text_atomic(dir / "manifest.json", manifest_json(dataset));
}

DetectionMap load_detections(const fs::path& dir, const Dataset& dataset)
{
    if (!fs::is_directory(dir)) {
        fail(ErrorCode::Io, "detection directory not found", dir.string());
    }
    std::unordered_set<std::string> known;
    for (const auto& img : dataset.images) {
        known.insert(img.id);
    }
    DetectionMap out;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        fs::path rel = fs::relative(path, dir);
        rel.replace_extension();
        const std::string id = rel.generic_string();
        if (known.find(id) == known.end()) {
            fail(ErrorCode::DatasetMismatch, "detection file for an image not in the dataset",
                 path.string());
        }
        out.emplace(id, parse_detections(read_text_file(path), path.string()));
    }
    return out;
}

void save_detections(const DetectionMap& detections, const fs::path& dir)
{
    for (const auto& [id, dets] : detections) {
        write_text_atomic(dir / (id + ".txt"), emit_detections(dets));
    }
}

}  // namespace softlabel
