// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include "hoipoint/evaluator.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "hoipoint/errors.hpp"

namespace hoipoint::eval {

namespace {

bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

// Deterministic tie key for equal scores.
auto pred_key(const TripletRecord& r) {
    const geom::BBox& h = r.triplet.human.bbox;
    geom::BBox o{};
    if (r.triplet.object) o = r.triplet.object->bbox;
    return std::make_tuple(r.image_id, r.triplet.action_id, h.x_min, h.y_min, h.x_max, h.y_max,
                           o.x_min, o.y_min, o.x_max, o.y_max);
}

// Matching quality of one prediction against one GT; <= iou_min means no match.
double match_quality(const TripletRecord& pred, const TripletRecord& gt, bool no_object) {
    if (pred.image_id != gt.image_id) return 0.0;
    if (pred.triplet.action_id != gt.triplet.action_id) return 0.0;
    const double iou_h = geom::iou(pred.triplet.human.bbox, gt.triplet.human.bbox);
    if (no_object) return iou_h;
    if (!pred.triplet.object || !gt.triplet.object) return 0.0;
    const double iou_o = geom::iou(pred.triplet.object->bbox, gt.triplet.object->bbox);
    return std::min(iou_h, iou_o);
}

}  // namespace

bool GroundTruthSet::is_no_object(int action_id) const {
    return contains(no_object_classes, action_id);
}

MatchResult match_triplets(const std::vector<TripletRecord>& preds,
                           const std::vector<TripletRecord>& gts,
                           const std::vector<int>& no_object_classes, double iou_min) {
    MatchResult result;
    result.order.resize(preds.size());
    std::iota(result.order.begin(), result.order.end(), 0u);
    std::sort(result.order.begin(), result.order.end(), [&](std::size_t a, std::size_t b) {
        if (preds[a].triplet.score != preds[b].triplet.score)
            return preds[a].triplet.score > preds[b].triplet.score;
        return pred_key(preds[a]) < pred_key(preds[b]);
    });

    std::vector<bool> consumed(gts.size(), false);
    result.is_tp.resize(preds.size(), false);
    for (std::size_t rank = 0; rank < result.order.size(); ++rank) {
        const TripletRecord& p = preds[result.order[rank]];
        const bool no_obj = contains(no_object_classes, p.triplet.action_id);
        double best = iou_min;
        std::size_t best_gt = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (consumed[g]) continue;
            const double q = match_quality(p, gts[g], no_obj);
            if (q > best) {
                best = q;
                best_gt = g;
            }
        }
        if (best_gt < gts.size()) {
            consumed[best_gt] = true;
            result.is_tp[rank] = true;
        }
    }
    return result;
}

double average_precision(const std::vector<bool>& tp_labels, std::int64_t n_gt) {
    if (n_gt <= 0) return 0.0;
    std::vector<double> precision, recall;
    std::int64_t tp = 0;
    for (std::size_t i = 0; i < tp_labels.size(); ++i) {
        if (tp_labels[i]) ++tp;
        precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
        recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
    }
    // Precision envelope: running max from the right.
    for (std::size_t i = precision.size(); i-- > 1;)
        precision[i - 1] = std::max(precision[i - 1], precision[i]);
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < precision.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

EvalReport evaluate(const std::vector<TripletRecord>& preds, const GroundTruthSet& gts,
                    Setting setting, double iou_min) {
    EvalReport report;
    report.setting = setting;

    std::set<int> classes;
    for (const TripletRecord& g : gts.triplets) classes.insert(g.triplet.action_id);

    for (int c : classes) {
        const bool known = setting == Setting::known_object;
        const std::set<std::int64_t>* allowed = nullptr;
        if (known) {
            auto it = gts.known_object_images.find(c);
            if (it == gts.known_object_images.end())
                throw ValidationError("evaluate: known-object image list missing for class " +
                                      std::to_string(c));
            allowed = &it->second;
        }
        auto in_scope = [&](const TripletRecord& r) {
            return r.triplet.action_id == c && (!allowed || allowed->count(r.image_id) > 0);
        };
        std::vector<TripletRecord> class_preds, class_gts;
        for (const TripletRecord& p : preds)
            if (in_scope(p)) class_preds.push_back(p);
        for (const TripletRecord& g : gts.triplets)
            if (in_scope(g)) class_gts.push_back(g);
        if (class_gts.empty()) continue;

        const MatchResult m =
            match_triplets(class_preds, class_gts, gts.no_object_classes, iou_min);
        report.per_class_ap[c] =
            average_precision(m.is_tp, static_cast<std::int64_t>(class_gts.size()));
    }

    double sum_full = 0.0, sum_rare = 0.0, sum_nonrare = 0.0;
    for (const auto& [c, ap] : report.per_class_ap) {
        sum_full += ap;
        const bool rare = static_cast<std::size_t>(c) < gts.class_counts.size() &&
                          gts.class_counts[c] < gts.rare_cutoff;
        if (rare) {
            report.rare_classes.insert(c);
            sum_rare += ap;
        } else {
            report.nonrare_classes.insert(c);
            sum_nonrare += ap;
        }
    }
    const auto mean = [](double s, std::size_t n) { return n ? s / static_cast<double>(n) : 0.0; };
    report.map_full = mean(sum_full, report.per_class_ap.size());
    report.map_rare = mean(sum_rare, report.rare_classes.size());
    report.map_nonrare = mean(sum_nonrare, report.nonrare_classes.size());
    return report;
}

}  // namespace hoipoint::eval
