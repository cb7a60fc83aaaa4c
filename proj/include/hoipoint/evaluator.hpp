// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "hoipoint/types.hpp"

namespace hoipoint::eval {

enum class Setting { default_setting, known_object };

struct GroundTruthSet {
    std::vector<TripletRecord> triplets;  // scores ignored
    std::vector<std::int64_t> class_counts;  // training samples per action id
    std::int64_t rare_cutoff = 0;            // classes with count < cutoff are rare
    // For Known-Object: action id -> images known to contain its object
    // category. Required when evaluating in that setting.
    std::map<int, std::set<std::int64_t>> known_object_images;
    std::vector<int> no_object_classes;

    bool is_no_object(int action_id) const;
};

struct EvalReport {
    std::map<int, double> per_class_ap;  // classes with ground truth only
    double map_full = 0.0;
    double map_rare = 0.0;
    double map_nonrare = 0.0;
    Setting setting = Setting::default_setting;
    std::set<int> rare_classes;
    std::set<int> nonrare_classes;
};

// Greedy matching in score order (ties by image, action, boxes). A
// prediction is TP iff its action matches and min(IoU_h, IoU_o) > iou_min
// against an unconsumed same-image GT; no-object classes use the human
// IoU only. Returns one label per prediction, aligned with the sorted
// order also returned.
struct MatchResult {
    std::vector<std::size_t> order;  // indices into preds, score-sorted
    std::vector<bool> is_tp;         // aligned with `order`
};
MatchResult match_triplets(const std::vector<TripletRecord>& preds,
                           const std::vector<TripletRecord>& gts,
                           const std::vector<int>& no_object_classes, double iou_min = 0.5);

// Area under the precision-recall curve with the precision envelope
// (running max from the right). Labels must be in score order.
double average_precision(const std::vector<bool>& tp_labels, std::int64_t n_gt);

// Role mAP over all action classes present in the ground truth.
// Known-Object restricts each class to its listed images.
EvalReport evaluate(const std::vector<TripletRecord>& preds, const GroundTruthSet& gts,
                    Setting setting, double iou_min = 0.5);

}  // namespace hoipoint::eval
