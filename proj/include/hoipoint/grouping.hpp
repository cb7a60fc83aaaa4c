// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hoipoint/codec.hpp"
#include "hoipoint/types.hpp"

namespace hoipoint::grouping {

// Which geometric constraints gate a (human, object, candidate) pair.
// `full` is the interaction-box IoU conditions plus the corner-distance
// ceiling; the other modes are the ablation baselines.
enum class Mode {
    full,
    angle_only,
    angle_plus_ratio,
    box_only,
    box_plus_corner,
};

struct GroupingConfig {
    double h_tau = 0.4;   // human score floor
    double o_tau = 0.1;   // object score floor
    double a_tau = 0.0;   // action score floor (scalar fallback)
    std::vector<double> a_thresholds;  // per-class floors; overrides a_tau when non-empty
    double d_tau = 2.0;          // corner-distance ceiling, grid units
    double angle_min = 2.617993877991494;  // 5*pi/6
    double ratio_max = 1.5;
    Mode mode = Mode::full;
    std::vector<int> no_object_classes;  // action ids paired without an object

    bool is_no_object(int action_id) const;
    double action_floor(int action_id) const;
};

struct ConditionReport {
    bool pass = false;
    bool iou_h_ok = false;
    bool iou_o_ok = false;
    bool corners_ok = false;
    bool angle_ok = false;
    bool ratio_ok = false;
    std::array<double, 4> corner_dists{};  // d_tl, d_tr, d_bl, d_br
};

// Angle between the rays p->h and p->o must reach angle_min. A point
// coinciding with either center passes (degenerate geometry).
bool angle_filter(const geom::Point2& h_center, const geom::Point2& o_center,
                  const geom::Point2& p, double angle_min);

// max(|PH|,|PO|) / min(|PH|,|PO|) must not exceed ratio_max. Both zero
// counts as ratio 1; zero min with positive max fails.
bool dist_ratio_filter(const geom::Point2& h_center, const geom::Point2& o_center,
                       const geom::Point2& p, double ratio_max);

// Evaluate the geometric conditions of the configured mode for one
// (human, object, candidate) combination.
ConditionReport check_conditions(const ScoredDetection& human, const ScoredDetection& object,
                                 const codec::InteractionCandidate& cand,
                                 const GroupingConfig& cfg);

// Exhaustive pairing over (human, object, candidate): score pre-filters
// (strict >), then the mode's conditions; each pass emits a triplet with
// s_f = h.score * o.score * cand.score. No-object classes pair the
// candidate with every human whose box contains it, s_f = h.score *
// cand.score. Output sorted by (s_f desc, action, human idx, object idx,
// candidate idx).
std::vector<InteractionTriplet> group(const std::vector<ScoredDetection>& humans,
                                      const std::vector<ScoredDetection>& objects,
                                      const std::vector<codec::InteractionCandidate>& candidates,
                                      const GroupingConfig& cfg);

// Serial reference for the OpenMP kernel above; identical contract.
std::vector<InteractionTriplet> group_serial(
    const std::vector<ScoredDetection>& humans, const std::vector<ScoredDetection>& objects,
    const std::vector<codec::InteractionCandidate>& candidates, const GroupingConfig& cfg);

}  // namespace hoipoint::grouping
