// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include "hoipoint/grouping.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hoipoint::grouping {

bool GroupingConfig::is_no_object(int action_id) const {
    return std::find(no_object_classes.begin(), no_object_classes.end(), action_id) !=
           no_object_classes.end();
}

double GroupingConfig::action_floor(int action_id) const {
    if (!a_thresholds.empty() && action_id >= 0 &&
        action_id < static_cast<int>(a_thresholds.size()))
        return a_thresholds[action_id];
    return a_tau;
}

bool angle_filter(const geom::Point2& h_center, const geom::Point2& o_center,
                  const geom::Point2& p, double angle_min) {
    const double ax = h_center.x - p.x, ay = h_center.y - p.y;
    const double bx = o_center.x - p.x, by = o_center.y - p.y;
    const double na = std::hypot(ax, ay), nb = std::hypot(bx, by);
    if (na == 0.0 || nb == 0.0) return true;  // degenerate, pass
    double cosang = (ax * bx + ay * by) / (na * nb);
    cosang = std::clamp(cosang, -1.0, 1.0);
    return std::acos(cosang) >= angle_min;
}

bool dist_ratio_filter(const geom::Point2& h_center, const geom::Point2& o_center,
                       const geom::Point2& p, double ratio_max) {
    const double dh = geom::distance(p, h_center);
    const double dor = geom::distance(p, o_center);
    const double lo = std::min(dh, dor), hi = std::max(dh, dor);
    if (hi == 0.0) return true;  // both zero, ratio taken as 1
    if (lo == 0.0) return false;
    return hi / lo <= ratio_max;
}

ConditionReport check_conditions(const ScoredDetection& human, const ScoredDetection& object,
                                 const codec::InteractionCandidate& cand,
                                 const GroupingConfig& cfg) {
    ConditionReport r;
    const geom::Point2 p = cand.point();
    const geom::Point2 hc = human.center();
    const geom::Point2 oc = object.center();

    const geom::CornerSet ibox = geom::interaction_box(p, cand.vector);
    const geom::CornerSet rbox = geom::reference_box(hc, oc);
    r.corner_dists = geom::corner_distances(ibox, rbox);

    const geom::BBox ib = ibox.bbox();
    r.iou_h_ok = geom::overlaps_positively(human.bbox, ib);
    r.iou_o_ok = geom::overlaps_positively(object.bbox, ib);
    r.corners_ok = std::all_of(r.corner_dists.begin(), r.corner_dists.end(),
                               [&](double d) { return d < cfg.d_tau; });
    r.angle_ok = angle_filter(hc, oc, p, cfg.angle_min);
    r.ratio_ok = dist_ratio_filter(hc, oc, p, cfg.ratio_max);

    switch (cfg.mode) {
        case Mode::angle_only:
            r.pass = r.angle_ok;
            break;
        case Mode::angle_plus_ratio:
            r.pass = r.angle_ok && r.ratio_ok;
            break;
        case Mode::box_only:
            r.pass = r.iou_h_ok && r.iou_o_ok;
            break;
        case Mode::full:
        case Mode::box_plus_corner:
            r.pass = r.iou_h_ok && r.iou_o_ok && r.corners_ok;
            break;
    }
    return r;
}

namespace {

struct Emitted {
    InteractionTriplet triplet;
    int action;
    std::size_t h_idx;
    std::size_t o_idx;  // npos for no-object triplets
    std::size_t c_idx;
};

constexpr std::size_t kNoObject = static_cast<std::size_t>(-1);

void sort_emitted(std::vector<Emitted>& out) {
    std::sort(out.begin(), out.end(), [](const Emitted& a, const Emitted& b) {
        if (a.triplet.score != b.triplet.score) return a.triplet.score > b.triplet.score;
        if (a.action != b.action) return a.action < b.action;
        if (a.h_idx != b.h_idx) return a.h_idx < b.h_idx;
        if (a.o_idx != b.o_idx) return a.o_idx < b.o_idx;
        return a.c_idx < b.c_idx;
    });
}

std::vector<InteractionTriplet> strip(std::vector<Emitted>&& out) {
    std::vector<InteractionTriplet> result;
    result.reserve(out.size());
    for (auto& e : out) result.push_back(std::move(e.triplet));
    return result;
}

// Pair one (human, candidate) against one object, or emit directly for
// no-object actions. Shared by the serial and parallel drivers.
inline void try_pair(const std::vector<ScoredDetection>& humans,
                     const std::vector<ScoredDetection>& objects,
                     const std::vector<codec::InteractionCandidate>& candidates,
                     const GroupingConfig& cfg, std::size_t hi, std::size_t oi, std::size_t ci,
                     std::vector<Emitted>& out) {
    const ScoredDetection& h = humans[hi];
    const codec::InteractionCandidate& cand = candidates[ci];
    if (cfg.is_no_object(cand.class_id)) {
        if (oi != 0) return;  // evaluated once per (human, candidate)
        if (!h.bbox.contains(cand.point())) return;
        InteractionTriplet t;
        t.human = h;
        t.action_id = cand.class_id;
        t.score = h.score * cand.score;
        t.point = cand.point();
        t.vector = cand.vector;
        out.push_back({std::move(t), cand.class_id, hi, kNoObject, ci});
        return;
    }
    if (oi >= objects.size()) return;
    const ScoredDetection& o = objects[oi];
    if (!(o.score > cfg.o_tau)) return;
    if (!check_conditions(h, o, cand, cfg).pass) return;
    InteractionTriplet t;
    t.human = h;
    t.object = o;
    t.action_id = cand.class_id;
    t.score = h.score * o.score * cand.score;
    t.point = cand.point();
    t.vector = cand.vector;
    out.push_back({std::move(t), cand.class_id, hi, oi, ci});
}

}  // namespace

std::vector<InteractionTriplet> group_serial(
    const std::vector<ScoredDetection>& humans, const std::vector<ScoredDetection>& objects,
    const std::vector<codec::InteractionCandidate>& candidates, const GroupingConfig& cfg) {
    std::vector<Emitted> out;
    const std::size_t o_slots = std::max<std::size_t>(objects.size(), 1);
    for (std::size_t hi = 0; hi < humans.size(); ++hi) {
        if (!(humans[hi].score > cfg.h_tau)) continue;
        for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
            if (!(candidates[ci].score > cfg.action_floor(candidates[ci].class_id))) continue;
            for (std::size_t oi = 0; oi < o_slots; ++oi)
                try_pair(humans, objects, candidates, cfg, hi, oi, ci, out);
        }
    }
    sort_emitted(out);
    return strip(std::move(out));
}

std::vector<InteractionTriplet> group(const std::vector<ScoredDetection>& humans,
                                      const std::vector<ScoredDetection>& objects,
                                      const std::vector<codec::InteractionCandidate>& candidates,
                                      const GroupingConfig& cfg) {
#ifdef _OPENMP
    std::vector<Emitted> out;
    const std::size_t o_slots = std::max<std::size_t>(objects.size(), 1);
    const long n_h = static_cast<long>(humans.size());
#pragma omp parallel
    {
        std::vector<Emitted> local;
#pragma omp for schedule(static) nowait
        for (long hl = 0; hl < n_h; ++hl) {
            const std::size_t hi = static_cast<std::size_t>(hl);
            if (!(humans[hi].score > cfg.h_tau)) continue;
            for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
                if (!(candidates[ci].score > cfg.action_floor(candidates[ci].class_id)))
                    continue;
                for (std::size_t oi = 0; oi < o_slots; ++oi)
                    try_pair(humans, objects, candidates, cfg, hi, oi, ci, local);
            }
        }
#pragma omp critical
        out.insert(out.end(), std::make_move_iterator(local.begin()),
                   std::make_move_iterator(local.end()));
    }
    // The sort key is a total order over emitted pairs, so the merge
    // order across threads does not affect the result.
    sort_emitted(out);
    return strip(std::move(out));
#else
    return group_serial(humans, objects, candidates, cfg);
#endif
}

}  // namespace hoipoint::grouping
