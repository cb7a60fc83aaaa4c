// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include "hoipoint/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

// Everything below is deliberately written from scratch against the raw
// coordinate fields; do not call into hoipoint::geom, hoipoint::grouping
// or hoipoint::eval from this file.

namespace hoipoint::oracles {

namespace {

struct Row {
    InteractionTriplet t;
    int action;
    std::size_t hi, oi, ci;
};

bool pair_passes(const ScoredDetection& h, const ScoredDetection& o,
                 const codec::InteractionCandidate& cand, const grouping::GroupingConfig& cfg) {
    const double px = cand.x, py = cand.y;
    const double hcx = (h.bbox.x_min + h.bbox.x_max) / 2.0;
    const double hcy = (h.bbox.y_min + h.bbox.y_max) / 2.0;
    const double ocx = (o.bbox.x_min + o.bbox.x_max) / 2.0;
    const double ocy = (o.bbox.y_min + o.bbox.y_max) / 2.0;

    // Angle between p->h and p->o.
    bool angle_ok;
    {
        const double ax = hcx - px, ay = hcy - py, bx = ocx - px, by = ocy - py;
        const double na = std::sqrt(ax * ax + ay * ay), nb = std::sqrt(bx * bx + by * by);
        if (na == 0.0 || nb == 0.0) {
            angle_ok = true;
        } else {
            double c = (ax * bx + ay * by) / (na * nb);
            if (c > 1.0) c = 1.0;
            if (c < -1.0) c = -1.0;
            angle_ok = std::acos(c) >= cfg.angle_min;
        }
    }

    // Distance ratio.
    bool ratio_ok;
    {
        const double dh = std::sqrt((hcx - px) * (hcx - px) + (hcy - py) * (hcy - py));
        const double dobj = std::sqrt((ocx - px) * (ocx - px) + (ocy - py) * (ocy - py));
        const double lo = dh < dobj ? dh : dobj;
        const double hi = dh < dobj ? dobj : dh;
        ratio_ok = hi == 0.0 ? true : (lo == 0.0 ? false : hi / lo <= cfg.ratio_max);
    }

    // Interaction box.
    const double ix0 = px - cand.vector.vx, ix1 = px + cand.vector.vx;
    const double iy0 = py - cand.vector.vy, iy1 = py + cand.vector.vy;

    const auto overlap = [&](const ScoredDetection& d) {
        const double ow = std::min(d.bbox.x_max, ix1) - std::max(d.bbox.x_min, ix0);
        const double oh = std::min(d.bbox.y_max, iy1) - std::max(d.bbox.y_min, iy0);
        const bool okx =
            ow > 0.0 ||
            (ow == 0.0 && (d.bbox.x_max - d.bbox.x_min == 0.0 || ix1 - ix0 == 0.0));
        const bool oky =
            oh > 0.0 ||
            (oh == 0.0 && (d.bbox.y_max - d.bbox.y_min == 0.0 || iy1 - iy0 == 0.0));
        return okx && oky;
    };
    const bool iou_h_ok = overlap(h);
    const bool iou_o_ok = overlap(o);

    // Reference box and corner distances, canonical corner order.
    const double rx0 = std::min(hcx, ocx), rx1 = std::max(hcx, ocx);
    const double ry0 = std::min(hcy, ocy), ry1 = std::max(hcy, ocy);
    const auto dist = [](double ax, double ay, double bx, double by) {
        return std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by));
    };
    const double d_tl = dist(ix0, iy0, rx0, ry0);
    const double d_tr = dist(ix1, iy0, rx1, ry0);
    const double d_bl = dist(ix0, iy1, rx0, ry1);
    const double d_br = dist(ix1, iy1, rx1, ry1);
    const bool corners_ok =
        d_tl < cfg.d_tau && d_tr < cfg.d_tau && d_bl < cfg.d_tau && d_br < cfg.d_tau;

    switch (cfg.mode) {
        case grouping::Mode::angle_only: return angle_ok;
        case grouping::Mode::angle_plus_ratio: return angle_ok && ratio_ok;
        case grouping::Mode::box_only: return iou_h_ok && iou_o_ok;
        case grouping::Mode::full:
        case grouping::Mode::box_plus_corner: return iou_h_ok && iou_o_ok && corners_ok;
    }
    return false;
}

}  // namespace

std::vector<InteractionTriplet> oracle_group(
    const std::vector<ScoredDetection>& humans, const std::vector<ScoredDetection>& objects,
    const std::vector<codec::InteractionCandidate>& candidates,
    const grouping::GroupingConfig& cfg) {
    std::vector<Row> rows;
    for (std::size_t hi = 0; hi < humans.size(); ++hi) {
        const ScoredDetection& h = humans[hi];
        if (!(h.score > cfg.h_tau)) continue;
        for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
            const codec::InteractionCandidate& cand = candidates[ci];
            double floor = cfg.a_tau;
            if (!cfg.a_thresholds.empty() && cand.class_id >= 0 &&
                cand.class_id < static_cast<int>(cfg.a_thresholds.size()))
                floor = cfg.a_thresholds[cand.class_id];
            if (!(cand.score > floor)) continue;

            const bool no_obj = std::find(cfg.no_object_classes.begin(),
                                          cfg.no_object_classes.end(),
                                          cand.class_id) != cfg.no_object_classes.end();
            if (no_obj) {
                const double px = cand.x, py = cand.y;
                if (px >= h.bbox.x_min && px <= h.bbox.x_max && py >= h.bbox.y_min &&
                    py <= h.bbox.y_max) {
                    InteractionTriplet t;
                    t.human = h;
                    t.action_id = cand.class_id;
                    t.score = h.score * cand.score;
                    t.point = {px, py};
                    t.vector = cand.vector;
                    rows.push_back({t, cand.class_id, hi, static_cast<std::size_t>(-1), ci});
                }
                continue;
            }
            for (std::size_t oi = 0; oi < objects.size(); ++oi) {
                const ScoredDetection& o = objects[oi];
                if (!(o.score > cfg.o_tau)) continue;
                if (!pair_passes(h, o, cand, cfg)) continue;
                InteractionTriplet t;
                t.human = h;
                t.object = o;
                t.action_id = cand.class_id;
                t.score = h.score * o.score * cand.score;
                t.point = {static_cast<double>(cand.x), static_cast<double>(cand.y)};
                t.vector = cand.vector;
                rows.push_back({t, cand.class_id, hi, oi, ci});
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.t.score != b.t.score) return a.t.score > b.t.score;
        return std::tie(a.action, a.hi, a.oi, a.ci) < std::tie(b.action, b.hi, b.oi, b.ci);
    });
    std::vector<InteractionTriplet> out;
    out.reserve(rows.size());
    for (Row& r : rows) out.push_back(std::move(r.t));
    return out;
}

namespace {

double box_iou_scalar(const geom::BBox& a, const geom::BBox& b) {
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
    const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
    const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
    const double uni = area_a + area_b - inter;
    if (uni > 0.0) return inter / uni;
    const bool same = a.x_min == b.x_min && a.y_min == b.y_min && a.x_max == b.x_max &&
                      a.y_max == b.y_max;
    return same ? 1.0 : 0.0;
}

}  // namespace

std::map<int, double> oracle_ap(const std::vector<TripletRecord>& preds,
                                const std::vector<TripletRecord>& gts,
                                const std::vector<int>& no_object_classes, double iou_min) {
    std::map<int, double> result;
    std::map<int, std::vector<std::size_t>> gt_by_class;
    for (std::size_t g = 0; g < gts.size(); ++g)
        gt_by_class[gts[g].triplet.action_id].push_back(g);

    for (const auto& [cls, gt_idx] : gt_by_class) {
        const bool no_obj = std::find(no_object_classes.begin(), no_object_classes.end(), cls) !=
                            no_object_classes.end();
        std::vector<std::size_t> pred_idx;
        for (std::size_t p = 0; p < preds.size(); ++p)
            if (preds[p].triplet.action_id == cls) pred_idx.push_back(p);
        std::sort(pred_idx.begin(), pred_idx.end(), [&](std::size_t a, std::size_t b) {
            if (preds[a].triplet.score != preds[b].triplet.score)
                return preds[a].triplet.score > preds[b].triplet.score;
            const auto key = [&](std::size_t i) {
                const TripletRecord& r = preds[i];
                const geom::BBox& hb = r.triplet.human.bbox;
                geom::BBox ob{};
                if (r.triplet.object) ob = r.triplet.object->bbox;
                return std::make_tuple(r.image_id, r.triplet.action_id, hb.x_min, hb.y_min,
                                       hb.x_max, hb.y_max, ob.x_min, ob.y_min, ob.x_max,
                                       ob.y_max);
            };
            return key(a) < key(b);
        });

        std::vector<bool> used(gt_idx.size(), false);
        std::int64_t tp_count = 0;
        double ap = 0.0;
        double prev_best_precision_recall = 0.0;  // recall reached so far

        // Greedy match, then the exact area under the enveloped PR curve
        // computed pointwise from scratch.
        std::vector<bool> labels;
        for (std::size_t p : pred_idx) {
            double best = iou_min;
            std::size_t best_g = gt_idx.size();
            for (std::size_t g = 0; g < gt_idx.size(); ++g) {
                if (used[g]) continue;
                const TripletRecord& gt = gts[gt_idx[g]];
                if (gt.image_id != preds[p].image_id) continue;
                double q = box_iou_scalar(preds[p].triplet.human.bbox, gt.triplet.human.bbox);
                if (!no_obj) {
                    if (!preds[p].triplet.object || !gt.triplet.object)
                        q = 0.0;
                    else
                        q = std::min(q, box_iou_scalar(preds[p].triplet.object->bbox,
                                                       gt.triplet.object->bbox));
                }
                if (q > best) {
                    best = q;
                    best_g = g;
                }
            }
            if (best_g < gt_idx.size()) {
                used[best_g] = true;
                labels.push_back(true);
            } else {
                labels.push_back(false);
            }
        }

        const double n_gt = static_cast<double>(gt_idx.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!labels[i]) continue;
            ++tp_count;
            const double recall = static_cast<double>(tp_count) / n_gt;
            // Envelope precision at this recall: best precision at any
            // rank >= the current one.
            double best_prec = 0.0;
            std::int64_t tps = 0;
            for (std::size_t j = 0; j < labels.size(); ++j) {
                if (labels[j]) ++tps;
                if (j >= i) {
                    const double prec = static_cast<double>(tps) / static_cast<double>(j + 1);
                    best_prec = std::max(best_prec, prec);
                }
            }
            ap += (recall - prev_best_precision_recall) * best_prec;
            prev_best_precision_recall = recall;
        }
        result[cls] = ap;
    }
    return result;
}

}  // namespace hoipoint::oracles
