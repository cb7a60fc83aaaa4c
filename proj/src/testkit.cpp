// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include "hoipoint/testkit.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hoipoint/errors.hpp"
#include "hoipoint/grouping.hpp"

namespace hoipoint::testkit {

namespace {

// Minimum exact separation between interaction points. Rounding moves a
// point by at most 0.5 per axis, so this keeps rounded cells more than
// 2 apart.
constexpr double kMinPointSep = 4.0;

int rand_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

geom::BBox box_around(const geom::Point2& c, double half_w, double half_h) {
    return {c.x - half_w, c.y - half_h, c.x + half_w, c.y + half_h};
}

bool boxes_touch(const geom::BBox& a, const geom::BBox& b) {
    return a.x_min <= b.x_max && b.x_min <= a.x_max && a.y_min <= b.y_max && b.y_min <= a.y_max;
}

struct Placement {
    geom::Point2 h_center, o_center;
    double h_half_w, h_half_h, o_half_w, o_half_h;
};

}  // namespace

SceneBundle synth_scene(const SynthParams& params) {
    if (params.n_pairs < 1 || params.n_actions < 1)
        throw ValidationError("synth_scene: need at least one pair and one action");
    const int h = params.grid_height, w = params.grid_width;

    std::mt19937_64 rng(params.seed);
    const int outer_retries = 50;
    for (int attempt = 0; attempt < outer_retries; ++attempt) {
        std::vector<Placement> placements;
        std::vector<geom::Point2> points;
        bool feasible = true;

        for (int i = 0; i < params.n_pairs && feasible; ++i) {
            bool placed = false;
            for (int tries = 0; tries < 1000 && !placed; ++tries) {
                Placement pl;
                // Integer centers with both axis gaps even and >= 4, so the
                // interaction point is an exact cell and the interaction box
                // has positive extent on both axes.
                const int margin = 8;
                if (2 * margin + 8 >= w || 2 * margin + 8 >= h) {
                    feasible = false;
                    break;
                }
                const int hx = rand_int(rng, margin, w - 1 - margin);
                const int hy = rand_int(rng, margin, h - 1 - margin);
                const int gap_x = 2 * rand_int(rng, 2, 5) * (rand_int(rng, 0, 1) ? 1 : -1);
                const int gap_y = 2 * rand_int(rng, 2, 5) * (rand_int(rng, 0, 1) ? 1 : -1);
                const int ox = hx + gap_x, oy = hy + gap_y;
                if (ox < margin || ox > w - 1 - margin || oy < margin || oy > h - 1 - margin)
                    continue;
                pl.h_center = {static_cast<double>(hx), static_cast<double>(hy)};
                pl.o_center = {static_cast<double>(ox), static_cast<double>(oy)};
                pl.h_half_w = rand_int(rng, 2, 5);
                pl.h_half_h = rand_int(rng, 2, 5);
                pl.o_half_w = rand_int(rng, 2, 5);
                pl.o_half_h = rand_int(rng, 2, 5);

                const geom::Point2 p = geom::midpoint(pl.h_center, pl.o_center);
                bool ok = true;
                for (const geom::Point2& q : points)
                    if (geom::distance(p, q) < kMinPointSep) ok = false;
                if (!ok) continue;
                placements.push_back(pl);
                points.push_back(p);
                placed = true;
            }
            if (!placed) feasible = false;
        }
        if (!feasible) continue;

        SceneBundle scene;
        scene.grid_height = h;
        scene.grid_width = w;
        scene.seed = params.seed;
        scene.num_actions = params.n_actions;
        for (std::size_t i = 0; i < placements.size(); ++i) {
            const Placement& pl = placements[i];
            InteractionTriplet t;
            t.human = {box_around(pl.h_center, pl.h_half_w, pl.h_half_h), 1, 1.0};
            t.object = ScoredDetection{box_around(pl.o_center, pl.o_half_w, pl.o_half_h),
                                       2 + static_cast<int>(i % 10), 1.0};
            t.action_id = rand_int(rng, 0, params.n_actions - 1);
            t.score = 1.0;
            t.point = points[i];
            t.vector = {std::abs(pl.h_center.x - t.point.x), std::abs(pl.h_center.y - t.point.y)};
            scene.triplets.push_back(t);
            scene.humans.push_back(t.human);
            scene.objects.push_back(*t.object);
        }

        if (params.exclusive_pairs) {
            // No candidate may satisfy the full conditions at d_tau = 1 with
            // a wrong (human, object) pair; otherwise resample the scene.
            grouping::GroupingConfig strict;
            strict.mode = grouping::Mode::full;
            strict.d_tau = 1.0;
            bool clean = true;
            for (std::size_t k = 0; k < scene.triplets.size() && clean; ++k) {
                codec::InteractionCandidate cand;
                const codec::Cell cell = codec::rounded_point(scene.triplets[k]);
                cand = {scene.triplets[k].action_id, cell.x, cell.y, 1.0,
                        scene.triplets[k].vector};
                for (std::size_t hi = 0; hi < scene.humans.size() && clean; ++hi)
                    for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
                        if (hi == k && oi == k) continue;
                        if (grouping::check_conditions(scene.humans[hi], scene.objects[oi], cand,
                                                       strict)
                                .pass) {
                            clean = false;
                            break;
                        }
                    }
            }
            if (!clean) continue;
        }

        // Distractors: detections whose boxes touch no interaction box.
        std::vector<geom::BBox> iboxes;
        for (const InteractionTriplet& t : scene.triplets)
            iboxes.push_back(geom::interaction_box(t.point, t.vector).bbox());
        int placed_distractors = 0;
        for (int tries = 0; tries < 5000 && placed_distractors < params.distractors; ++tries) {
            const geom::Point2 c = {static_cast<double>(rand_int(rng, 4, w - 5)),
                                    static_cast<double>(rand_int(rng, 4, h - 5))};
            const geom::BBox box = box_around(c, rand_int(rng, 2, 4), rand_int(rng, 2, 4));
            if (box.x_min < 0 || box.y_min < 0 || box.x_max > w - 1 || box.y_max > h - 1)
                continue;
            bool clear = true;
            for (const geom::BBox& ib : iboxes)
                if (boxes_touch(box, ib)) clear = false;
            if (!clear) continue;
            const bool as_human = rand_int(rng, 0, 1) == 1;
            ScoredDetection det{box, as_human ? 1 : 2 + placed_distractors % 10, 1.0};
            if (as_human)
                scene.distractor_humans.push_back(det);
            else
                scene.distractor_objects.push_back(det);
            ++placed_distractors;
        }
        if (placed_distractors < params.distractors) continue;

        scene.heatmap = codec::encode_points(scene.triplets, params.n_actions, h, w, params.sigma);
        codec::VectorTargets vt = codec::encode_vectors(scene.triplets, h, w);
        scene.vectors = std::move(vt.field);
        scene.mask = std::move(vt.mask);
        return scene;
    }
    throw ValidationError("synth_scene: could not pack " + std::to_string(params.n_pairs) +
                          " pairs on a " + std::to_string(w) + "x" + std::to_string(h) +
                          " grid (seed " + std::to_string(params.seed) + ")");
}

}  // namespace hoipoint::testkit
