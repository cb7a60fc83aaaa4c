// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hoipoint/errors.hpp"
#include "hoipoint/grouping.hpp"
#include "hoipoint/testkit.hpp"

using namespace hoipoint;
using testkit::SynthParams;

TEST_CASE("synth_scene is deterministic in the seed") {
    SynthParams p;
    p.seed = 42;
    p.n_pairs = 4;
    p.n_actions = 3;
    p.distractors = 5;
    const auto a = testkit::synth_scene(p);
    const auto b = testkit::synth_scene(p);
    CHECK(a.triplets == b.triplets);
    CHECK(a.humans == b.humans);
    CHECK(a.objects == b.objects);
    CHECK(a.distractor_humans == b.distractor_humans);
    CHECK(a.distractor_objects == b.distractor_objects);
    CHECK(a.heatmap.values == b.heatmap.values);
    CHECK(a.vectors.values == b.vectors.values);

    p.seed = 43;
    const auto c = testkit::synth_scene(p);
    CHECK(a.triplets != c.triplets);
}

TEST_CASE("synth_scene invariants hold across seeds") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SynthParams p;
        p.seed = seed;
        p.n_pairs = 3;
        p.n_actions = 2;
        p.distractors = 4;
        const auto s = testkit::synth_scene(p);
        REQUIRE(s.triplets.size() == 3);
        REQUIRE(s.humans.size() == 3);
        REQUIRE(s.objects.size() == 3);
        CHECK(s.distractor_humans.size() + s.distractor_objects.size() == 4);

        int supervised = 0;
        for (auto m : s.mask.values) supervised += m;
        CHECK(supervised == 3);

        for (const InteractionTriplet& t : s.triplets) {
            // Interaction points are exact cells, so encoding is lossless.
            CHECK(t.point.x == std::floor(t.point.x));
            CHECK(t.point.y == std::floor(t.point.y));
            CHECK(t.point == geom::midpoint(t.human.center(), t.object->center()));
            const codec::Cell c = codec::rounded_point(t);
            CHECK(s.heatmap.at(t.action_id, c.y, c.x) == 1.0);
            CHECK(s.vectors.vx(c.y, c.x) == t.vector.vx);
            CHECK(s.vectors.vy(c.y, c.x) == t.vector.vy);
            CHECK(s.mask.at(c.y, c.x) == 1);

            // Distractors stay clear of every interaction box.
            const geom::BBox ib = geom::interaction_box(t.point, t.vector).bbox();
            for (const ScoredDetection& d : s.distractor_humans)
                CHECK(geom::iou(d.bbox, ib) == 0.0);
            for (const ScoredDetection& d : s.distractor_objects)
                CHECK(geom::iou(d.bbox, ib) == 0.0);
        }
    }
}

TEST_CASE("decode and group recover exactly the planted triplets") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        SynthParams p;
        p.seed = seed;
        p.n_pairs = 4;
        p.n_actions = 3;
        p.distractors = 6;
        const auto s = testkit::synth_scene(p);

        const auto peaks = codec::decode_peaks(
            s.heatmap, 100, std::vector<double>(p.n_actions, 0.0), s.vectors);
        REQUIRE(peaks.size() == s.triplets.size());

        std::vector<ScoredDetection> humans = s.humans, objects = s.objects;
        humans.insert(humans.end(), s.distractor_humans.begin(), s.distractor_humans.end());
        objects.insert(objects.end(), s.distractor_objects.begin(), s.distractor_objects.end());

        grouping::GroupingConfig cfg;
        cfg.h_tau = cfg.o_tau = cfg.a_tau = 0.0;
        cfg.d_tau = 1.0;
        const auto out = grouping::group(humans, objects, peaks, cfg);
        REQUIRE(out.size() == s.triplets.size());
        for (const InteractionTriplet& t : s.triplets) {
            bool found = false;
            for (const InteractionTriplet& got : out)
                if (got.human.bbox == t.human.bbox && got.object->bbox == t.object->bbox &&
                    got.action_id == t.action_id)
                    found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("synth_scene reports infeasible packings") {
    SynthParams p;
    p.grid_height = 20;
    p.grid_width = 20;
    p.n_pairs = 50;
    CHECK_THROWS_AS(testkit::synth_scene(p), ValidationError);
    p.n_pairs = 0;
    CHECK_THROWS_AS(testkit::synth_scene(p), ValidationError);
}
