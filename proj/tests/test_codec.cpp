// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hoipoint/codec.hpp"
#include "hoipoint/errors.hpp"

using namespace hoipoint;
using codec::ClassHeatmap;
using codec::VectorField;

namespace {

InteractionTriplet make_triplet(geom::Point2 h_center, geom::Point2 o_center, int action = 0) {
    InteractionTriplet t;
    t.human.bbox = {h_center.x - 1, h_center.y - 1, h_center.x + 1, h_center.y + 1};
    ScoredDetection obj;
    obj.bbox = {o_center.x - 1, o_center.y - 1, o_center.x + 1, o_center.y + 1};
    t.object = obj;
    t.action_id = action;
    const geom::Point2 p = geom::midpoint(h_center, o_center);
    t.point = p;
    t.vector = {std::abs(h_center.x - p.x), std::abs(h_center.y - p.y)};
    return t;
}

InteractionTriplet triplet_at(double px, double py, int action = 0) {
    // Human and object centers symmetric about (px, py).
    return make_triplet({px + 1, py}, {px - 1, py}, action);
}

}  // namespace

TEST_CASE("encode_points places a unit Gaussian") {
    const ClassHeatmap hm = codec::encode_points({triplet_at(2, 2)}, 1, 5, 5, 1.0);
    CHECK(hm.at(0, 2, 2) == 1.0);
    CHECK(hm.at(0, 3, 2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(hm.at(0, 3, 3) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    for (double v : hm.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("encode_points of nothing is all zero") {
    const ClassHeatmap hm = codec::encode_points({}, 2, 4, 4, 1.0);
    for (double v : hm.values) CHECK(v == 0.0);
}

TEST_CASE("overlapping Gaussians combine by max") {
    const ClassHeatmap hm =
        codec::encode_points({triplet_at(1, 1), triplet_at(3, 3)}, 1, 5, 5, 1.0);
    CHECK(hm.at(0, 2, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(hm.at(0, 1, 1) == 1.0);
    CHECK(hm.at(0, 3, 3) == 1.0);
}

TEST_CASE("encode_points rejects out-of-grid points") {
    CHECK_THROWS_AS(codec::encode_points({triplet_at(9, 2)}, 1, 5, 5, 1.0), ValidationError);
}

TEST_CASE("encode_vectors writes the unsigned vector at the rounded cell") {
    const InteractionTriplet t = make_triplet({8, 2}, {0, 2});
    const codec::VectorTargets vt = codec::encode_vectors({t}, 8, 10);
    CHECK(vt.field.vx(2, 4) == 4.0);
    CHECK(vt.field.vy(2, 4) == 0.0);
    CHECK(vt.mask.at(2, 4) == 1);
    int supervised = 0;
    for (auto m : vt.mask.values) supervised += m;
    CHECK(supervised == 1);
}

TEST_CASE("encode_vectors degenerate pair gives a zero vector") {
    const codec::VectorTargets vt = codec::encode_vectors({make_triplet({3, 3}, {3, 3})}, 8, 8);
    CHECK(vt.field.vx(3, 3) == 0.0);
    CHECK(vt.field.vy(3, 3) == 0.0);
    CHECK(vt.mask.at(3, 3) == 1);
}

TEST_CASE("encode_vectors collision names both triplets") {
    const InteractionTriplet a = make_triplet({8, 2}, {0, 2});
    const InteractionTriplet b = make_triplet({6, 2}, {2, 2});
    try {
        codec::encode_vectors({a, b}, 8, 10);
        FAIL("expected a collision error");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("0") != std::string::npos);
        CHECK(msg.find("1") != std::string::npos);
    }
}

TEST_CASE("center_pool") {
    const std::vector<double> m = {1, 0, 0, 0, 2, 0, 0, 0, 3};
    const std::vector<double> out = codec::center_pool(m, 3, 3);
    CHECK(out[1 * 3 + 1] == 4.0);  // row max 2 + col max 2
    CHECK(out[0] == 2.0);          // row max 1 + col max 1

    const std::vector<double> zeros(9, 0.0);
    for (double v : codec::center_pool(zeros, 3, 3)) CHECK(v == 0.0);

    const std::vector<double> c(12, 2.5);
    for (double v : codec::center_pool(c, 3, 4)) CHECK(v == 5.0);
}

TEST_CASE("center_pool commutes with transposition") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-3, 3);
    const int h = 5, w = 7;
    std::vector<double> m(h * w);
    for (double& v : m) v = u(rng);
    std::vector<double> mt(w * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) mt[x * h + y] = m[y * w + x];
    const auto a = codec::center_pool(m, h, w);
    const auto bt = codec::center_pool(mt, w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) CHECK(a[y * w + x] == bt[x * h + y]);
}

TEST_CASE("decode_peaks suppresses cells with a higher neighbour") {
    ClassHeatmap hm(1, 5, 5);
    hm.at(0, 2, 2) = 0.9;
    hm.at(0, 3, 2) = 0.8;  // (x=2, y=3)
    const VectorField vf(5, 5);
    const auto peaks = codec::decode_peaks(hm, 10, {0.0}, vf);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].x == 2);
    CHECK(peaks[0].y == 2);
    CHECK(peaks[0].score == 0.9);
}

TEST_CASE("decode_peaks drops sub-threshold and zero maps") {
    const ClassHeatmap hm(1, 4, 4);
    const VectorField vf(4, 4);
    CHECK(codec::decode_peaks(hm, 10, {0.1}, vf).empty());
    CHECK(codec::decode_peaks(hm, 10, {0.0}, vf).empty());  // zero responses are not peaks
}

TEST_CASE("decode_peaks breaks score ties by class") {
    ClassHeatmap hm(2, 5, 5);
    hm.at(0, 1, 1) = 1.0;
    hm.at(1, 3, 3) = 1.0;
    const VectorField vf(5, 5);
    const auto peaks = codec::decode_peaks(hm, 1, {0.0, 0.0}, vf);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].class_id == 0);
}

TEST_CASE("decode_peaks k=0 yields empty output") {
    ClassHeatmap hm(1, 3, 3);
    hm.at(0, 1, 1) = 1.0;
    CHECK(codec::decode_peaks(hm, 0, {0.0}, VectorField(3, 3)).empty());
}

TEST_CASE("decode_peaks output is score-sorted and bounded by k") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    for (int iter = 0; iter < 50; ++iter) {
        ClassHeatmap hm(2, 8, 8);
        for (double& v : hm.values) v = u(rng);
        const int k = 5;
        const auto peaks = codec::decode_peaks(hm, k, {0.0, 0.0}, VectorField(8, 8));
        CHECK(peaks.size() <= static_cast<std::size_t>(k));
        for (std::size_t i = 1; i < peaks.size(); ++i)
            CHECK(peaks[i - 1].score >= peaks[i].score);
    }
}

TEST_CASE("round trip recovers well-separated triplets") {
    std::mt19937 rng(31);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<InteractionTriplet> triplets;
        std::vector<std::pair<int, int>> cells;
        std::uniform_int_distribution<int> pos(4, 27);
        std::uniform_int_distribution<int> act(0, 2);
        while (triplets.size() < 4) {
            const int x = pos(rng), y = pos(rng);
            bool ok = true;
            for (auto [cx, cy] : cells)
                if (std::abs(cx - x) <= 3 && std::abs(cy - y) <= 3) ok = false;
            if (!ok) continue;
            cells.emplace_back(x, y);
            triplets.push_back(triplet_at(x, y, act(rng)));
        }
        const ClassHeatmap hm = codec::encode_points(triplets, 3, 32, 32, 1.5);
        const codec::VectorTargets vt = codec::encode_vectors(triplets, 32, 32);
        const auto peaks =
            codec::decode_peaks(hm, 100, std::vector<double>(3, 0.0), vt.field);
        REQUIRE(peaks.size() == triplets.size());
        for (const InteractionTriplet& t : triplets) {
            const codec::Cell c = codec::rounded_point(t);
            bool found = false;
            for (const auto& p : peaks)
                if (p.x == c.x && p.y == c.y && p.class_id == t.action_id &&
                    p.vector == t.vector && p.score == 1.0)
                    found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("dynamic thresholds") {
    CHECK(codec::dynamic_thresholds({3, 500}, 0.01, 0.05, 10) ==
          std::vector<double>{0.01, 0.05});
    CHECK(codec::dynamic_thresholds({7, 7, 7}, 0.01, 0.05, 10) ==
          std::vector<double>{0.01, 0.01, 0.01});
    CHECK(codec::dynamic_thresholds({3, 500}, 0.01, 0.05, 0) ==
          std::vector<double>{0.05, 0.05});

    // Monotone in the count.
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::int64_t> cnt(0, 100);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<std::int64_t> counts(6);
        for (auto& c : counts) c = cnt(rng);
        const auto th = codec::dynamic_thresholds(counts, 0.01, 0.05, 50);
        for (std::size_t a = 0; a < counts.size(); ++a)
            for (std::size_t b = 0; b < counts.size(); ++b)
                if (counts[a] <= counts[b]) CHECK(th[a] <= th[b]);
    }
}
