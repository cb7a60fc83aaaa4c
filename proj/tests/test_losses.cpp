// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hoipoint/errors.hpp"
#include "hoipoint/losses.hpp"

using namespace hoipoint;
using codec::ClassHeatmap;
using codec::VectorField;
using losses::VectorTarget;

TEST_CASE("focal loss fixture: one positive, one background cell") {
    ClassHeatmap pred(1, 1, 2), target(1, 1, 2);
    target.at(0, 0, 0) = 1.0;
    pred.at(0, 0, 0) = 0.5;
    pred.at(0, 0, 1) = 0.1;
    const double expected = 0.25 * std::log(2.0) + 0.01 * (-std::log(0.9));
    CHECK(std::abs(losses::focal_loss(pred, target) - expected) < 1e-9);
}

TEST_CASE("focal loss fixture: penumbra cell") {
    ClassHeatmap pred(1, 1, 1), target(1, 1, 1);
    target.at(0, 0, 0) = 0.5;
    pred.at(0, 0, 0) = 0.5;
    const double expected = std::pow(0.5, 4) * std::pow(0.5, 2) * (-std::log(0.5));
    CHECK(std::abs(losses::focal_loss(pred, target) - expected) < 1e-9);
}

TEST_CASE("perfect prediction has near-zero focal loss") {
    ClassHeatmap pred(2, 3, 3), target(2, 3, 3);
    target.at(0, 1, 1) = 1.0;
    pred = target;
    CHECK(losses::focal_loss(pred, target) < 1e-3);  // bounded by the clamp epsilon
    CHECK(losses::focal_loss(pred, target) >= 0.0);
}

TEST_CASE("focal loss rejects shape mismatch") {
    CHECK_THROWS_AS(losses::focal_loss(ClassHeatmap(1, 2, 2), ClassHeatmap(1, 3, 2)),
                    ValidationError);
}

TEST_CASE("focal loss is non-negative and permutation invariant over random maps") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int iter = 0; iter < 50; ++iter) {
        ClassHeatmap pred(2, 3, 3), target(2, 3, 3);
        for (double& v : pred.values) v = u(rng);
        for (double& v : target.values) v = u(rng);
        target.values[iter % target.values.size()] = 1.0;
        CHECK(losses::focal_loss(pred, target) >= 0.0);
    }
}

TEST_CASE("focal loss gradient matches central finite differences") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const double step = 1e-5;
    for (int iter = 0; iter < 50; ++iter) {
        ClassHeatmap pred(2, 4, 4), target(2, 4, 4);
        for (double& v : pred.values) v = u(rng);
        for (double& v : target.values) v = coin(rng) < 0.2 ? 1.0 : u(rng) * 0.9;
        std::vector<double> grad;
        losses::focal_loss(pred, target, 2.0, 4.0, &grad);
        for (std::size_t i = 0; i < pred.values.size(); ++i) {
            ClassHeatmap lo = pred, hi = pred;
            lo.values[i] -= step;
            hi.values[i] += step;
            const double fd = (losses::focal_loss(hi, target) - losses::focal_loss(lo, target)) /
                              (2 * step);
            if (std::abs(fd) > 1e-8)
                CHECK(std::abs(grad[i] - fd) / std::abs(fd) < 1e-4);
        }
    }
}

TEST_CASE("vector loss fixtures") {
    VectorField pred(8, 8);
    pred.vx(2, 3) = 3.0;
    pred.vy(2, 3) = 2.0;
    pred.vx(5, 5) = 1.0;
    const std::vector<VectorTarget> targets = {{{3, 2}, {2.5, 2.5}}, {{5, 5}, {1.0, 0.0}}};
    CHECK(std::abs(losses::vector_l1_loss(pred, targets) - 0.5) < 1e-9);

    CHECK(losses::vector_l1_loss(pred, {{{5, 5}, {1.0, 0.0}}}) == 0.0);
    CHECK(losses::vector_l1_loss(pred, {}) == 0.0);

    VectorField zero(4, 4);
    CHECK(std::abs(losses::vector_l1_loss(zero, {{{1, 1}, {4.0, 0.0}}}) - 4.0) < 1e-9);
}

TEST_CASE("vector loss gradient matches finite differences away from kinks") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    const double step = 1e-5;
    for (int iter = 0; iter < 50; ++iter) {
        VectorField pred(4, 4);
        for (double& v : pred.values) v = u(rng);
        std::vector<VectorTarget> targets;
        for (int k = 0; k < 3; ++k)
            targets.push_back({{static_cast<int>(u(rng) * 0.8) % 4,
                                static_cast<int>(u(rng) * 0.8) % 4},
                               {u(rng), u(rng)}});
        std::vector<double> grad;
        losses::vector_l1_loss(pred, targets, &grad);
        for (std::size_t i = 0; i < pred.values.size(); ++i) {
            VectorField lo = pred, hi = pred;
            lo.values[i] -= step;
            hi.values[i] += step;
            // Skip cells near a kink of |.|.
            bool near_kink = false;
            for (const VectorTarget& t : targets) {
                const std::size_t ix = static_cast<std::size_t>(t.cell.y) * 4 + t.cell.x;
                const std::size_t iy = ix + 16;
                if (i == ix && std::abs(pred.values[i] - t.value.vx) < 1e-3) near_kink = true;
                if (i == iy && std::abs(pred.values[i] - t.value.vy) < 1e-3) near_kink = true;
            }
            if (near_kink) continue;
            const double fd =
                (losses::vector_l1_loss(hi, targets) - losses::vector_l1_loss(lo, targets)) /
                (2 * step);
            if (std::abs(fd) > 1e-8)
                CHECK(std::abs(grad[i] - fd) / std::abs(fd) < 1e-4);
            else
                CHECK(std::abs(grad[i]) < 1e-8);
        }
    }
}

TEST_CASE("total loss") {
    const double lp = 0.25 * std::log(2.0) + 0.01 * (-std::log(0.9));
    CHECK(std::abs(losses::total_loss(lp, 0.5, 0.1) - (lp + 0.05)) < 1e-12);
    CHECK(losses::total_loss(0.7, 0.0, 0.1) == 0.7);
    CHECK(losses::total_loss(0.7, 123.0, 0.0) == 0.7);
}

TEST_CASE("loss report combines the terms") {
    ClassHeatmap pred(1, 2, 2), target(1, 2, 2);
    target.at(0, 0, 0) = 1.0;
    pred.at(0, 0, 0) = 0.5;
    VectorField pv(2, 2);
    pv.vx(1, 1) = 2.0;
    const std::vector<VectorTarget> vt = {{{1, 1}, {1.0, 0.0}}};
    const losses::LossReport r = losses::make_report(pred, target, pv, vt, 0.1);
    CHECK(r.n_points == 1);
    CHECK(r.l_vector == doctest::Approx(1.0));
    CHECK(r.l_total == doctest::Approx(r.l_point + 0.1 * r.l_vector).epsilon(1e-15));
}
