// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hoipoint/errors.hpp"
#include "hoipoint/evaluator.hpp"
#include "hoipoint/oracles.hpp"

using namespace hoipoint;

namespace {

TripletRecord rec(std::int64_t image, int action, geom::BBox hbox, geom::BBox obox,
                  double score) {
    TripletRecord r;
    r.image_id = image;
    r.triplet.action_id = action;
    r.triplet.human.bbox = hbox;
    r.triplet.object = ScoredDetection{obox, 2, 1.0};
    r.triplet.score = score;
    return r;
}

std::mt19937_64& rng() {
    static std::mt19937_64 r(71);
    return r;
}

double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng()); }

geom::BBox random_box() {
    const double x = unit() * 20, y = unit() * 20;
    return {x, y, x + 2 + unit() * 10, y + 2 + unit() * 10};
}

TripletRecord random_record(int images, int classes) {
    return rec(static_cast<std::int64_t>(unit() * images), static_cast<int>(unit() * classes),
               random_box(), random_box(), unit());
}

// A prediction that overlaps the GT well (IoU > 0.5 on both boxes).
TripletRecord jitter(const TripletRecord& gt, double score) {
    TripletRecord r = gt;
    r.triplet.score = score;
    r.triplet.human.bbox.x_min += 0.2;
    r.triplet.object->bbox.y_max -= 0.2;
    return r;
}

}  // namespace

TEST_CASE("matcher fixtures") {
    const TripletRecord gt = rec(0, 3, {0, 0, 10, 10}, {20, 0, 30, 10}, 1.0);

    SUBCASE("above both IoU floors, correct action: TP") {
        const TripletRecord p = rec(0, 3, {0, 0, 10, 12}, {20, 0, 30, 11}, 0.9);
        const auto m = eval::match_triplets({p}, {gt}, {});
        REQUIRE(m.is_tp.size() == 1);
        CHECK(m.is_tp[0]);
    }
    SUBCASE("same boxes, wrong action: FP") {
        const TripletRecord p = rec(0, 4, {0, 0, 10, 10}, {20, 0, 30, 10}, 0.9);
        const auto m = eval::match_triplets({p}, {gt}, {});
        CHECK(!m.is_tp[0]);
    }
    SUBCASE("two qualifying predictions, one GT: greedy keeps the higher-scored") {
        const TripletRecord hi = jitter(gt, 0.9);
        const TripletRecord lo = jitter(gt, 0.4);
        const auto m = eval::match_triplets({lo, hi}, {gt}, {});
        REQUIRE(m.order.size() == 2);
        CHECK(m.order[0] == 1);
        CHECK(m.is_tp[0]);
        CHECK(!m.is_tp[1]);
    }
}

TEST_CASE("matching is strict at the IoU floor") {
    const TripletRecord gt = rec(0, 0, {0, 0, 10, 10}, {0, 0, 10, 10}, 1.0);
    // IoU exactly 0.5 on the human box.
    TripletRecord p = gt;
    p.triplet.human.bbox = {0, 0, 10, 5};  // IoU = 50/100
    const auto m = eval::match_triplets({p}, {gt}, {});
    CHECK(!m.is_tp[0]);
}

TEST_CASE("no-object classes match on the human box alone") {
    TripletRecord gt;
    gt.image_id = 0;
    gt.triplet.action_id = 1;
    gt.triplet.human.bbox = {0, 0, 10, 10};
    TripletRecord p = gt;
    p.triplet.score = 0.8;
    const auto m = eval::match_triplets({p}, {gt}, {1});
    CHECK(m.is_tp[0]);
}

TEST_CASE("average precision fixtures") {
    CHECK(eval::average_precision({true}, 1) == 1.0);
    CHECK(eval::average_precision({false, true}, 1) == 0.5);
    CHECK(eval::average_precision({true, true}, 4) == 0.5);
    CHECK(eval::average_precision({}, 3) == 0.0);
    CHECK(eval::average_precision({false, false}, 2) == 0.0);
}

TEST_CASE("evaluate: perfect predictions give mAP 1 in both settings") {
    std::vector<TripletRecord> gts_v, preds;
    eval::GroundTruthSet gts;
    for (int c = 0; c < 3; ++c) {
        const TripletRecord g = rec(0, c, {0.0, 10.0 * c, 8.0, 10.0 * c + 8},
                                    {20.0, 10.0 * c, 28.0, 10.0 * c + 8}, 1.0);
        gts.triplets.push_back(g);
        preds.push_back(jitter(g, 0.9));
        gts.known_object_images[c] = {0};
    }
    gts.class_counts = {5, 5, 5};
    const auto def = eval::evaluate(preds, gts, eval::Setting::default_setting);
    CHECK(def.map_full == 1.0);
    const auto ko = eval::evaluate(preds, gts, eval::Setting::known_object);
    CHECK(ko.map_full == 1.0);
}

TEST_CASE("rare and non-rare splits follow the count cutoff") {
    eval::GroundTruthSet gts;
    gts.class_counts = {3, 500};
    gts.rare_cutoff = 10;
    const TripletRecord g0 = rec(0, 0, {0, 0, 8, 8}, {20, 0, 28, 8}, 1.0);
    const TripletRecord g1 = rec(0, 1, {0, 20, 8, 28}, {20, 20, 28, 28}, 1.0);
    gts.triplets = {g0, g1};
    const auto r =
        eval::evaluate({jitter(g0, 0.9)}, gts, eval::Setting::default_setting);
    CHECK(r.rare_classes == std::set<int>{0});
    CHECK(r.nonrare_classes == std::set<int>{1});
    CHECK(r.map_rare == 1.0);
    CHECK(r.map_nonrare == 0.0);
    CHECK(r.map_full == 0.5);
}

TEST_CASE("known-object can exclude an image with a false positive") {
    const TripletRecord g = rec(0, 0, {0, 0, 8, 8}, {20, 0, 28, 8}, 1.0);
    eval::GroundTruthSet gts;
    gts.triplets = {g};
    gts.known_object_images[0] = {0};  // image 1 not known for this class
    // FP on image 1 outranks the TP on image 0.
    const std::vector<TripletRecord> preds = {jitter(g, 0.5),
                                              rec(1, 0, {0, 0, 8, 8}, {20, 0, 28, 8}, 0.9)};
    const auto def = eval::evaluate(preds, gts, eval::Setting::default_setting);
    const auto ko = eval::evaluate(preds, gts, eval::Setting::known_object);
    CHECK(def.map_full == 0.5);
    CHECK(ko.map_full == 1.0);
}

TEST_CASE("known-object requires the image lists") {
    const TripletRecord g = rec(0, 0, {0, 0, 8, 8}, {20, 0, 28, 8}, 1.0);
    eval::GroundTruthSet gts;
    gts.triplets = {g};
    CHECK_THROWS_AS(eval::evaluate({}, gts, eval::Setting::known_object), ValidationError);
}

TEST_CASE("evaluate agrees exactly with the oracle on random instances") {
    for (int iter = 0; iter < 300; ++iter) {
        eval::GroundTruthSet gts;
        const int n_gt = 1 + static_cast<int>(unit() * 4);
        const int n_pred = static_cast<int>(unit() * 7);
        for (int i = 0; i < n_gt; ++i) gts.triplets.push_back(random_record(3, 4));
        std::vector<TripletRecord> preds;
        for (int i = 0; i < n_pred; ++i) {
            if (unit() < 0.5 && !gts.triplets.empty())
                preds.push_back(
                    jitter(gts.triplets[static_cast<std::size_t>(unit() * n_gt)], unit()));
            else
                preds.push_back(random_record(3, 4));
        }
        const auto got = eval::evaluate(preds, gts, eval::Setting::default_setting);
        const auto want = oracles::oracle_ap(preds, gts.triplets, {});
        REQUIRE(got.per_class_ap.size() == want.size());
        for (const auto& [c, ap] : want) {
            REQUIRE(got.per_class_ap.count(c) == 1);
            CHECK(got.per_class_ap.at(c) == ap);
        }
    }
}

TEST_CASE("appending a weakest-scored prediction keeps existing labels") {
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<TripletRecord> gts, preds;
        for (int i = 0; i < 3; ++i) gts.push_back(random_record(2, 2));
        for (int i = 0; i < 4; ++i) {
            TripletRecord p = unit() < 0.5 ? jitter(gts[i % 3], 0) : random_record(2, 2);
            p.triplet.score = 0.5 + unit() * 0.5;
            preds.push_back(p);
        }
        const auto before = eval::match_triplets(preds, gts, {});
        TripletRecord extra = random_record(2, 2);
        extra.triplet.score = 0.1;
        preds.push_back(extra);
        const auto after = eval::match_triplets(preds, gts, {});
        // The prefix of the score-sorted labels is unchanged.
        for (std::size_t i = 0; i < before.order.size(); ++i) {
            CHECK(after.order[i] == before.order[i]);
            CHECK(after.is_tp[i] == before.is_tp[i]);
        }
    }
}

TEST_CASE("mAP is invariant to image and record ordering") {
    for (int iter = 0; iter < 50; ++iter) {
        eval::GroundTruthSet gts;
        for (int i = 0; i < 4; ++i) gts.triplets.push_back(random_record(3, 3));
        std::vector<TripletRecord> preds;
        for (int i = 0; i < 5; ++i)
            preds.push_back(unit() < 0.5 ? jitter(gts.triplets[i % 4], unit())
                                         : random_record(3, 3));
        const auto base = eval::evaluate(preds, gts, eval::Setting::default_setting);
        std::shuffle(preds.begin(), preds.end(), rng());
        const auto shuffled = eval::evaluate(preds, gts, eval::Setting::default_setting);
        CHECK(base.map_full == shuffled.map_full);
    }
}
