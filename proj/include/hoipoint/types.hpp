// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "hoipoint/geometry.hpp"

namespace hoipoint {

// One human or object bounding box from an upstream detector, in grid units.
struct ScoredDetection {
    geom::BBox bbox;
    int category = 0;
    double score = 1.0;

    geom::Point2 center() const { return bbox.center(); }

    friend bool operator==(const ScoredDetection&, const ScoredDetection&) = default;
};

// One <human, action, object> instance, ground truth or prediction.
// `object` is absent for no-object action classes.
struct InteractionTriplet {
    ScoredDetection human;
    std::optional<ScoredDetection> object;
    int action_id = 0;
    double score = 1.0;
    geom::Point2 point;         // interaction point, grid units
    geom::UnsignedVector vector;

    friend bool operator==(const InteractionTriplet&, const InteractionTriplet&) = default;
};

// Triplet tagged with its image, as stored in the triplet/GT files.
struct TripletRecord {
    std::int64_t image_id = 0;
    InteractionTriplet triplet;

    friend bool operator==(const TripletRecord&, const TripletRecord&) = default;
};

}  // namespace hoipoint
