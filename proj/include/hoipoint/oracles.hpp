// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force re-implementations of grouping and average precision,
// written against the plain data types only. They deliberately share no
// geometry or matching code with the modules they check (enforced by a
// source lint in the test suite); everything here is scalar arithmetic.

#include <cstdint>
#include <map>
#include <vector>

#include "hoipoint/codec.hpp"
#include "hoipoint/grouping.hpp"
#include "hoipoint/types.hpp"

namespace hoipoint::oracles {

std::vector<InteractionTriplet> oracle_group(
    const std::vector<ScoredDetection>& humans, const std::vector<ScoredDetection>& objects,
    const std::vector<codec::InteractionCandidate>& candidates,
    const grouping::GroupingConfig& cfg);

// Per-class AP via exhaustive greedy matching and pointwise PR
// computation. Classes without ground truth are omitted.
std::map<int, double> oracle_ap(const std::vector<TripletRecord>& preds,
                                const std::vector<TripletRecord>& gts,
                                const std::vector<int>& no_object_classes,
                                double iou_min = 0.5);

}  // namespace hoipoint::oracles
