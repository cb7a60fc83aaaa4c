// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hoipoint/codec.hpp"
#include "hoipoint/types.hpp"

namespace hoipoint::testkit {

// Deterministic synthetic scene: ground-truth triplets whose encoded
// points and vectors are exact by construction, perfect detections with
// score 1, and optional distractor detections that overlap no
// interaction box.
struct SceneBundle {
    int grid_height = 0;
    int grid_width = 0;
    std::uint64_t seed = 0;
    std::vector<InteractionTriplet> triplets;
    std::vector<ScoredDetection> humans;       // perfect, score 1
    std::vector<ScoredDetection> objects;      // perfect, score 1
    std::vector<ScoredDetection> distractor_humans;
    std::vector<ScoredDetection> distractor_objects;
    codec::ClassHeatmap heatmap;
    codec::VectorField vectors;
    codec::SupervisionMask mask;
    int num_actions = 0;
};

struct SynthParams {
    std::uint64_t seed = 0;
    int n_pairs = 1;       // human-object pairs, one triplet each
    int n_actions = 1;
    int distractors = 0;
    int grid_height = 64;
    int grid_width = 64;
    double sigma = 2.0;
    // When true, reject placements where any wrong (human, object) pair
    // would satisfy the full grouping conditions at d_tau = 1, so a
    // perfect round trip has no false pairs.
    bool exclusive_pairs = true;
};

// Throws ValidationError if the separation constraints cannot be packed
// after bounded retries.
SceneBundle synth_scene(const SynthParams& params);

}  // namespace hoipoint::testkit
