// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hoipoint/types.hpp"

namespace hoipoint::codec {

// C x H x W per-class interaction-point responses, class-major row-major.
struct ClassHeatmap {
    int num_classes = 0;
    int height = 0;
    int width = 0;
    std::vector<double> values;  // size C*H*W

    ClassHeatmap() = default;
    ClassHeatmap(int c, int h, int w)
        : num_classes(c), height(h), width(w),
          values(static_cast<std::size_t>(c) * h * w, 0.0) {}

    double& at(int c, int y, int x) {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
};

// 2 x H x W unsigned vector components, channel 0 = |v_x|, channel 1 = |v_y|.
struct VectorField {
    int height = 0;
    int width = 0;
    std::vector<double> values;  // size 2*H*W

    VectorField() = default;
    VectorField(int h, int w) : height(h), width(w), values(2ull * h * w, 0.0) {}

    double& vx(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
    double vx(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& vy(int y, int x) {
        return values[(static_cast<std::size_t>(height) + y) * width + x];
    }
    double vy(int y, int x) const {
        return values[(static_cast<std::size_t>(height) + y) * width + x];
    }

    geom::UnsignedVector at(int y, int x) const { return {vx(y, x), vy(y, x)}; }
};

// H x W mask of supervised vector-field cells.
struct SupervisionMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;

    SupervisionMask() = default;
    SupervisionMask(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w, 0) {}

    std::uint8_t& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct VectorTargets {
    VectorField field;
    SupervisionMask mask;
};

// Decoded heatmap peak with the vector read at its cell.
struct InteractionCandidate {
    int class_id = 0;
    int x = 0;  // grid cell
    int y = 0;
    double score = 0.0;
    geom::UnsignedVector vector;

    geom::Point2 point() const { return {static_cast<double>(x), static_cast<double>(y)}; }

    friend bool operator==(const InteractionCandidate&, const InteractionCandidate&) = default;
};

// The interaction point of a ground-truth triplet: midpoint of the human
// and object box centers, or the human center for no-object classes.
geom::Point2 interaction_point(const InteractionTriplet& t);

// Nearest integer cell of the interaction point.
struct Cell {
    int x = 0;
    int y = 0;
};
Cell rounded_point(const InteractionTriplet& t);

// Splat one Gaussian per triplet onto its class channel; overlaps combine
// by element-wise max, so the rounded peak cell is exactly 1.
// Throws ValidationError for a point outside the grid.
ClassHeatmap encode_points(const std::vector<InteractionTriplet>& triplets, int num_classes,
                           int height, int width, double sigma);

// Write (|h_x - p_x|, |h_y - p_y|) at each triplet's rounded interaction
// point. Two triplets landing on one cell is a hard error (the
// representation cannot express them).
VectorTargets encode_vectors(const std::vector<InteractionTriplet>& triplets, int height,
                             int width);

// out(x, y) = max of row y + max of column x.
std::vector<double> center_pool(const std::vector<double>& map, int height, int width);

// Cells that are >= all 8 in-grid neighbours within their class channel,
// with score > 0 and score >= the per-class floor; ordered by
// (score desc, class asc, y asc, x asc) and truncated to k.
std::vector<InteractionCandidate> decode_peaks(const ClassHeatmap& hm, int k,
                                               const std::vector<double>& thresholds,
                                               const VectorField& vf);

// Per-class floors from training-sample counts: t_low below the cutoff,
// t_high at or above it.
std::vector<double> dynamic_thresholds(const std::vector<std::int64_t>& train_counts,
                                       double t_low, double t_high, std::int64_t cutoff);

}  // namespace hoipoint::codec
