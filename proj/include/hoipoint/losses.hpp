// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "hoipoint/codec.hpp"

namespace hoipoint::losses {

struct LossReport {
    double l_point = 0.0;
    double l_vector = 0.0;
    double l_total = 0.0;
    std::int64_t n_points = 0;  // positive-cell normalizer, floored at 1
};

struct VectorTarget {
    codec::Cell cell;
    geom::UnsignedVector value;
};

inline constexpr double kClampEps = 1e-4;

// Penalty-reduced focal loss over the heatmap. `pred` is clamped to
// [kClampEps, 1-kClampEps] before the logs; the normalizer is the number
// of target cells exactly equal to 1, floored at 1. Summation is
// class-major row-major for reproducibility. If `grad` is non-null it
// receives d loss / d pred (same layout, w.r.t. the clamped values).
double focal_loss(const codec::ClassHeatmap& pred, const codec::ClassHeatmap& target,
                  double alpha = 2.0, double beta = 4.0, std::vector<double>* grad = nullptr);
std::int64_t focal_positives(const codec::ClassHeatmap& target);

// Mean over the supervised points of the summed per-component absolute
// differences. Empty target list gives 0. `grad` (2*H*W layout) holds the
// subgradient, sign(diff)/N at supervised cells and 0 elsewhere.
double vector_l1_loss(const codec::VectorField& pred, const std::vector<VectorTarget>& targets,
                      std::vector<double>* grad = nullptr);

inline double total_loss(double l_point, double l_vector, double lambda_v = 0.1) {
    return l_point + lambda_v * l_vector;
}

LossReport make_report(const codec::ClassHeatmap& pred_points,
                       const codec::ClassHeatmap& target_points,
                       const codec::VectorField& pred_vectors,
                       const std::vector<VectorTarget>& vector_targets, double lambda_v = 0.1);

}  // namespace hoipoint::losses
