// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include "hoipoint/losses.hpp"

#include <algorithm>
#include <cmath>

#include "hoipoint/errors.hpp"

namespace hoipoint::losses {

std::int64_t focal_positives(const codec::ClassHeatmap& target) {
    std::int64_t n = 0;
    for (double v : target.values)
        if (v == 1.0) ++n;
    return n;
}

double focal_loss(const codec::ClassHeatmap& pred, const codec::ClassHeatmap& target,
                  double alpha, double beta, std::vector<double>* grad) {
    if (pred.num_classes != target.num_classes || pred.height != target.height ||
        pred.width != target.width)
        throw ValidationError("focal_loss: prediction/target shape mismatch");
    if (grad) grad->assign(pred.values.size(), 0.0);

    const std::int64_t n_pos = std::max<std::int64_t>(focal_positives(target), 1);
    const double inv_n = 1.0 / static_cast<double>(n_pos);

    // Fixed class-major row-major accumulation; the value must not depend
    // on thread count, so the sum stays serial.
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const double p = std::clamp(pred.values[i], kClampEps, 1.0 - kClampEps);
        const double t = target.values[i];
        if (t == 1.0) {
            const double pen = std::pow(1.0 - p, alpha);
            sum += pen * std::log(p);
            if (grad)
                (*grad)[i] = -inv_n * (-alpha * std::pow(1.0 - p, alpha - 1.0) * std::log(p) +
                                       pen / p);
        } else {
            const double w = std::pow(1.0 - t, beta);
            const double pa = std::pow(p, alpha);
            sum += w * pa * std::log(1.0 - p);
            if (grad)
                (*grad)[i] = -inv_n * w *
                             (alpha * std::pow(p, alpha - 1.0) * std::log(1.0 - p) -
                              pa / (1.0 - p));
        }
    }
    return -sum * inv_n;
}

double vector_l1_loss(const codec::VectorField& pred, const std::vector<VectorTarget>& targets,
                      std::vector<double>* grad) {
    if (grad) grad->assign(pred.values.size(), 0.0);
    if (targets.empty()) return 0.0;
    const double inv_n = 1.0 / static_cast<double>(targets.size());
    double sum = 0.0;
    for (const VectorTarget& t : targets) {
        if (t.cell.x < 0 || t.cell.x >= pred.width || t.cell.y < 0 || t.cell.y >= pred.height)
            throw ValidationError("vector_l1_loss: supervised point outside the grid");
        const double dx = pred.vx(t.cell.y, t.cell.x) - t.value.vx;
        const double dy = pred.vy(t.cell.y, t.cell.x) - t.value.vy;
        sum += std::abs(dx) + std::abs(dy);
        if (grad) {
            const std::size_t ix = static_cast<std::size_t>(t.cell.y) * pred.width + t.cell.x;
            const std::size_t iy = ix + static_cast<std::size_t>(pred.height) * pred.width;
            (*grad)[ix] += (dx > 0 ? 1.0 : dx < 0 ? -1.0 : 0.0) * inv_n;
            (*grad)[iy] += (dy > 0 ? 1.0 : dy < 0 ? -1.0 : 0.0) * inv_n;
        }
    }
    return sum * inv_n;
}

LossReport make_report(const codec::ClassHeatmap& pred_points,
                       const codec::ClassHeatmap& target_points,
                       const codec::VectorField& pred_vectors,
                       const std::vector<VectorTarget>& vector_targets, double lambda_v) {
    LossReport r;
    r.l_point = focal_loss(pred_points, target_points);
    r.l_vector = vector_l1_loss(pred_vectors, vector_targets);
    r.l_total = total_loss(r.l_point, r.l_vector, lambda_v);
    r.n_points = std::max<std::int64_t>(focal_positives(target_points), 1);
    return r;
}

}  // namespace hoipoint::losses
