// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#include "hoipoint/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hoipoint/errors.hpp"

namespace hoipoint::codec {

geom::Point2 interaction_point(const InteractionTriplet& t) {
    if (t.object) return geom::midpoint(t.human.center(), t.object->center());
    return t.human.center();
}

Cell rounded_point(const InteractionTriplet& t) {
    const geom::Point2 p = interaction_point(t);
    return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
}

ClassHeatmap encode_points(const std::vector<InteractionTriplet>& triplets, int num_classes,
                           int height, int width, double sigma) {
    if (num_classes <= 0 || height <= 0 || width <= 0 || sigma <= 0.0)
        throw ValidationError("encode_points: non-positive shape or sigma");
    ClassHeatmap hm(num_classes, height, width);
    // Truncating the splat at 4 sigma leaves exact zeros in the far tail;
    // decode drops zero-score cells, so this never fabricates peaks.
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        const InteractionTriplet& t = triplets[i];
        if (t.action_id < 0 || t.action_id >= num_classes)
            throw ValidationError("encode_points: triplet " + std::to_string(i) +
                                  " has action id " + std::to_string(t.action_id) +
                                  " outside [0, " + std::to_string(num_classes) + ")");
        const Cell c = rounded_point(t);
        if (c.x < 0 || c.x >= width || c.y < 0 || c.y >= height)
            throw ValidationError("encode_points: triplet " + std::to_string(i) +
                                  " interaction point (" + std::to_string(c.x) + ", " +
                                  std::to_string(c.y) + ") outside the grid");
        const double inv = 1.0 / (2.0 * sigma * sigma);
        const int y0 = std::max(0, c.y - radius), y1 = std::min(height - 1, c.y + radius);
        const int x0 = std::max(0, c.x - radius), x1 = std::min(width - 1, c.x + radius);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double d2 = static_cast<double>(x - c.x) * (x - c.x) +
                                  static_cast<double>(y - c.y) * (y - c.y);
                double& cell = hm.at(t.action_id, y, x);
                cell = std::max(cell, std::exp(-d2 * inv));
            }
        }
    }
    return hm;
}

VectorTargets encode_vectors(const std::vector<InteractionTriplet>& triplets, int height,
                             int width) {
    if (height <= 0 || width <= 0)
        throw ValidationError("encode_vectors: non-positive grid shape");
    VectorTargets out{VectorField(height, width), SupervisionMask(height, width)};
    std::vector<std::size_t> owner(static_cast<std::size_t>(height) * width, 0);
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        const InteractionTriplet& t = triplets[i];
        const geom::Point2 p = interaction_point(t);
        const Cell c = rounded_point(t);
        if (c.x < 0 || c.x >= width || c.y < 0 || c.y >= height)
            throw ValidationError("encode_vectors: triplet " + std::to_string(i) +
                                  " interaction point outside the grid");
        if (out.mask.at(c.y, c.x)) {
            const std::size_t j = owner[static_cast<std::size_t>(c.y) * width + c.x];
            throw ValidationError("encode_vectors: triplets " + std::to_string(j) + " and " +
                                  std::to_string(i) + " share interaction cell (" +
                                  std::to_string(c.x) + ", " + std::to_string(c.y) + ")");
        }
        const geom::Point2 h = t.human.center();
        out.field.vx(c.y, c.x) = std::abs(h.x - p.x);
        out.field.vy(c.y, c.x) = std::abs(h.y - p.y);
        out.mask.at(c.y, c.x) = 1;
        owner[static_cast<std::size_t>(c.y) * width + c.x] = i;
    }
    return out;
}

std::vector<double> center_pool(const std::vector<double>& map, int height, int width) {
    if (static_cast<std::size_t>(height) * width != map.size())
        throw ValidationError("center_pool: shape mismatch");
    const double lowest = -std::numeric_limits<double>::infinity();
    std::vector<double> row_max(height, lowest);
    std::vector<double> col_max(width, lowest);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double v = map[static_cast<std::size_t>(y) * width + x];
            row_max[y] = std::max(row_max[y], v);
            col_max[x] = std::max(col_max[x], v);
        }
    std::vector<double> out(map.size());
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out[static_cast<std::size_t>(y) * width + x] = row_max[y] + col_max[x];
    return out;
}

std::vector<InteractionCandidate> decode_peaks(const ClassHeatmap& hm, int k,
                                               const std::vector<double>& thresholds,
                                               const VectorField& vf) {
    if (static_cast<int>(thresholds.size()) != hm.num_classes)
        throw ValidationError("decode_peaks: need one threshold per class");
    if (vf.height != hm.height || vf.width != hm.width)
        throw ValidationError("decode_peaks: vector field shape mismatch");
    std::vector<InteractionCandidate> peaks;
    if (k <= 0) return peaks;
    for (int c = 0; c < hm.num_classes; ++c) {
        for (int y = 0; y < hm.height; ++y) {
            for (int x = 0; x < hm.width; ++x) {
                const double v = hm.at(c, y, x);
                if (v <= 0.0 || v < thresholds[c]) continue;
                bool is_peak = true;
                for (int dy = -1; dy <= 1 && is_peak; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int ny = y + dy, nx = x + dx;
                        if (ny < 0 || ny >= hm.height || nx < 0 || nx >= hm.width) continue;
                        if (hm.at(c, ny, nx) > v) {
                            is_peak = false;
                            break;
                        }
                    }
                }
                if (is_peak) peaks.push_back({c, x, y, v, vf.at(y, x)});
            }
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.class_id != b.class_id) return a.class_id < b.class_id;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    if (peaks.size() > static_cast<std::size_t>(k)) peaks.resize(k);
    return peaks;
}

std::vector<double> dynamic_thresholds(const std::vector<std::int64_t>& train_counts,
                                       double t_low, double t_high, std::int64_t cutoff) {
    std::vector<double> out(train_counts.size());
    for (std::size_t i = 0; i < train_counts.size(); ++i) {
        if (train_counts[i] < 0) throw ValidationError("dynamic_thresholds: negative count");
        out[i] = train_counts[i] < cutoff ? t_low : t_high;
    }
    return out;
}

}  // namespace hoipoint::codec
