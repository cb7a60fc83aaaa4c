// Copyright 2026 The hoipoint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace hoipoint::geom {

// All geometry is in heatmap-grid units. Image-pixel coordinates are
// divided by the stride exactly once, at ingestion.

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct UnsignedVector {
    double vx = 0.0;  // |v_x|, >= 0
    double vy = 0.0;  // |v_y|, >= 0

    friend bool operator==(const UnsignedVector&, const UnsignedVector&) = default;
};

struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    Point2 center() const { return {(x_min + x_max) * 0.5, (y_min + y_max) * 0.5}; }

    bool valid() const {
        return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
               std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
    }

    bool contains(const Point2& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

// Axis-aligned rectangle as four canonically ordered corners
// (tl = min-x/min-y, br = max-x/max-y; y grows downward).
struct CornerSet {
    Point2 tl, tr, bl, br;

    BBox bbox() const { return {tl.x, tl.y, br.x, br.y}; }

    static CornerSet from_bbox(const BBox& b) {
        return {{b.x_min, b.y_min}, {b.x_max, b.y_min}, {b.x_min, b.y_max}, {b.x_max, b.y_max}};
    }

    friend bool operator==(const CornerSet&, const CornerSet&) = default;
};

inline Point2 midpoint(const Point2& h, const Point2& o) {
    return {(h.x + o.x) * 0.5, (h.y + o.y) * 0.5};
}

// Box with corners (p.x +- v.vx, p.y +- v.vy).
inline CornerSet interaction_box(const Point2& p, const UnsignedVector& v) {
    return CornerSet::from_bbox({p.x - v.vx, p.y - v.vy, p.x + v.vx, p.y + v.vy});
}

// Rectangle spanned by the two detected centers; order-invariant.
inline CornerSet reference_box(const Point2& h_center, const Point2& o_center) {
    return CornerSet::from_bbox({std::min(h_center.x, o_center.x),
                                 std::min(h_center.y, o_center.y),
                                 std::max(h_center.x, o_center.x),
                                 std::max(h_center.y, o_center.y)});
}

// Intersection-over-union. Identical degenerate (zero-area) boxes give 1,
// any other zero-union pair gives 0.
inline double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
    const double uni = a.area() + b.area() - inter;
    if (uni > 0.0) return inter / uni;
    return a == b ? 1.0 : 0.0;
}

// Positive-overlap test used by the grouping conditions. Along each axis
// the closed intervals must intersect; where both boxes have positive
// extent the overlap must itself be positive, so edge-touching boxes of
// full measure do not count. A box degenerate along an axis overlaps as
// long as it lies within the other interval.
inline bool overlaps_positively(const BBox& a, const BBox& b) {
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    const bool ok_x = iw > 0.0 || (iw == 0.0 && (a.width() == 0.0 || b.width() == 0.0));
    const bool ok_y = ih > 0.0 || (ih == 0.0 && (a.height() == 0.0 || b.height() == 0.0));
    return ok_x && ok_y;
}

inline double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Euclidean distances between corresponding corners: (d_tl, d_tr, d_bl, d_br).
inline std::array<double, 4> corner_distances(const CornerSet& a, const CornerSet& b) {
    return {distance(a.tl, b.tl), distance(a.tr, b.tr), distance(a.bl, b.bl),
            distance(a.br, b.br)};
}

}  // namespace hoipoint::geom
