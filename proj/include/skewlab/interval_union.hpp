#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skewlab {

/// Closed interval [lo, hi]. Degenerate point intervals (lo == hi) are allowed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double y) const { return lo <= y && y <= hi; }
};

/// Finite disjoint union of closed intervals on the real line.
///
/// Components are kept sorted by left endpoint with consecutive components
/// separated by strictly more than merge_tolerance. Instances are immutable
/// after construction; every operation returns a fresh value, so unions can
/// be shared freely across threads.
class IntervalUnion {
public:
    IntervalUnion() = default;

    /// Canonicalize a raw interval list: sort, then merge every gap of width
    /// <= merge_tolerance. Rejects malformed intervals (lo > hi) and negative
    /// tolerances. Idempotent.
    static IntervalUnion normalize(std::vector<Interval> intervals,
                                   double merge_tolerance);

    /// Exact set intersection; the result keeps the smaller tolerance.
    static IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v);

    /// Set union; the result keeps the larger tolerance.
    static IntervalUnion unite(const IntervalUnion& u, const IntervalUnion& v);

    /// Image under y -> offset + scale * y (scale < 0 reverses orientation,
    /// scale == 0 is rejected as a degenerate map).
    IntervalUnion affine_image(double offset, double scale) const;

    /// Bounded open gaps between consecutive components, left to right.
    /// The returned Interval endpoints are the gap's open endpoints.
    /// Empty union has no hull and is rejected.
    std::vector<Interval> gaps() const;

    /// Number of half-open grid boxes [k*eps, (k+1)*eps) meeting the union.
    /// A component whose right endpoint sits exactly on a grid line does not
    /// reach into the box to its right.
    long long box_count(double eps) const;

    bool contains(double y) const;

    bool empty() const { return comps_.empty(); }
    std::size_t size() const { return comps_.size(); }
    const std::vector<Interval>& components() const { return comps_; }
    const Interval& component(std::size_t i) const { return comps_[i]; }
    double merge_tolerance() const { return tol_; }

    /// Smallest closed interval containing the union; rejects empty input.
    Interval hull() const;

    double total_length() const;
    double min_component_length() const;

    /// JSON array of [lo, hi] pairs, 17 significant digits.
    std::string to_json() const;

private:
    std::vector<Interval> comps_;
    double tol_ = 0.0;
};

} // namespace skewlab
