#include "skewlab/interval_union.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "skewlab/errors.hpp"

namespace skewlab {

IntervalUnion IntervalUnion::normalize(std::vector<Interval> intervals,
                                       double merge_tolerance) {
    if (!(merge_tolerance >= 0.0)) {
        fail(errc::invalid_input, "merge_tolerance must be >= 0");
    }
    for (const Interval& iv : intervals) {
        if (!(iv.lo <= iv.hi)) {
            fail(errc::invalid_input, "malformed interval: lo > hi");
        }
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) {
                  return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
              });

    IntervalUnion out;
    out.tol_ = merge_tolerance;
    for (const Interval& iv : intervals) {
        if (!out.comps_.empty() && iv.lo - out.comps_.back().hi <= merge_tolerance) {
            out.comps_.back().hi = std::max(out.comps_.back().hi, iv.hi);
        } else {
            out.comps_.push_back(iv);
        }
    }
    return out;
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& u, const IntervalUnion& v) {
    std::vector<Interval> pieces;
    std::size_t i = 0, j = 0;
    while (i < u.comps_.size() && j < v.comps_.size()) {
        const Interval& a = u.comps_[i];
        const Interval& b = v.comps_[j];
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (lo <= hi) pieces.push_back({lo, hi});
        if (a.hi < b.hi) ++i; else ++j;
    }
    return normalize(std::move(pieces), std::min(u.tol_, v.tol_));
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& u, const IntervalUnion& v) {
    std::vector<Interval> pieces = u.comps_;
    pieces.insert(pieces.end(), v.comps_.begin(), v.comps_.end());
    return normalize(std::move(pieces), std::max(u.tol_, v.tol_));
}

IntervalUnion IntervalUnion::affine_image(double offset, double scale) const {
    if (scale == 0.0) {
        fail(errc::degenerate_map, "affine_image requires scale != 0");
    }
    std::vector<Interval> pieces;
    pieces.reserve(comps_.size());
    for (const Interval& c : comps_) {
        const double a = offset + scale * c.lo;
        const double b = offset + scale * c.hi;
        pieces.push_back(scale > 0 ? Interval{a, b} : Interval{b, a});
    }
    if (scale < 0) std::reverse(pieces.begin(), pieces.end());

    // Already sorted and pairwise disjoint; shrunken gaps may still need a
    // merge pass against the tolerance.
    IntervalUnion out;
    out.tol_ = tol_;
    for (const Interval& iv : pieces) {
        if (!out.comps_.empty() && iv.lo - out.comps_.back().hi <= tol_) {
            out.comps_.back().hi = std::max(out.comps_.back().hi, iv.hi);
        } else {
            out.comps_.push_back(iv);
        }
    }
    return out;
}

std::vector<Interval> IntervalUnion::gaps() const {
    if (comps_.empty()) {
        fail(errc::empty_union, "gaps: empty union has no hull");
    }
    std::vector<Interval> out;
    out.reserve(comps_.size() - 1);
    for (std::size_t i = 0; i + 1 < comps_.size(); ++i) {
        out.push_back({comps_[i].hi, comps_[i + 1].lo});
    }
    return out;
}

long long IntervalUnion::box_count(double eps) const {
    if (!(eps > 0.0)) {
        fail(errc::invalid_input, "box_count requires eps > 0");
    }
    long long count = 0;
    long long last = std::numeric_limits<long long>::min();
    for (const Interval& c : comps_) {
        long long k_lo = static_cast<long long>(std::floor(c.lo / eps));
        long long k_hi = static_cast<long long>(std::ceil(c.hi / eps)) - 1;
        if (k_hi < k_lo) continue; // point component on a grid line
        if (k_lo <= last) k_lo = last + 1;
        if (k_hi < k_lo) continue;
        count += k_hi - k_lo + 1;
        last = k_hi;
    }
    return count;
}

bool IntervalUnion::contains(double y) const {
    auto it = std::upper_bound(comps_.begin(), comps_.end(), y,
                               [](double v, const Interval& c) { return v < c.lo; });
    if (it == comps_.begin()) return false;
    --it;
    return y <= it->hi;
}

Interval IntervalUnion::hull() const {
    if (comps_.empty()) {
        fail(errc::empty_union, "hull: empty union");
    }
    return {comps_.front().lo, comps_.back().hi};
}

double IntervalUnion::total_length() const {
    double sum = 0.0;
    for (const Interval& c : comps_) sum += c.length();
    return sum;
}

double IntervalUnion::min_component_length() const {
    if (comps_.empty()) {
        fail(errc::empty_union, "min_component_length: empty union");
    }
    double m = std::numeric_limits<double>::infinity();
    for (const Interval& c : comps_) m = std::min(m, c.length());
    return m;
}

std::string IntervalUnion::to_json() const {
    std::string out = "[";
    char buf[64];
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (i) out += ",";
        std::snprintf(buf, sizeof buf, "[%.17g,%.17g]", comps_[i].lo, comps_[i].hi);
        out += buf;
    }
    out += "]";
    return out;
}

} // namespace skewlab
