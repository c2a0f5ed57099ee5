#include "skewlab/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "skewlab/errors.hpp"

namespace skewlab {

CantorPresentation present(const IntervalUnion& u) {
    if (u.empty()) fail(errc::empty_union, "present: empty union");

    CantorPresentation out;
    out.hull = u.hull();
    if (u.size() < 2) return out; // no bounded gaps, infinite thickness

    const std::vector<Interval> gs = u.gaps();
    std::vector<std::size_t> order(gs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&gs](std::size_t a, std::size_t b) {
        const double la = gs[a].length(), lb = gs[b].length();
        return la > lb || (la == lb && gs[a].lo < gs[b].lo);
    });

    // Sweep in presentation order; the bridge at a boundary point runs to the
    // nearest already-placed gap (all of which are at least as long) or to
    // the hull edge.
    std::map<double, double> placed; // gap lo -> gap hi
    double thickness = kInfiniteThickness;
    for (std::size_t idx : order) {
        const Interval& g = gs[idx];
        double left_cut = out.hull.lo;
        double right_cut = out.hull.hi;
        auto it = placed.lower_bound(g.lo);
        if (it != placed.begin()) {
            left_cut = std::max(left_cut, std::prev(it)->second);
        }
        if (it != placed.end()) {
            right_cut = std::min(right_cut, it->first);
        }
        const double len = g.length();
        GapRatios gr;
        gr.gap = g;
        gr.left_ratio = (g.lo - left_cut) / len;
        gr.right_ratio = (right_cut - g.hi) / len;
        out.gaps.push_back(gr);
        thickness = std::min({thickness, gr.left_ratio, gr.right_ratio});
        placed.emplace(g.lo, g.hi);
    }
    out.thickness = thickness;
    return out;
}

double min_adjacent_ratio(const IntervalUnion& u) {
    if (u.empty()) fail(errc::empty_union, "min_adjacent_ratio: empty union");
    if (u.size() < 2) return kInfiniteThickness;
    double m = kInfiniteThickness;
    const auto& comps = u.components();
    for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
        const double gap = comps[i + 1].lo - comps[i].hi;
        m = std::min(m, comps[i].length() / gap);
        m = std::min(m, comps[i + 1].length() / gap);
    }
    return m;
}

namespace {

// True when `a` fits inside a single gap or unbounded complement component
// of `b`. Gaps are open, so containment is strict.
bool swallowed(const IntervalUnion& a, const IntervalUnion& b) {
    const Interval ha = a.hull();
    const Interval hb = b.hull();
    if (ha.hi < hb.lo || ha.lo > hb.hi) return true;
    const auto& comps = b.components();
    for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
        if (comps[i].hi < ha.lo && ha.hi < comps[i + 1].lo) return true;
    }
    return false;
}

} // namespace

bool interleaved(const IntervalUnion& u, const IntervalUnion& v) {
    if (u.empty() || v.empty()) {
        fail(errc::empty_union, "interleaved: empty union");
    }
    return !swallowed(u, v) && !swallowed(v, u);
}

bool gap_lemma(double tau1, double tau2) {
    if (!(tau1 > 0.0) || !(tau2 > 0.0)) {
        fail(errc::invalid_input, "gap_lemma requires positive thicknesses");
    }
    return tau1 * tau2 > 1.0;
}

bool hky_region(double tau1, double tau2) {
    if (!(tau1 > 0.0) || !(tau2 > 0.0)) {
        fail(errc::invalid_input, "hky_region requires positive thicknesses");
    }
    auto first = [](double t1, double t2) {
        return t1 > (t2 * t2 + 3.0 * t2 + 1.0) / (t2 * t2);
    };
    auto second = [](double t1, double t2) {
        return t1 > (1.0 + 2.0 * t2) * (1.0 + 2.0 * t2) / (t2 * t2 * t2);
    };
    return (first(tau1, tau2) || first(tau2, tau1)) &&
           (second(tau1, tau2) || second(tau2, tau1));
}

double intersection_thickness_bound(double tau1, double tau2) {
    if (!(tau1 > 0.0) || !(tau2 > 0.0)) {
        fail(errc::invalid_input, "intersection_thickness_bound requires positive inputs");
    }
    return std::sqrt(std::min(tau1, tau2));
}

double hd_lower_bound(double tau) {
    if (!(tau > 0.0)) {
        fail(errc::invalid_input, "hd_lower_bound requires tau > 0");
    }
    return std::log(2.0) / std::log(2.0 + 1.0 / tau);
}

} // namespace skewlab
