#pragma once

#include <limits>
#include <vector>

#include "skewlab/interval_union.hpp"

namespace skewlab {

/// Thickness of a union with fewer than two components (no bounded gaps).
inline constexpr double kInfiniteThickness =
    std::numeric_limits<double>::infinity();

/// One gap of a decreasing-length presentation together with the
/// bridge-to-gap ratios at its two boundary points.
struct GapRatios {
    Interval gap;
    double left_ratio = 0.0;
    double right_ratio = 0.0;
};

/// Decreasing-gap presentation of a finite interval union viewed as a
/// Cantor-set stage: gaps ordered by decreasing length (ties left to right),
/// each boundary point's bridge taken against all earlier gaps, and the
/// thickness as the minimum ratio.
struct CantorPresentation {
    Interval hull;
    std::vector<GapRatios> gaps;
    double thickness = kInfiniteThickness;
};

CantorPresentation present(const IntervalUnion& u);

/// Raw floor over components of length(component) / length(adjacent gap).
/// +infinity for unions with fewer than two components.
double min_adjacent_ratio(const IntervalUnion& u);

/// Neither union fits inside a single gap or unbounded complement component
/// of the other.
bool interleaved(const IntervalUnion& u, const IntervalUnion& v);

/// Newhouse criterion: the thickness product exceeds one.
bool gap_lemma(double tau1, double tau2);

/// Hunt-Kan-Yorke region: thickness pairs for which the intersection of two
/// interleaved Cantor sets contains a Cantor set.
bool hky_region(double tau1, double tau2);

/// Lower bound for the thickness of the intersection: sqrt(min(tau1, tau2)).
double intersection_thickness_bound(double tau1, double tau2);

/// Palis-Takens bound: HD >= log 2 / log(2 + 1/tau). Strictly increasing in
/// tau and below 1 for all finite tau.
double hd_lower_bound(double tau);

} // namespace skewlab
