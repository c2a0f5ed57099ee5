#pragma once

#include <utility>

#include "skewlab/interval_union.hpp"
#include "skewlab/system.hpp"

namespace skewlab {

/// Hard cap on the preimage recursion depth.
inline constexpr int kDepthCap = 26;

/// Finite-depth approximation of the invariant fiber over the point
/// addressed by `base`. Depth 0 is the full unit interval.
struct FiberApprox {
    Itinerary base;
    int depth = 0;
    IntervalUnion set;
    bool itinerary_extended = false; // depth exceeded |base| - 1
};

/// Depth-n fiber set: the union of the two fiber-branch images of the two
/// depth-(n-1) preimage fibers, starting from [0, 1] at depth 0.
/// Deterministic; depths above kDepthCap are rejected.
FiberApprox fiber_set(const SystemParams& p, const Itinerary& w, int depth);

/// The two branch images whose union is fiber_set(w, n): first the image
/// through the preimage in I1, then through the preimage in I2.
std::pair<IntervalUnion, IntervalUnion>
preimage_components(const SystemParams& p, const Itinerary& w, int depth);

/// Intersection of the two preimage components. Nonempty on fibers over I1
/// for parameters passing validate(); an empty result there signals a
/// parameter or depth problem and is reported as a diagnostic by callers.
IntervalUnion overlap_set(const SystemParams& p, const Itinerary& w, int depth);

/// Finite-depth membership certificate: y lies in the depth-n fiber set.
bool membership(const SystemParams& p, const Itinerary& w, double y, int depth);

} // namespace skewlab
