#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skewlab/system.hpp"

namespace skewlab {

/// Default finite-depth certification level for backward lifts.
inline constexpr int kDefaultCertDepth = 12;

/// Finite backward orbit of a point (x, y): one preimage-branch choice per
/// step, with the lifted base/fiber coordinates recorded. Every lifted fiber
/// coordinate carries a membership certificate at cert_depth.
struct Prehistory {
    Itinerary anchor;                  // forward address of the base point
    double anchor_y = 0.0;
    std::vector<std::uint8_t> choices; // preimage branch per step
    std::vector<std::pair<double, double>> lifted; // (x_{-i}, y_{-i})
    int cert_depth = 0;

    int depth() const { return static_cast<int>(choices.size()); }
};

/// Lift (x, y) backwards along the given branch choices. Fails when a lift
/// leaves [0, 1] (escape) or leaves the depth-cert_depth fiber approximation
/// (membership): that symbolic prehistory does not stay in the invariant set
/// at the certified depth.
Prehistory backward_lift(const SystemParams& p, const Itinerary& w, double y,
                         std::span<const std::uint8_t> choices, int cert_depth);

/// Same, but reports failure as nullopt instead of throwing.
std::optional<Prehistory> try_backward_lift(const SystemParams& p,
                                            const Itinerary& w, double y,
                                            std::span<const std::uint8_t> choices,
                                            int cert_depth);

struct SlopeResult {
    double omega = 0.0;      // truncated series value
    double tail_bound = 0.0; // certified |truncation + rounding| bound
};

/// Slope of the unstable direction determined by the prehistory: the
/// geometric series over the backward orbit of d_x h / (g' products),
/// truncated at the prehistory depth with a certified tail bound.
SlopeResult unstable_slope(const SystemParams& p, const Prehistory& ph, double tol);

struct SeparationReport {
    int m = 0;                // first index where the choices disagree (1-based)
    double delta_omega = 0.0; // |omega difference|, computed termwise
    double separation_bound = 0.0; // 0.7 / beta^{m+1}
    double tail_bound = 0.0;
    int cert_depth = 0;
    bool pass = false;        // certified: delta_omega - tail > bound
};

/// Certified slope separation for two prehistories of the same point that
/// first disagree at step m. The difference series is accumulated termwise
/// (shared-prefix terms cancel exactly), so the verdict stays certifiable
/// far below the resolution of subtracting two slope totals.
SeparationReport slope_separation(const SystemParams& p, const Itinerary& w,
                                  double y,
                                  std::span<const std::uint8_t> choices1,
                                  std::span<const std::uint8_t> choices2,
                                  double tol, int cert_depth = kDefaultCertDepth);

struct ConeReport {
    int N = 0;
    double gamma = 0.0;
    double m_expand = 0.0;
    double m_coexpand = 0.0;
    double K = 0.0;      // sup |d h/d x|
    double Kprime = 0.0; // K / (1 - delta/beta)
    bool chain_ok = false; // |d_x h_N| <= K' |(g^{N-1})'| at every sample
    bool pass = false;     // m_expand > 1 and m_coexpand > 1
};

/// Expansion and co-expansion margins of the N-th iterate over the cone
/// field |w| <= gamma |v|, evaluated at the cone boundary slopes and the
/// core axis for each sampled orbit.
ConeReport cone_verification(const SystemParams& p, double gamma, int N,
                             std::span<const Prehistory> samples);

} // namespace skewlab
