#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skewlab/interval_union.hpp"
#include "skewlab/system.hpp"

namespace skewlab {

using WeightMatrix = std::array<std::array<double, 2>, 2>;

/// Potential on the full 2-shift. Either constant on 2-cylinders (a weight
/// per symbol pair) or evaluated per word: the evaluator returns the
/// (inf, sup) of the Birkhoff sum over the length-n cylinder.
struct PotentialSpec {
    enum class Kind { two_cylinder_constant, word_evaluated };

    Kind kind = Kind::two_cylinder_constant;
    WeightMatrix weights{};
    std::function<std::pair<double, double>(std::span<const std::uint8_t>)> evaluator;
};

/// Topological pressure of a 2-cylinder-constant potential: log of the
/// spectral radius of the matrix exp(weights), exact for 2x2.
double pressure_matrix(const WeightMatrix& weights);

/// Finite-n pressure bracket from cylinder sums:
/// (1/n) log sum exp(inf) <= P <= (1/n) log sum exp(sup).
std::pair<double, double> pressure_cylinder(const PotentialSpec& pot, int n);

/// Unique zero of a strictly decreasing pressure function on [t_lo, t_hi],
/// by bisection. Rejects missing sign changes and non-monotone samples.
double bowen_zero(const std::function<double(double)>& pressure_of_t,
                  double t_lo, double t_hi, double tol = 1e-9);

/// Root interval [zero of lower, zero of upper] for a bracketed pressure.
std::pair<double, double> bowen_zero_bracket(
    const std::function<double(double)>& lower,
    const std::function<double(double)>& upper,
    double t_lo, double t_hi, double tol = 1e-12);

/// Weights of the base-expansion potential -t log g' (the slope-correction
/// factor of the full unstable derivative is a coboundary, so the pressure
/// and its zero agree with the full potential's).
WeightMatrix unstable_weights(const SystemParams& p, double t);

/// Weights of t log|fiber contraction| - log eta.
WeightMatrix stable_weights(const SystemParams& p, double t, double log_eta);

/// Word-evaluated unstable potential -t log|unstable derivative| with the
/// certified telescoping bracket for the prehistory-dependent slope factor.
PotentialSpec unstable_word_potential(const SystemParams& p, double t);

struct BoxDimension {
    double slope = 0.0;
    double r2 = 0.0;
    int scales = 0;
};

/// Least-squares slope of log box_count against log(1/eps) over the dyadic
/// scales inside [eps_lo, eps_hi].
BoxDimension box_dimension(const IntervalUnion& u, double eps_lo, double eps_hi);

struct CensusRow {
    double y = 0.0;
    int d = 0;
    bool in_overlap = false;
};

struct CensusReport {
    Itinerary base;
    int depth = 0;
    std::uint64_t seed = 0;
    std::vector<CensusRow> rows;
    int count_d0 = 0; // diagnostic; expected zero
    int count_d1 = 0;
    int count_d2 = 0;
    int d_max = 0;
};

/// Stratified, seeded sample of the depth-n fiber; each sampled y is counted
/// by how many preimage branches lift it into the depth-(n-1) fiber sets.
CensusReport preimage_census(const SystemParams& p, const Itinerary& w, int depth,
                             int sample_count, std::uint64_t seed);

/// Preimage count of a single fiber point at the given depth.
int census_d(const SystemParams& p, const Itinerary& w, double y, int depth);

struct DimensionReport {
    double t_u = 0.0;              // unstable Bowen zero
    double t_u_beta_bound = 0.0;  // log 2 / log(beta/2)
    double t_u_bracket_lo = 0.0;   // cylinder-method root interval
    double t_u_bracket_hi = 0.0;
    double t_s_lower = 0.0;        // zero with the structural bound eta = 2
    double t_s_lower_dmax = 0.0;   // same with eta = max sampled preimage count
    double t_s_eta1 = 0.0;         // unconstrained stable zero (eta = 1)
    double t_s_box = 0.0;          // box-dimension estimate of the fiber
    double box_r2 = 0.0;
    double pt_bound = 0.0;         // Palis-Takens bound from the measured thickness
    double tau_fiber = 0.0;
    double h_top = 0.0;
    int census_d_max = 0;
    std::string stable_upper_note;  // the inverse-pressure upper bound is not computed
    bool invariants_ok = false;
};

/// Aggregate dimension estimates for the fiber over w: unstable zero and
/// bound, stable-side lower bounds, box-dimension estimate, and the
/// thickness-based bound, with the expected orderings checked.
DimensionReport dimension_report(const SystemParams& p, const Itinerary& w,
                                 std::span<const int> depths, std::uint64_t seed);

} // namespace skewlab
