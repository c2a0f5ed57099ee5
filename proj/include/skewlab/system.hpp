#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewlab/interval_union.hpp"

namespace skewlab {

/// Real polynomial with coefficients in ascending degree order.
struct Polynomial {
    std::vector<double> coeffs;

    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
        return v;
    }

    Polynomial derivative() const;

    /// Approximate sup of |p| on [lo, hi]: dense grid maximum plus a slope
    /// correction for the sampling error.
    double sup_abs(double lo, double hi) const;
};

Polynomial operator-(const Polynomial& a, const Polynomial& b);

/// Finite symbolic address over {1, 2}. Symbol k means "the point lies in
/// the k-th base branch domain". Indexing past the end repeats the last
/// symbol, which is the extension convention used throughout.
class Itinerary {
public:
    Itinerary() = default;
    explicit Itinerary(std::vector<std::uint8_t> symbols);

    /// Parse from a string over {'1', '2'}, e.g. "1121".
    static Itinerary parse(std::string_view text);

    std::size_t size() const { return syms_.size(); }
    bool empty() const { return syms_.empty(); }
    std::uint8_t at(std::size_t k) const { return syms_[k]; }

    /// Symbol at position k with the repeat-last-symbol extension.
    std::uint8_t symbol_at(std::size_t k) const {
        return k < syms_.size() ? syms_[k] : syms_.back();
    }

    Itinerary extended_to(std::size_t n) const;
    Itinerary shifted() const;                    // drop the first symbol
    Itinerary prepended(std::uint8_t sym) const;  // preimage address

    const std::vector<std::uint8_t>& symbols() const { return syms_; }
    std::string str() const;

    bool operator==(const Itinerary& o) const { return syms_ == o.syms_; }

private:
    std::vector<std::uint8_t> syms_;
};

/// Both one-step preimage addresses of w: prepend symbol 1 and symbol 2.
std::pair<Itinerary, Itinerary> preimage_itineraries(const Itinerary& w);

/// Full parameter set of the two-branch skew product family.
///
/// The base map g is affine and strictly increasing on each of I1, I2,
/// mapping both onto [0, 1]. The fiber maps are affine in y with contraction
/// factors s[0..3] and offset functions psi[0..2]; the branch in force at a
/// base point is selected by the pair (current symbol, next symbol).
struct SystemParams {
    double alpha = 0.0;
    Interval I1;              // [b1, b2]
    Interval I2;              // [b3, b4]
    double beta = 0.0;        // certified expansion floor: beta < g' < beta^2
    std::array<double, 4> s{};       // fiber contraction factors
    std::array<Polynomial, 3> psi{}; // fiber offset functions on [0, 1]
    double delta = 0.0;       // strict bound: |d h/d y| < delta < 1
    double eps_alpha = 0.0;   // interval placement radius
    double theta_alpha = 0.0; // closeness budget for the model-distance check
    double merge_tolerance = 1e-13;
    bool generalized_placement = false;

    double lambda1() const { return 1.0 / I1.length(); }
    double lambda2() const { return 1.0 / I2.length(); }

    /// 1 or 2 when x lies in the corresponding branch domain, 0 otherwise.
    int symbol_of(double x) const;

    double g(double x) const;                     // forward base map
    double g_prime(int sym) const;                // branch derivative
    double g_inverse(int sym, double t) const;    // inverse branch, t in [0,1]

    double sup_dx() const;   // K: sup over branches of |d h/d x|
    double k_prime() const;  // K / (1 - delta/beta)
};

/// Exact-linear instance: psi1 = x, psi2 = 1-x, psi3 = 1, all s = 1/2,
/// branch domains of length alpha^2/4 placed just below 1/2 and 1-alpha.
SystemParams default_config(double alpha);

struct ValidationCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double eps_hat = 0.0;    // measured placement radius
    double theta_hat = 0.0;  // measured distance to the exact-linear model

    bool passed() const;
    const ValidationCheck* find(const std::string& name) const;
};

/// Evaluate every structural inequality the construction relies on and
/// report each with both sides. Failures are data, not exceptions.
ValidationReport validate(const SystemParams& p);

/// The point whose forward symbols match w, by composing inverse branches
/// right to left from the midpoint of the last symbol's domain. The
/// truncation error is at most beta^{-|w|}.
double base_point(const SystemParams& p, const Itinerary& w);

/// base_point on w extended far enough that the truncation error is below
/// double resolution.
double precise_base_point(const SystemParams& p, const Itinerary& w);

/// Fiber branch at a base point: h(y) = offset + slope * y.
struct FiberBranch {
    double offset = 0.0;
    double slope = 0.0;  // equals d h/d y; sign carries orientation
    double dx = 0.0;     // d h/d x at the base point
};

/// Branch selected by (symbol of x, symbol of g(x)).
FiberBranch fiber_branch(const SystemParams& p, int sym_from, int sym_to, double x);

/// h(x, y) with x addressed by w and the branch selected by (w0, w1).
double fiber_map(const SystemParams& p, const Itinerary& w, double y);

/// (d h/d x, d h/d y) of the selected branch at (base_point(w), y).
std::pair<double, double> fiber_derivatives(const SystemParams& p,
                                            const Itinerary& w, double y);

} // namespace skewlab
