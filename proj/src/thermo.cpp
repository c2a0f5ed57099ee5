#include "skewlab/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "skewlab/cantor.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/fibers.hpp"

namespace skewlab {

namespace {

constexpr int kCylinderCap = 22;

struct LogSum {
    double m = -std::numeric_limits<double>::infinity();
    double s = 0.0;

    void add(double v) {
        if (v <= m) {
            s += std::exp(v - m);
        } else {
            s = s * std::exp(m - v) + 1.0;
            m = v;
        }
    }
    double value() const { return m + std::log(s); }
};

// Uniform in [0, 1) from the top 53 bits; avoids distribution objects so the
// stream is identical across standard libraries.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int stable_index(int i, int j) {
    if (i == 1 && j == 1) return 0;
    if (i == 2 && j == 1) return 1;
    if (i == 1 && j == 2) return 2;
    return 3;
}

} // namespace

double pressure_matrix(const WeightMatrix& w) {
    const double a = std::exp(w[0][0]);
    const double b = std::exp(w[0][1]);
    const double c = std::exp(w[1][0]);
    const double d = std::exp(w[1][1]);
    const double tr = a + d;
    const double disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    return std::log(0.5 * (tr + disc));
}

std::pair<double, double> pressure_cylinder(const PotentialSpec& pot, int n) {
    if (n < 1) fail(errc::invalid_input, "pressure_cylinder: n must be >= 1");
    if (n > kCylinderCap) fail(errc::depth_cap, "pressure_cylinder: n above the resource cap");

    LogSum lo_sum, hi_sum;
    std::vector<std::uint8_t> word(static_cast<std::size_t>(n), 1);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t code = 0; code < total; ++code) {
        for (int i = 0; i < n; ++i) {
            word[static_cast<std::size_t>(i)] = ((code >> i) & 1u) ? 2 : 1;
        }
        double lo, hi;
        if (pot.kind == PotentialSpec::Kind::two_cylinder_constant) {
            double base = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                base += pot.weights[word[i] - 1][word[i + 1] - 1];
            }
            const double last0 = pot.weights[word[n - 1] - 1][0];
            const double last1 = pot.weights[word[n - 1] - 1][1];
            lo = base + std::min(last0, last1);
            hi = base + std::max(last0, last1);
        } else {
            std::tie(lo, hi) = pot.evaluator(word);
        }
        lo_sum.add(lo);
        hi_sum.add(hi);
    }
    return {lo_sum.value() / n, hi_sum.value() / n};
}

double bowen_zero(const std::function<double(double)>& pressure_of_t,
                  double t_lo, double t_hi, double tol) {
    if (!(t_lo < t_hi)) fail(errc::invalid_input, "bowen_zero: empty range");
    const double p_lo = pressure_of_t(t_lo);
    const double p_hi = pressure_of_t(t_hi);
    if (p_lo < -1e-12 || p_hi > 1e-12) {
        fail(errc::root_bracket, "bowen_zero: no sign change over the range");
    }
    double prev = p_lo;
    for (int i = 1; i <= 8; ++i) {
        const double v = pressure_of_t(t_lo + (t_hi - t_lo) * i / 8.0);
        if (v > prev + 1e-12) {
            fail(errc::non_monotone, "bowen_zero: pressure not decreasing in t");
        }
        prev = v;
    }
    double lo = t_lo, hi = t_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (pressure_of_t(mid) > 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> bowen_zero_bracket(
    const std::function<double(double)>& lower,
    const std::function<double(double)>& upper,
    double t_lo, double t_hi, double tol) {
    return {bowen_zero(lower, t_lo, t_hi, tol), bowen_zero(upper, t_lo, t_hi, tol)};
}

WeightMatrix unstable_weights(const SystemParams& p, double t) {
    WeightMatrix w;
    w[0][0] = w[0][1] = -t * std::log(p.lambda1());
    w[1][0] = w[1][1] = -t * std::log(p.lambda2());
    return w;
}

WeightMatrix stable_weights(const SystemParams& p, double t, double log_eta) {
    WeightMatrix w;
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            w[i - 1][j - 1] = t * std::log(p.s[stable_index(i, j)]) - log_eta;
        }
    }
    return w;
}

PotentialSpec unstable_word_potential(const SystemParams& p, double t) {
    // The full derivative along the unstable direction is g' times
    // sqrt((1 + omega(next)^2) / (1 + omega^2)); over a Birkhoff sum the
    // slope factor telescopes, leaving one boundary term bounded through the
    // global slope bound.
    const double omega_max = p.k_prime() / (p.beta - p.delta);
    const double half_span = 0.5 * std::log1p(omega_max * omega_max);
    const double log_l1 = std::log(p.lambda1());
    const double log_l2 = std::log(p.lambda2());
    PotentialSpec pot;
    pot.kind = PotentialSpec::Kind::word_evaluated;
    pot.evaluator = [t, half_span, log_l1, log_l2](std::span<const std::uint8_t> word)
        -> std::pair<double, double> {
        double base = 0.0;
        for (std::uint8_t sym : word) base -= t * (sym == 1 ? log_l1 : log_l2);
        return {base - t * half_span, base + t * half_span};
    };
    return pot;
}

BoxDimension box_dimension(const IntervalUnion& u, double eps_lo, double eps_hi) {
    if (u.empty()) fail(errc::empty_union, "box_dimension: empty union");
    if (!(eps_lo > 0.0) || !(eps_lo < eps_hi)) {
        fail(errc::scale_range, "box_dimension: bad eps range");
    }
    const double hull_len = u.hull().length();
    if (eps_hi > hull_len / 4.0 * (1.0 + 1e-12)) {
        fail(errc::scale_range, "box_dimension: eps_hi above hull/4");
    }
    // Below the smallest component the counts saturate; reject scale windows
    // reaching into that regime when a meaningful window exists at all.
    const double min_len = u.min_component_length();
    if (min_len <= hull_len / 4.0 && eps_lo < min_len * (1.0 - 1e-12)) {
        fail(errc::scale_range, "box_dimension: eps_lo below the smallest component");
    }

    const int k_lo = static_cast<int>(std::ceil(std::log2(1.0 / eps_hi) - 1e-9));
    const int k_hi = static_cast<int>(std::floor(std::log2(1.0 / eps_lo) + 1e-9));
    const int n = k_hi - k_lo + 1;
    if (n < 5) fail(errc::scale_range, "box_dimension: fewer than 5 dyadic scales");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double x = k * std::log(2.0); // log(1/eps)
        const double y = std::log(static_cast<double>(u.box_count(std::ldexp(1.0, -k))));
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cov = sxy - sx * sy / n;
    BoxDimension out;
    out.scales = n;
    out.slope = cov / vx;
    out.r2 = (vy > 0.0) ? (cov * cov) / (vx * vy) : 1.0;
    return out;
}

CensusReport preimage_census(const SystemParams& p, const Itinerary& w, int depth,
                             int sample_count, std::uint64_t seed) {
    if (sample_count <= 0) fail(errc::invalid_input, "preimage_census: no samples");
    const FiberApprox fib = fiber_set(p, w, depth);
    if (fib.set.empty()) fail(errc::invalid_input, "preimage_census: degenerate fiber");

    const auto [w1, w2] = preimage_itineraries(w);
    const IntervalUnion f1 = fiber_set(p, w1, depth - 1).set;
    const IntervalUnion f2 = fiber_set(p, w2, depth - 1).set;

    const double x = precise_base_point(p, w);
    const double x1 = p.g_inverse(1, x);
    const double x2 = p.g_inverse(2, x);
    const FiberBranch b1 = fiber_branch(p, 1, w.at(0), x1);
    const FiberBranch b2 = fiber_branch(p, 2, w.at(0), x2);

    IntervalUnion overlap;
    if (w.at(0) == 1) overlap = overlap_set(p, w, depth);

    // Stratified allocation proportional to component length, by largest
    // remainder, then uniform draws inside each component.
    const auto& comps = fib.set.components();
    const double total_len = fib.set.total_length();
    std::vector<int> quota(comps.size(), 0);
    std::vector<std::pair<double, std::size_t>> rema;
    int assigned = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const double share = sample_count * comps[i].length() / total_len;
        quota[i] = static_cast<int>(std::floor(share));
        assigned += quota[i];
        rema.emplace_back(share - quota[i], i);
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    for (int k = 0; assigned < sample_count; ++k, ++assigned) {
        quota[rema[static_cast<std::size_t>(k) % rema.size()].second]++;
    }

    CensusReport rep;
    rep.base = w;
    rep.depth = depth;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    auto count_lifts = [&](double y) {
        int d = 0;
        const double y1 = (y - b1.offset) / b1.slope;
        if (y1 >= 0.0 && y1 <= 1.0 && f1.contains(y1)) ++d;
        const double y2 = (y - b2.offset) / b2.slope;
        if (y2 >= 0.0 && y2 <= 1.0 && f2.contains(y2)) ++d;
        return d;
    };
    for (std::size_t i = 0; i < comps.size(); ++i) {
        for (int k = 0; k < quota[i]; ++k) {
            CensusRow row;
            row.y = comps[i].lo + next_unit(rng) * comps[i].length();
            row.d = count_lifts(row.y);
            row.in_overlap = !overlap.empty() && overlap.contains(row.y);
            if (row.d == 0) rep.count_d0++;
            else if (row.d == 1) rep.count_d1++;
            else rep.count_d2++;
            rep.d_max = std::max(rep.d_max, row.d);
            rep.rows.push_back(row);
        }
    }
    return rep;
}

int census_d(const SystemParams& p, const Itinerary& w, double y, int depth) {
    const auto [w1, w2] = preimage_itineraries(w);
    const double x = precise_base_point(p, w);
    const FiberBranch b1 = fiber_branch(p, 1, w.at(0), p.g_inverse(1, x));
    const FiberBranch b2 = fiber_branch(p, 2, w.at(0), p.g_inverse(2, x));
    int d = 0;
    const double y1 = (y - b1.offset) / b1.slope;
    if (y1 >= 0.0 && y1 <= 1.0 && membership(p, w1, y1, depth - 1)) ++d;
    const double y2 = (y - b2.offset) / b2.slope;
    if (y2 >= 0.0 && y2 <= 1.0 && membership(p, w2, y2, depth - 1)) ++d;
    return d;
}

DimensionReport dimension_report(const SystemParams& p, const Itinerary& w,
                                 std::span<const int> depths, std::uint64_t seed) {
    if (depths.empty()) fail(errc::invalid_input, "dimension_report: no depths");
    const int deepest = *std::max_element(depths.begin(), depths.end());

    DimensionReport rep;
    rep.h_top = pressure_matrix(WeightMatrix{{{0.0, 0.0}, {0.0, 0.0}}});
    rep.t_u_beta_bound = std::log(2.0) / std::log(p.beta / 2.0);
    rep.t_u = bowen_zero(
        [&p](double t) { return pressure_matrix(unstable_weights(p, t)); }, 0.0, 1.0);
    const int n_cyl = 12;
    auto cyl_lower = [&p, n_cyl](double t) {
        return pressure_cylinder(unstable_word_potential(p, t), n_cyl).first;
    };
    auto cyl_upper = [&p, n_cyl](double t) {
        return pressure_cylinder(unstable_word_potential(p, t), n_cyl).second;
    };
    std::tie(rep.t_u_bracket_lo, rep.t_u_bracket_hi) =
        bowen_zero_bracket(cyl_lower, cyl_upper, 0.0, 1.0);

    rep.t_s_lower = bowen_zero(
        [&p](double t) { return pressure_matrix(stable_weights(p, t, std::log(2.0))); },
        0.0, 2.0);
    rep.t_s_eta1 = bowen_zero(
        [&p](double t) { return pressure_matrix(stable_weights(p, t, 0.0)); }, 0.0, 2.0);

    const int census_depth = std::min(deepest, 14);
    const CensusReport census = preimage_census(p, w, census_depth, 2000, seed);
    rep.census_d_max = census.d_max;
    rep.t_s_lower_dmax = bowen_zero(
        [&p, &census](double t) {
            return pressure_matrix(
                stable_weights(p, t, std::log(static_cast<double>(std::max(census.d_max, 1)))));
        },
        0.0, 2.0);

    const IntervalUnion fiber = fiber_set(p, w, deepest).set;
    rep.tau_fiber = present(fiber).thickness;
    rep.pt_bound = hd_lower_bound(rep.tau_fiber);
    const double eps_lo = std::ldexp(1.0, -(deepest - 2));
    const double eps_hi = std::ldexp(1.0, -6);
    const BoxDimension bd = box_dimension(fiber, eps_lo, eps_hi);
    rep.t_s_box = bd.slope;
    rep.box_r2 = bd.r2;

    rep.stable_upper_note = "inverse-pressure stable upper bound not computed";
    rep.invariants_ok = rep.t_u < rep.t_u_beta_bound &&
                        rep.pt_bound < rep.t_s_box && rep.t_s_box <= 1.0 &&
                        rep.t_s_lower <= rep.t_s_box;
    return rep;
}

} // namespace skewlab
