#include "skewlab/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skewlab/errors.hpp"
#include "skewlab/fibers.hpp"

namespace skewlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Branch in force at the i-th backward step (1-based): the lifted point's
// own symbol is choices[i-1]; its forward image carries choices[i-2], or the
// anchor's first symbol when i == 1.
std::uint8_t step_to_symbol(const Prehistory& ph, int i) {
    return i >= 2 ? ph.choices[static_cast<std::size_t>(i) - 2] : ph.anchor.symbol_at(0);
}

struct SeriesState {
    double omega = 0.0;
    double prefix = 1.0; // product of (d_y h / g') over consumed steps
};

// One series term: prefix * d_x h(z_{-i}) / g'(x_{-i}), then fold the step
// into the prefix.
double advance(const SystemParams& p, const Prehistory& ph, int i, SeriesState& st) {
    const std::uint8_t from = ph.choices[static_cast<std::size_t>(i) - 1];
    const std::uint8_t to = step_to_symbol(ph, i);
    const double x = ph.lifted[static_cast<std::size_t>(i) - 1].first;
    const FiberBranch br = fiber_branch(p, from, to, x);
    const double gp = p.g_prime(from);
    const double term = st.prefix * br.dx / gp;
    st.omega += term;
    st.prefix *= br.slope / gp;
    return term;
}

double analytic_tail(const SystemParams& p, double prefix_abs) {
    // Sum_{k>=1} K delta^{k-1} beta^{-k} applied after the consumed prefix.
    return prefix_abs * p.sup_dx() / (p.beta - p.delta);
}

std::vector<std::uint8_t> extend_choices(std::span<const std::uint8_t> c, std::size_t n) {
    std::vector<std::uint8_t> out(c.begin(), c.end());
    while (out.size() < n) out.push_back(out.back());
    return out;
}

} // namespace

Prehistory backward_lift(const SystemParams& p, const Itinerary& w, double y,
                         std::span<const std::uint8_t> choices, int cert_depth) {
    if (w.size() < 2) fail(errc::insufficient_coding, "backward_lift: itinerary too short");
    if (!membership(p, w, y, cert_depth)) {
        fail(errc::membership, "backward_lift: anchor not in the certified fiber set");
    }
    Prehistory ph;
    ph.anchor = w;
    ph.anchor_y = y;
    ph.cert_depth = cert_depth;

    Itinerary cur = w;
    double cur_y = y;
    for (std::uint8_t c : choices) {
        const Itinerary next = cur.prepended(c);
        const double x = precise_base_point(p, next);
        const FiberBranch br = fiber_branch(p, c, cur.symbol_at(0), x);
        const double prev_y = (cur_y - br.offset) / br.slope;
        if (prev_y < 0.0 || prev_y > 1.0) {
            fail(errc::escape, "backward_lift: lift left [0, 1]");
        }
        if (!membership(p, next, prev_y, cert_depth)) {
            fail(errc::membership, "backward_lift: lift left the certified fiber set");
        }
        ph.choices.push_back(c);
        ph.lifted.emplace_back(x, prev_y);
        cur = next;
        cur_y = prev_y;
    }
    return ph;
}

std::optional<Prehistory> try_backward_lift(const SystemParams& p,
                                            const Itinerary& w, double y,
                                            std::span<const std::uint8_t> choices,
                                            int cert_depth) {
    try {
        return backward_lift(p, w, y, choices, cert_depth);
    } catch (const error&) {
        return std::nullopt;
    }
}

SlopeResult unstable_slope(const SystemParams& p, const Prehistory& ph, double tol) {
    const double ratio = p.delta / p.beta;
    const double kp = p.k_prime();
    int n_min = 1;
    while (kp * std::pow(ratio, n_min) / (1.0 - ratio) > tol && n_min < 400) ++n_min;
    if (ph.depth() < n_min) {
        fail(errc::precision, "unstable_slope: prehistory too shallow for the tolerance");
    }

    SeriesState st;
    for (int i = 1; i <= ph.depth(); ++i) advance(p, ph, i, st);

    const double scale = kp / (p.beta - p.delta);
    const double rounding = 32.0 * (ph.depth() + 1) * kEps * scale;
    return {st.omega, analytic_tail(p, std::abs(st.prefix)) + rounding};
}

SeparationReport slope_separation(const SystemParams& p, const Itinerary& w,
                                  double y,
                                  std::span<const std::uint8_t> choices1,
                                  std::span<const std::uint8_t> choices2,
                                  double tol, int cert_depth) {
    if (choices1.empty() || choices2.empty()) {
        fail(errc::invalid_input, "slope_separation: empty choice sequence");
    }
    const std::size_t probe = std::max(choices1.size(), choices2.size());
    std::vector<std::uint8_t> e1 = extend_choices(choices1, probe);
    std::vector<std::uint8_t> e2 = extend_choices(choices2, probe);
    std::size_t m = 0;
    while (m < probe && e1[m] == e2[m]) ++m;
    if (m == probe) {
        fail(errc::no_disagreement, "slope_separation: identical choice sequences");
    }
    const int m1 = static_cast<int>(m) + 1; // 1-based first disagreement

    const std::size_t depth = std::max(probe, m + 3);
    e1 = extend_choices(e1, depth);
    e2 = extend_choices(e2, depth);
    const Prehistory ph1 = backward_lift(p, w, y, e1, cert_depth);
    const Prehistory ph2 = backward_lift(p, w, y, e2, cert_depth);

    // Terms before the disagreement are computed from identical data and
    // cancel exactly, so only the split tail is accumulated.
    SeriesState s1, s2;
    for (int i = 1; i < m1; ++i) {
        advance(p, ph1, i, s1);
        advance(p, ph2, i, s2);
    }
    double delta = 0.0;
    double term_mass = 0.0;
    for (int i = m1; i <= static_cast<int>(depth); ++i) {
        const double t1 = advance(p, ph1, i, s1);
        const double t2 = advance(p, ph2, i, s2);
        delta += t1 - t2;
        term_mass += std::abs(t1) + std::abs(t2);
    }

    SeparationReport rep;
    rep.m = m1;
    rep.cert_depth = cert_depth;
    rep.delta_omega = std::abs(delta);
    rep.separation_bound = 0.7 / std::pow(p.beta, m1 + 1);
    const double rounding = 32.0 * (static_cast<double>(depth) - m1 + 2) * kEps * term_mass;
    rep.tail_bound = analytic_tail(p, std::abs(s1.prefix)) +
                     analytic_tail(p, std::abs(s2.prefix)) + rounding;

    const double budget = std::min(tol, 0.1 * rep.separation_bound);
    if (rep.tail_bound > budget) {
        fail(errc::precision, "slope_separation: tail bound exceeds the certification budget");
    }
    rep.pass = rep.delta_omega - rep.tail_bound > rep.separation_bound;
    return rep;
}

ConeReport cone_verification(const SystemParams& p, double gamma, int N,
                             std::span<const Prehistory> samples) {
    if (N < 1) fail(errc::invalid_input, "cone_verification: N must be >= 1");
    const double gamma_max = std::sqrt(std::pow(p.beta, 2.0 * N) - 1.0);
    if (!(gamma > 0.0) || gamma > gamma_max) {
        fail(errc::invalid_input, "cone_verification: gamma outside (0, sqrt(beta^{2N} - 1)]");
    }
    if (samples.empty()) {
        fail(errc::invalid_input, "cone_verification: no samples");
    }

    ConeReport rep;
    rep.N = N;
    rep.gamma = gamma;
    rep.K = p.sup_dx();
    rep.Kprime = p.k_prime();
    rep.chain_ok = true;

    double m_exp = std::numeric_limits<double>::infinity();
    double m_coexp = std::numeric_limits<double>::infinity();

    for (const Prehistory& ph : samples) {
        if (ph.depth() < N) {
            fail(errc::invalid_input, "cone_verification: sample lifted shallower than N");
        }
        // Forward derivative cocycle along the anchor orbit.
        double x = precise_base_point(p, ph.anchor);
        double yv = ph.anchor_y;
        double A = 1.0, B = 0.0, C = 1.0, A_prev = 1.0;
        for (int k = 0; k < N; ++k) {
            const int s_from = ph.anchor.symbol_at(static_cast<std::size_t>(k));
            const int s_to = ph.anchor.symbol_at(static_cast<std::size_t>(k) + 1);
            const FiberBranch br = fiber_branch(p, s_from, s_to, x);
            const double gp = p.g_prime(s_from);
            B = br.dx * A + br.slope * B;
            A_prev = A;
            A *= gp;
            C *= br.slope;
            yv = br.offset + br.slope * yv;
            x = p.g(x);
        }

        if (std::abs(B) > rep.Kprime * A_prev * (1.0 + 1e-12)) rep.chain_ok = false;

        for (double t : {-gamma, 0.0, gamma}) {
            const double num = std::hypot(A, B + C * t);
            const double den = std::hypot(1.0, t);
            m_exp = std::min(m_exp, num / den);
        }
        // Inverse image of vectors outside the cone: boundary slopes and the
        // vertical axis.
        auto inv_ratio = [&](double v, double wv) {
            const double iv = v / A;
            const double iw = -B * v / (A * C) + wv / C;
            return std::hypot(iv, iw) / std::hypot(v, wv);
        };
        m_coexp = std::min({m_coexp, inv_ratio(1.0, gamma), inv_ratio(1.0, -gamma),
                            inv_ratio(0.0, 1.0)});
    }

    rep.m_expand = m_exp;
    rep.m_coexpand = m_coexp;
    rep.pass = m_exp > 1.0 && m_coexp > 1.0;
    return rep;
}

} // namespace skewlab
