#include "skewlab/system.hpp"

#include <algorithm>
#include <cmath>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {
constexpr int kSupGrid = 10000;
constexpr double kC2LowerFraction = 0.125; // lower admissible gap size, in units of alpha
} // namespace

Polynomial Polynomial::derivative() const {
    Polynomial d;
    if (coeffs.size() <= 1) {
        d.coeffs = {0.0};
        return d;
    }
    d.coeffs.resize(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        d.coeffs[i - 1] = coeffs[i] * static_cast<double>(i);
    }
    return d;
}

double Polynomial::sup_abs(double lo, double hi) const {
    const double step = (hi - lo) / kSupGrid;
    double m = 0.0;
    for (int i = 0; i <= kSupGrid; ++i) {
        m = std::max(m, std::abs((*this)(lo + step * i)));
    }
    const Polynomial d = derivative();
    double dm = 0.0;
    for (int i = 0; i <= kSupGrid; ++i) {
        dm = std::max(dm, std::abs(d(lo + step * i)));
    }
    return m + 0.5 * step * dm;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
    return out;
}

Itinerary::Itinerary(std::vector<std::uint8_t> symbols) : syms_(std::move(symbols)) {
    for (std::uint8_t s : syms_) {
        if (s != 1 && s != 2) {
            fail(errc::invalid_input, "itinerary symbols must be 1 or 2");
        }
    }
}

Itinerary Itinerary::parse(std::string_view text) {
    std::vector<std::uint8_t> syms;
    syms.reserve(text.size());
    for (char c : text) {
        if (c == '1') syms.push_back(1);
        else if (c == '2') syms.push_back(2);
        else fail(errc::invalid_input, "itinerary string may contain only '1' and '2'");
    }
    return Itinerary(std::move(syms));
}

Itinerary Itinerary::extended_to(std::size_t n) const {
    if (empty()) fail(errc::insufficient_coding, "cannot extend an empty itinerary");
    std::vector<std::uint8_t> syms = syms_;
    while (syms.size() < n) syms.push_back(syms_.back());
    return Itinerary(std::move(syms));
}

Itinerary Itinerary::shifted() const {
    if (size() < 2) fail(errc::insufficient_coding, "shift needs at least two symbols");
    return Itinerary(std::vector<std::uint8_t>(syms_.begin() + 1, syms_.end()));
}

Itinerary Itinerary::prepended(std::uint8_t sym) const {
    std::vector<std::uint8_t> syms;
    syms.reserve(size() + 1);
    syms.push_back(sym);
    syms.insert(syms.end(), syms_.begin(), syms_.end());
    return Itinerary(std::move(syms));
}

std::string Itinerary::str() const {
    std::string out;
    out.reserve(size());
    for (std::uint8_t s : syms_) out.push_back(s == 1 ? '1' : '2');
    return out;
}

std::pair<Itinerary, Itinerary> preimage_itineraries(const Itinerary& w) {
    return {w.prepended(1), w.prepended(2)};
}

int SystemParams::symbol_of(double x) const {
    if (I1.contains(x)) return 1;
    if (I2.contains(x)) return 2;
    return 0;
}

double SystemParams::g(double x) const {
    const int sym = symbol_of(x);
    if (sym == 0) fail(errc::invalid_input, "base point outside both branch domains");
    const Interval& dom = (sym == 1) ? I1 : I2;
    return (x - dom.lo) / dom.length();
}

double SystemParams::g_prime(int sym) const {
    return sym == 1 ? lambda1() : lambda2();
}

double SystemParams::g_inverse(int sym, double t) const {
    const Interval& dom = (sym == 1) ? I1 : I2;
    return dom.lo + t * dom.length();
}

double SystemParams::sup_dx() const {
    const double d1 = psi[0].derivative().sup_abs(I1.lo, I1.hi);
    const double d2 = psi[1].derivative().sup_abs(I2.lo, I2.hi);
    const double d3 = psi[2].derivative().sup_abs(I1.lo, I1.hi);
    return std::max({d1, d2, d3});
}

double SystemParams::k_prime() const {
    return sup_dx() / (1.0 - delta / beta);
}

SystemParams default_config(double alpha) {
    if (!(alpha > 0.0 && alpha <= 0.05)) {
        fail(errc::invalid_input, "default_config requires 0 < alpha <= 0.05");
    }
    const double a2 = alpha * alpha;
    SystemParams p;
    p.alpha = alpha;
    p.I1 = {0.5 - 3.0 * a2 / 8.0, 0.5 - a2 / 8.0};
    p.I2 = {1.0 - alpha - 3.0 * a2 / 8.0, 1.0 - alpha - a2 / 8.0};
    p.beta = 0.9 * 4.0 / a2;
    p.s = {0.5, 0.5, 0.5, 0.5};
    p.psi[0].coeffs = {0.0, 1.0};   // x
    p.psi[1].coeffs = {1.0, -1.0};  // 1 - x
    p.psi[2].coeffs = {1.0};        // 1
    p.delta = 0.6;
    p.eps_alpha = 3.0 * a2 / 8.0;
    p.theta_alpha = alpha / 100.0;
    p.merge_tolerance = 1e-13;
    return p;
}

bool ValidationReport::passed() const {
    for (const ValidationCheck& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const ValidationCheck& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

ValidationReport validate(const SystemParams& p) {
    ValidationReport r;
    auto add = [&r](std::string name, double lhs, double rhs, bool pass) {
        r.checks.push_back({std::move(name), lhs, rhs, pass});
    };

    const double b1 = p.I1.lo, b2 = p.I1.hi, b3 = p.I2.lo, b4 = p.I2.hi;
    const double a = p.alpha;

    add("interval_order", b2, b3,
        b1 < b2 && b2 < b3 && b3 < b4 && b1 > 0.0 && b4 < 1.0);

    if (p.generalized_placement) {
        r.eps_hat = std::max(std::max(std::abs(b1 - 0.5), std::abs(b2 - 0.5)),
                             std::max(std::abs(b3 - (1.0 - a)), std::abs(b4 - (1.0 - a))));
    } else {
        r.eps_hat = std::max(std::abs(b1 - 0.5), std::abs(b3 - (1.0 - a)));
        add("placement_first_construction", b2, 0.5, b2 < 0.5 && b4 <= 1.0 - a);
    }
    add("placement_radius", r.eps_hat, a * a, r.eps_hat < a * a);
    add("placement_radius_stored", r.eps_hat, p.eps_alpha,
        p.eps_alpha >= r.eps_hat - 1e-15 && p.eps_alpha < a * a);

    const double l1 = p.lambda1(), l2 = p.lambda2();
    add("expansion_window", std::max(l1, l2), p.beta * p.beta,
        p.beta < std::min(l1, l2) && std::max(l1, l2) < p.beta * p.beta);
    add("expansion_floor", 2.0, p.beta, p.beta > 2.0);

    // Cylinder domains g|_{Ii}^{-1}(Ij) must be separated so branch selection
    // is unambiguous.
    const double gap_in_I1 = p.g_inverse(1, b3) - p.g_inverse(1, b2);
    const double gap_in_I2 = p.g_inverse(2, b3) - p.g_inverse(2, b2);
    add("cylinder_gaps", 0.0, std::min(gap_in_I1, gap_in_I2),
        gap_in_I1 > 0.0 && gap_in_I2 > 0.0);

    const double s_max = std::max({p.s[0], p.s[1], p.s[2], p.s[3]});
    const double s_min = std::min({p.s[0], p.s[1], p.s[2], p.s[3]});
    add("fiber_contraction", s_max, p.delta,
        s_min > 0.0 && s_max < p.delta && p.delta < 1.0);

    // Distance to the exact-linear model in C^1, including the contraction
    // factors.
    Polynomial ident{{0.0, 1.0}}, one_minus{{1.0, -1.0}}, one{{1.0}};
    double theta = 0.0;
    auto c1_dist = [](const Polynomial& f, const Polynomial& g) {
        const Polynomial d = f - g;
        return std::max(d.sup_abs(0.0, 1.0), d.derivative().sup_abs(0.0, 1.0));
    };
    theta = std::max(theta, c1_dist(p.psi[0], ident));
    theta = std::max(theta, c1_dist(p.psi[1], one_minus));
    theta = std::max(theta, c1_dist(p.psi[2], one));
    for (double si : p.s) theta = std::max(theta, std::abs(si - 0.5));
    r.theta_hat = theta;
    add("model_distance", theta, p.theta_alpha, theta < p.theta_alpha);

    // Overlap condition: the lower branch image must reach past the upper
    // branch image's left edge inside fibers over I1.
    const double psi2_at = p.psi[1](1.0 - a);
    const double psi3_mid = p.psi[2](0.5);
    const double psi1_mid = p.psi[0](0.5);
    const double c1_lhs = psi1_mid + p.s[0] * psi2_at;
    const double c1_rhs = psi2_at + p.s[1] * (psi3_mid - p.s[2] * psi2_at);
    add("overlap_c1", c1_lhs, c1_rhs, c1_lhs < c1_rhs);

    // Persistent gap of size comparable to alpha in fibers over I2. The
    // exact-linear model yields alpha/4 exactly, so the admissible window
    // is (alpha/8, alpha).
    const double gap_c2 = psi3_mid - p.s[2] * psi1_mid / (1.0 - p.s[0]) -
                          p.s[3] * (psi3_mid - p.s[2] * psi2_at);
    add("gap_c2_lower", kC2LowerFraction * a, gap_c2, kC2LowerFraction * a < gap_c2);
    add("gap_c2_upper", gap_c2, a, gap_c2 < a);

    // All four fiber branches must keep [0, 1] invariant.
    double fr_lo = 1e300, fr_hi = -1e300;
    auto scan_branch = [&](int sf, int st, const Interval& dom) {
        const int n = 64;
        for (int i = 0; i <= n; ++i) {
            const double x = dom.lo + (dom.hi - dom.lo) * i / n;
            const FiberBranch br = fiber_branch(p, sf, st, x);
            for (double y : {0.0, 1.0}) {
                const double v = br.offset + br.slope * y;
                fr_lo = std::min(fr_lo, v);
                fr_hi = std::max(fr_hi, v);
            }
        }
    };
    scan_branch(1, 1, p.I1);
    scan_branch(2, 1, p.I2);
    scan_branch(1, 2, p.I1);
    scan_branch(2, 2, p.I2);
    add("fiber_range", fr_lo, fr_hi, fr_lo >= 0.0 && fr_hi <= 1.0);

    return r;
}

double base_point(const SystemParams& p, const Itinerary& w) {
    if (w.empty()) fail(errc::insufficient_coding, "base_point: empty itinerary");
    const Interval& last = (w.at(w.size() - 1) == 1) ? p.I1 : p.I2;
    double x = 0.5 * (last.lo + last.hi);
    for (std::size_t k = w.size() - 1; k-- > 0;) {
        x = p.g_inverse(w.at(k), x);
    }
    return x;
}

double precise_base_point(const SystemParams& p, const Itinerary& w) {
    // Each inverse branch contracts by at least 1/beta; 24 extra symbols put
    // the seed truncation far below double resolution for any valid beta.
    return base_point(p, w.extended_to(w.size() + 24));
}

FiberBranch fiber_branch(const SystemParams& p, int sym_from, int sym_to, double x) {
    if (sym_from == 1 && sym_to == 1) {
        return {p.psi[0](x), p.s[0], p.psi[0].derivative()(x)};
    }
    if (sym_from == 2 && sym_to == 1) {
        return {p.psi[1](x), p.s[1], p.psi[1].derivative()(x)};
    }
    if (sym_from == 1 && sym_to == 2) {
        return {p.psi[2](x), -p.s[2], p.psi[2].derivative()(x)};
    }
    return {0.0, p.s[3], 0.0};
}

double fiber_map(const SystemParams& p, const Itinerary& w, double y) {
    if (w.size() < 2) {
        fail(errc::insufficient_coding, "fiber_map needs the current and next symbol");
    }
    const double x = base_point(p, w);
    const FiberBranch br = fiber_branch(p, w.at(0), w.at(1), x);
    return br.offset + br.slope * y;
}

std::pair<double, double> fiber_derivatives(const SystemParams& p,
                                            const Itinerary& w, double y) {
    if (w.size() < 2) {
        fail(errc::insufficient_coding, "fiber_derivatives needs two symbols");
    }
    (void)y; // branches are affine in y
    const double x = base_point(p, w);
    const FiberBranch br = fiber_branch(p, w.at(0), w.at(1), x);
    return {br.dx, br.slope};
}

} // namespace skewlab
