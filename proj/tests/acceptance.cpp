// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Expected values come from closed-form substitution, the
// reference recursion in tests/support/oracle.hpp, and the frozen fixtures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skewlab/cantor.hpp"
#include "skewlab/fibers.hpp"
#include "skewlab/runner.hpp"
#include "skewlab/tangent.hpp"
#include "skewlab/thermo.hpp"

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace skewlab;

namespace {

int g_failures = 0;

void criterion(int id, const char* name, bool ok, const std::string& detail = "") {
    std::printf("criterion %2d [%s] %s%s%s\n", id, ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

const SystemParams& cfg() {
    static const SystemParams p = default_config(fixtures::kAlpha);
    return p;
}

Itinerary rep(const std::string& cell, std::size_t len = 48) {
    std::string out;
    while (out.size() < len) out += cell;
    out.resize(len);
    return Itinerary::parse(out);
}

double bp(const std::string& prefix, const Itinerary& w) {
    return base_point(cfg(), Itinerary::parse(prefix + w.str()));
}

double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Itinerary random_itinerary(std::mt19937_64& rng, std::size_t len, int first) {
    std::vector<std::uint8_t> syms;
    syms.push_back(static_cast<std::uint8_t>(first));
    while (syms.size() < len) syms.push_back(next_unit(rng) < 0.5 ? 1 : 2);
    return Itinerary(std::move(syms));
}

bool grow_choices(const Itinerary& w, double y, std::vector<std::uint8_t>& choices,
                  int extra, int cert) {
    for (int i = 0; i < extra; ++i) {
        bool ok = false;
        for (std::uint8_t c : {std::uint8_t{2}, std::uint8_t{1}}) {
            choices.push_back(c);
            if (try_backward_lift(cfg(), w, y, choices, cert)) {
                ok = true;
                break;
            }
            choices.pop_back();
        }
        if (!ok) return false;
    }
    return true;
}

IntervalUnion from_segs(const oracle::Segs& segs) {
    std::vector<Interval> iv;
    for (const auto& s : segs) iv.push_back({s.first, s.second});
    return IntervalUnion::normalize(std::move(iv), 0.0);
}

// ---------------------------------------------------------------------------

void criterion_1_fiber_ground_truth() {
    const Itinerary w = rep("2");
    bool ok = true;
    std::ostringstream detail;

    const FiberApprox f1 = fiber_set(cfg(), w, 1);
    ok = ok && f1.set.size() == 1 && f1.set.component(0).lo == 0.0 &&
         f1.set.component(0).hi == 1.0;

    const double C1 = 0.5 + bp("11", w);
    const double A1 = 1.0 - bp("21", w);
    const FiberApprox f2 = fiber_set(cfg(), w, 2);
    const double ref2[4] = {0.0, 0.5, 1.0 - C1 / 2, 1.0 - A1 / 2};
    ok = ok && f2.set.size() == 2;
    if (ok) {
        for (int i = 0; i < 2; ++i) {
            ok = ok && std::abs(f2.set.component(i).lo - ref2[2 * i]) < 1e-12 &&
                 std::abs(f2.set.component(i).hi - ref2[2 * i + 1]) < 1e-12;
        }
    }

    const double C1p = 0.5 + bp("112", w);
    const double A1p = 1.0 - bp("212", w);
    const double A2 = 1.0 - bp("21", w);
    const double C2 = bp("11", w) + (0.5 + bp("111", w)) / 2.0;
    const FiberApprox f3 = fiber_set(cfg(), w, 3);
    const double ref3[6] = {0.0,           0.25,         0.5 - C1p / 4,
                            0.5 - A1p / 4, 1.0 - C2 / 2, 1.0 - A2 / 2};
    ok = ok && f3.set.size() == 3;
    double worst = 0.0;
    if (ok) {
        for (int i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(f3.set.component(i).lo - ref3[2 * i]));
            worst = std::max(worst, std::abs(f3.set.component(i).hi - ref3[2 * i + 1]));
        }
        ok = ok && worst < 1e-12;
    }
    detail << "depth-3 endpoint error " << worst;
    criterion(1, "fiber recursion ground truth", ok, detail.str());
}

void criterion_2_thickness_floor() {
    double oracle_min = 1e300;
    for (const char* cell : fixtures::kPeriodicCells) {
        for (int n = 4; n <= 10; ++n) {
            const double tau =
                present(from_segs(oracle::fiber(cfg(), rep(cell), n))).thickness;
            oracle_min = std::min(oracle_min, tau);
        }
    }
    bool ok = std::abs(oracle_min - fixtures::kDeltaHatOracleMin) < 1e-9;
    ok = ok &&
         std::abs(oracle_min * fixtures::kDeltaHatMargin - fixtures::kDeltaHat) < 1e-9;

    double floor_seen = 1e300;
    for (const char* cell : fixtures::kPeriodicCells) {
        for (int n = 4; n <= 20; ++n) {
            const double tau = present(fiber_set(cfg(), rep(cell), n).set).thickness;
            floor_seen = std::min(floor_seen, tau);
            ok = ok && tau >= fixtures::kDeltaHat;
        }
    }
    const double band = fixtures::kAlpha * fixtures::kDeltaHat;
    ok = ok && band >= 0.05 && band <= 4.0;

    std::ostringstream detail;
    detail << "frozen floor " << fixtures::kDeltaHat << ", min over depths 4..20 "
           << floor_seen << ", alpha*floor " << band;
    criterion(2, "thickness floor across depths and itineraries", ok, detail.str());
}

void criterion_3_overlap_certification() {
    const double a = fixtures::kAlpha;
    const auto [s1, s2] = preimage_components(cfg(), rep("1"), 12);
    const double t1 = present(s1).thickness;
    const double t2 = present(s2).thickness;
    const IntervalUnion inter = IntervalUnion::intersect(s1, s2);

    bool ok = interleaved(s1, s2) && gap_lemma(t1, t2) && hky_region(t1, t2) &&
              !inter.empty();
    std::ostringstream detail;
    if (!inter.empty()) {
        const Interval hull = inter.hull();
        const double lo_band = 0.5 + a / 2 - 10 * a * a;
        const double hi_band = 0.5 + 3 * a / 4 + 10 * a * a;
        ok = ok && hull.lo >= lo_band && hull.hi <= hi_band;
        detail << "hull [" << hull.lo << ", " << hull.hi << "] in [" << lo_band
               << ", " << hi_band << "]";
    }
    criterion(3, "overlap certification at depth 12", ok, detail.str());
}

void criterion_4_intersection_thickness() {
    const auto [s1, s2] = preimage_components(cfg(), rep("1"), 14);
    const double t1 = present(s1).thickness;
    const double t2 = present(s2).thickness;
    const double bound = intersection_thickness_bound(t1, t2);
    bool ok = bound == std::sqrt(std::min(t1, t2));

    const IntervalUnion fx = IntervalUnion::intersect(s1, s2);
    ok = ok && !fx.empty();
    const double tau_fx = fx.empty() ? 0.0 : present(fx).thickness;
    ok = ok && tau_fx >= 0.9 * bound;

    std::ostringstream detail;
    detail << "tau(F_x) " << tau_fx << " vs 0.9*bound " << 0.9 * bound;
    criterion(4, "intersection thickness bound at depth 14", ok, detail.str());
}

void criterion_5_slope_separation() {
    std::mt19937_64 rng(501);
    const double lam = cfg().lambda1();
    int pairs = 0, passes = 0;
    bool magnitudes_ok = true;
    double worst_margin = 1e300;

    for (int m = 1; m <= 5; ++m) {
        int made = 0, guard = 0;
        while (made < 12 && guard < 200) {
            ++guard;
            const Itinerary w_star = random_itinerary(rng, 24, 1);
            const IntervalUnion over = overlap_set(cfg(), w_star, 18);
            if (over.empty()) continue;
            const Interval& comp =
                over.component(static_cast<std::size_t>(rng() % over.size()));
            double y = 0.5 * (comp.lo + comp.hi);

            Itinerary w = w_star;
            std::vector<std::uint8_t> prefix;
            bool fwd_ok = true;
            for (int j = 0; j + 1 < m; ++j) {
                const double x = precise_base_point(cfg(), w);
                const FiberBranch br = fiber_branch(cfg(), w.at(0), w.at(1), x);
                y = br.offset + br.slope * y;
                prefix.insert(prefix.begin(), w.at(0));
                w = w.shifted();
                if (y < 0.0 || y > 1.0) fwd_ok = false;
            }
            if (!fwd_ok) continue;

            std::vector<std::uint8_t> c1 = prefix;
            c1.push_back(1);
            std::vector<std::uint8_t> c2 = prefix;
            c2.push_back(2);
            if (!grow_choices(w, y, c1, 3, 12)) continue;
            if (!grow_choices(w, y, c2, 3, 12)) continue;

            const SeparationReport rep_m =
                slope_separation(cfg(), w, y, c1, c2, 1e-14, 12);
            ++pairs;
            ++made;
            if (rep_m.m == m && rep_m.pass) ++passes;
            worst_margin =
                std::min(worst_margin, rep_m.delta_omega / rep_m.separation_bound);
            if (m == 1) {
                magnitudes_ok = magnitudes_ok && rep_m.delta_omega >= 1.0 / lam &&
                                rep_m.delta_omega <= 3.0 / lam;
            }
        }
    }
    const bool ok = pairs >= 50 && passes == pairs && magnitudes_ok;
    std::ostringstream detail;
    detail << pairs << " pairs, " << passes << " certified passes, min margin "
           << worst_margin;
    criterion(5, "slope separation across disagreement depths", ok, detail.str());
}

void criterion_6_cocycle_recurrence(std::vector<Prehistory>* cone_samples) {
    std::mt19937_64 rng(601);
    int made = 0, guard = 0;
    bool ok = true;
    double worst = 0.0;
    while (made < 100 && guard < 1000) {
        ++guard;
        const Itinerary w = random_itinerary(rng, 24, next_unit(rng) < 0.5 ? 1 : 2);
        const IntervalUnion fib = fiber_set(cfg(), w, 18).set;
        const Interval& comp =
            fib.component(static_cast<std::size_t>(rng() % fib.size()));
        const double y = 0.5 * (comp.lo + comp.hi);
        std::vector<std::uint8_t> choices;
        if (!grow_choices(w, y, choices, 6, 12)) continue;
        const Prehistory ph = backward_lift(cfg(), w, y, choices, 12);
        const SlopeResult base = unstable_slope(cfg(), ph, 1e-12);

        const double x = precise_base_point(cfg(), w);
        const FiberBranch br = fiber_branch(cfg(), w.at(0), w.at(1), x);
        std::vector<std::uint8_t> fwd = {w.at(0)};
        fwd.insert(fwd.end(), choices.begin(), choices.end());
        const Prehistory ph_fwd =
            backward_lift(cfg(), w.shifted(), br.offset + br.slope * y, fwd, 12);
        const SlopeResult shifted = unstable_slope(cfg(), ph_fwd, 1e-12);

        const double rhs = (br.dx + br.slope * base.omega) / cfg().g_prime(w.at(0));
        const double residual = std::abs(shifted.omega - rhs);
        const double budget = 2.0 * (shifted.tail_bound + base.tail_bound);
        worst = std::max(worst, residual / budget);
        ok = ok && residual <= budget;
        ++made;
        if (cone_samples && cone_samples->size() < 20) cone_samples->push_back(ph);
    }
    ok = ok && made == 100;
    std::ostringstream detail;
    detail << made << " prehistories, worst residual/budget " << worst;
    criterion(6, "cocycle recurrence under the shift", ok, detail.str());
}

void criterion_7_cone(const std::vector<Prehistory>& samples) {
    const double gamma = 0.99 * std::sqrt(cfg().beta * cfg().beta - 1.0);
    const ConeReport r1 = cone_verification(cfg(), gamma, 1, samples);
    const ConeReport r2 = cone_verification(cfg(), gamma, 2, samples);
    const bool ok = samples.size() >= 10 && r1.m_expand > 1.0 &&
                    r2.m_coexpand > 1.0 && r1.pass && r2.pass && r1.chain_ok &&
                    r2.chain_ok;
    std::ostringstream detail;
    detail << "N=1 m_expand " << r1.m_expand << ", N=2 m_coexpand " << r2.m_coexpand;
    criterion(7, "cone expansion and co-expansion", ok, detail.str());
}

void criterion_8_pressure_exactness() {
    const double l2 = std::log(2.0);
    const double entropy = pressure_matrix(WeightMatrix{{{0.0, 0.0}, {0.0, 0.0}}});
    bool ok = std::abs(entropy - l2) <= 1e-12;

    const double z1 = bowen_zero(
        [](double t) { return pressure_matrix(stable_weights(cfg(), t, 0.0)); }, 0.0,
        2.0);
    const double z2 = bowen_zero(
        [l2](double t) { return pressure_matrix(stable_weights(cfg(), t, l2)); }, 0.0,
        2.0);
    ok = ok && std::abs(z1 - 1.0) <= 1e-9 && std::abs(z2 - 0.0) <= 1e-9;

    const double c = 7.5;
    const double zc = bowen_zero(
        [c](double t) {
            WeightMatrix w{};
            for (auto& row : w) row.fill(-t * std::log(c));
            return pressure_matrix(w);
        },
        0.0, 1.0);
    ok = ok && std::abs(zc - l2 / std::log(c)) <= 1e-9;

    std::ostringstream detail;
    detail << "entropy residual " << std::abs(entropy - l2) << ", stable zeros " << z1
           << " / " << z2;
    criterion(8, "pressure exactness and reference zeros", ok, detail.str());
}

void criterion_9_unstable_dimension() {
    const double t_u = bowen_zero(
        [](double t) { return pressure_matrix(unstable_weights(cfg(), t)); }, 0.0, 1.0);
    const double beta_bound = std::log(2.0) / std::log(cfg().beta / 2.0);
    bool ok = t_u >= 0.0653 && t_u <= 0.0655 && t_u < beta_bound;

    auto lower = [](double t) {
        return pressure_cylinder(unstable_word_potential(cfg(), t), 12).first;
    };
    auto upper = [](double t) {
        return pressure_cylinder(unstable_word_potential(cfg(), t), 12).second;
    };
    const auto [b_lo, b_hi] = bowen_zero_bracket(lower, upper, 0.0, 1.0, 1e-12);
    ok = ok && t_u >= b_lo - 1e-9 && t_u <= b_hi + 1e-9;

    std::ostringstream detail;
    detail << "t_u " << t_u << " < " << beta_bound << ", cylinder bracket [" << b_lo
           << ", " << b_hi << "]";
    criterion(9, "unstable dimension value and bound", ok, detail.str());
}

void criterion_10_dimension_bracket() {
    const IntervalUnion fiber = fiber_set(cfg(), rep("1"), 20).set;
    const BoxDimension bd =
        box_dimension(fiber, std::ldexp(1.0, -18), std::ldexp(1.0, -6));
    const double lo = hd_lower_bound(fixtures::kDeltaHat);
    const bool ok = bd.slope > lo && bd.slope < 1.0 && bd.r2 >= 0.98;
    std::ostringstream detail;
    detail << "slope " << bd.slope << " in (" << lo << ", 1), r2 " << bd.r2;
    criterion(10, "box dimension inside the thickness bracket", ok, detail.str());
}

void criterion_11_census_dichotomy() {
    const Itinerary w = rep("1");
    const CensusReport rep_c = preimage_census(cfg(), w, 14, 10000, 1101);
    bool ok = rep_c.count_d0 == 0 && rep_c.count_d1 > 0 && rep_c.count_d2 > 0;
    for (const CensusRow& row : rep_c.rows) {
        if (row.in_overlap) ok = ok && row.d == 2;
    }

    const IntervalUnion over = overlap_set(cfg(), w, 14);
    ok = ok && !over.empty();
    for (const Interval& c : over.components()) {
        ok = ok && census_d(cfg(), w, 0.5 * (c.lo + c.hi), 14) == 2;
    }

    const IntervalUnion fib = fiber_set(cfg(), w, 14).set;
    const std::size_t step = std::max<std::size_t>(1, fib.size() / 100);
    int checked = 0;
    for (std::size_t i = 0; i < fib.size() && checked < 100; i += step, ++checked) {
        const double y = 0.5 * (fib.component(i).lo + fib.component(i).hi);
        const int d8 = census_d(cfg(), w, y, 8);
        const int d11 = census_d(cfg(), w, y, 11);
        const int d14 = census_d(cfg(), w, y, 14);
        ok = ok && d11 <= d8 && d14 <= d11;
    }

    std::ostringstream detail;
    detail << "d1 " << rep_c.count_d1 << ", d2 " << rep_c.count_d2 << ", " << checked
           << " monotone points";
    criterion(11, "preimage census dichotomy and monotonicity", ok, detail.str());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string strip_timestamp(std::string body) {
    const auto pos = body.find("\"timestamp\"");
    if (pos == std::string::npos) return body;
    const auto end = body.find('\n', pos);
    body.erase(pos, end == std::string::npos ? std::string::npos : end - pos);
    return body;
}

void criterion_12_determinism() {
    RunOptions opts;
    opts.command = "full-report";
    opts.alpha = fixtures::kAlpha;
    opts.depth = 10;
    opts.samples = 1500;
    opts.seed = 42;
    std::ostringstream log;

    opts.out_dir = "acceptance_run_a";
    const int code_a = run_command(opts, log);
    opts.out_dir = "acceptance_run_b";
    const int code_b = run_command(opts, log);

    bool ok = code_a == kExitOk && code_b == kExitOk;
    int compared = 0;
    for (const auto& entry : std::filesystem::directory_iterator("acceptance_run_a")) {
        const auto name = entry.path().filename();
        const std::string a = strip_timestamp(slurp(entry.path()));
        const std::string b = strip_timestamp(
            slurp(std::filesystem::path("acceptance_run_b") / name));
        ok = ok && !b.empty() && a == b;
        ++compared;
    }
    ok = ok && compared >= 8;
    std::ostringstream detail;
    detail << compared << " report files byte-identical modulo timestamp";
    criterion(12, "deterministic full report", ok, detail.str());
}

} // namespace

int main() {
    criterion_1_fiber_ground_truth();
    criterion_2_thickness_floor();
    criterion_3_overlap_certification();
    criterion_4_intersection_thickness();
    criterion_5_slope_separation();
    std::vector<Prehistory> cone_samples;
    criterion_6_cocycle_recurrence(&cone_samples);
    criterion_7_cone(cone_samples);
    criterion_8_pressure_exactness();
    criterion_9_unstable_dimension();
    criterion_10_dimension_bracket();
    criterion_11_census_dichotomy();
    criterion_12_determinism();

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
