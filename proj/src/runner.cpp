#include "skewlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "skewlab/cantor.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/fibers.hpp"
#include "skewlab/report_io.hpp"
#include "skewlab/tangent.hpp"
#include "skewlab/thermo.hpp"

namespace skewlab {

namespace {

const std::vector<std::string> kCommands = {
    "validate", "fiber", "thickness", "overlap", "omega",
    "cone", "dimension", "census", "full-report"};

std::string manifest_core(const RunOptions& o) {
    std::ostringstream s;
    s << "command=" << o.command
      << "|config=" << o.config_path
      << "|alpha=" << (o.alpha ? fmt_real(*o.alpha) : std::string("-"))
      << "|depth=" << o.depth
      << "|seed=" << o.seed
      << "|samples=" << o.samples
      << "|format=" << o.format
      << "|y=" << (o.y ? fmt_real(*o.y) : std::string("-"))
      << "|choices1=" << o.choices1
      << "|choices2=" << o.choices2
      << "|tool=" << kToolVersion;
    for (const std::string& it : o.itineraries) s << "|itinerary=" << it;
    return s.str();
}

std::string manifest_json(const RunOptions& o, const std::string& hash) {
    std::ostringstream s;
    s << "{\n"
      << "  \"tool\": \"" << kToolVersion << "\",\n"
      << "  \"command\": \"" << json_escape(o.command) << "\",\n"
      << "  \"config\": \"" << json_escape(o.config_path.empty() ? "builtin" : o.config_path)
      << "\",\n"
      << "  \"alpha\": " << (o.alpha ? fmt_real(*o.alpha) : std::string("null")) << ",\n"
      << "  \"itineraries\": [";
    for (std::size_t i = 0; i < o.itineraries.size(); ++i) {
        if (i) s << ", ";
        s << "\"" << json_escape(o.itineraries[i]) << "\"";
    }
    s << "],\n"
      << "  \"depth\": " << o.depth << ",\n"
      << "  \"seed\": " << o.seed << ",\n"
      << "  \"samples\": " << o.samples << ",\n"
      << "  \"manifest_hash\": \"" << hash << "\",\n"
      << "  \"timestamp\": \"" << timestamp_utc() << "\"\n"
      << "}\n";
    return s.str();
}

std::vector<std::uint8_t> parse_choices(const std::string& text) {
    std::vector<std::uint8_t> out;
    for (char c : text) {
        if (c == '1') out.push_back(1);
        else if (c == '2') out.push_back(2);
        else fail(errc::invalid_input, "choices may contain only '1' and '2'");
    }
    if (out.empty()) fail(errc::invalid_input, "empty choices");
    return out;
}

double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Itinerary random_itinerary(std::mt19937_64& rng, std::size_t len, int first_symbol) {
    std::vector<std::uint8_t> syms;
    syms.push_back(static_cast<std::uint8_t>(first_symbol));
    while (syms.size() < len) {
        syms.push_back(next_unit(rng) < 0.5 ? 1 : 2);
    }
    return Itinerary(std::move(syms));
}

// Extend a partial lift branch by branch, keeping whichever choice stays in
// the certified fiber set.
std::optional<Prehistory> greedy_prehistory(const SystemParams& p, const Itinerary& w,
                                            double y, int depth, int cert,
                                            std::mt19937_64& rng) {
    std::vector<std::uint8_t> choices;
    for (int i = 0; i < depth; ++i) {
        const std::uint8_t first = next_unit(rng) < 0.5 ? 1 : 2;
        const std::uint8_t second = (first == 1) ? 2 : 1;
        bool placed = false;
        for (std::uint8_t c : {first, second}) {
            choices.push_back(c);
            if (try_backward_lift(p, w, y, choices, cert)) {
                placed = true;
                break;
            }
            choices.pop_back();
        }
        if (!placed) return std::nullopt;
    }
    return backward_lift(p, w, y, choices, cert);
}

std::vector<Prehistory> seeded_samples(const SystemParams& p, std::uint64_t seed,
                                       int count, int lift_depth, int cert) {
    std::mt19937_64 rng(seed);
    std::vector<Prehistory> out;
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard < 50 * count) {
        ++guard;
        const Itinerary w = random_itinerary(rng, 24, next_unit(rng) < 0.5 ? 1 : 2);
        const IntervalUnion fib = fiber_set(p, w, 18).set;
        const auto& comps = fib.components();
        const Interval& c = comps[static_cast<std::size_t>(
            rng() % static_cast<std::uint64_t>(comps.size()))];
        const double y = 0.5 * (c.lo + c.hi);
        auto ph = greedy_prehistory(p, w, y, lift_depth, cert, rng);
        if (ph) out.push_back(std::move(*ph));
    }
    if (static_cast<int>(out.size()) < count) {
        fail(errc::precision, "could not assemble the requested sample set");
    }
    return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct Ctx {
    SystemParams params;
    RunOptions opts;
    std::string hash;
    std::vector<Itinerary> itineraries;
};

std::string fiber_report_json(const Ctx& ctx, const Itinerary& w, int depth) {
    const FiberApprox fib = fiber_set(ctx.params, w, depth);
    std::ostringstream s;
    s << "{\n"
      << "  \"itinerary\": \"" << w.str() << "\",\n"
      << "  \"depth\": " << depth << ",\n"
      << "  \"itinerary_extended\": " << bool_str(fib.itinerary_extended) << ",\n"
      << "  \"components\": " << fib.set.to_json() << ",\n";
    s << "  \"gaps\": [";
    if (fib.set.size() > 1) {
        const auto gs = fib.set.gaps();
        for (std::size_t i = 0; i < gs.size(); ++i) {
            if (i) s << ",";
            s << "[" << fmt_real(gs[i].lo) << "," << fmt_real(gs[i].hi) << "]";
        }
    }
    s << "],\n";
    const Interval hull = fib.set.hull();
    s << "  \"leftmost\": " << fmt_real(hull.lo) << ",\n"
      << "  \"rightmost\": " << fmt_real(hull.hi) << ",\n"
      << "  \"min_bridge_gap_ratio\": "
      << fmt_real_json(present(fib.set).thickness) << ",\n"
      << "  \"manifest_hash\": \"" << ctx.hash << "\"\n"
      << "}\n";
    return s.str();
}

int cmd_validate(const Ctx& ctx) {
    const ValidationReport rep = validate(ctx.params);
    std::ostringstream s;
    s << "{\n  \"checks\": [\n";
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const ValidationCheck& c = rep.checks[i];
        s << "    {\"name\": \"" << c.name << "\", \"lhs\": " << fmt_real(c.lhs)
          << ", \"rhs\": " << fmt_real(c.rhs) << ", \"pass\": " << bool_str(c.pass) << "}";
        s << (i + 1 < rep.checks.size() ? ",\n" : "\n");
    }
    s << "  ],\n"
      << "  \"eps_hat\": " << fmt_real(rep.eps_hat) << ",\n"
      << "  \"theta_hat\": " << fmt_real(rep.theta_hat) << ",\n"
      << "  \"passed\": " << bool_str(rep.passed()) << ",\n"
      << "  \"manifest_hash\": \"" << ctx.hash << "\"\n"
      << "}\n";
    write_file(ctx.opts.out_dir + "/validate.json", s.str());
    return rep.passed() ? kExitOk : kExitDiagnostic;
}

int cmd_fiber(const Ctx& ctx) {
    for (const Itinerary& w : ctx.itineraries) {
        write_file(ctx.opts.out_dir + "/fiber_" + w.str() + "_" +
                       std::to_string(ctx.opts.depth) + ".json",
                   fiber_report_json(ctx, w, ctx.opts.depth));
    }
    return kExitOk;
}

int cmd_thickness(const Ctx& ctx) {
    const bool valid = validate(ctx.params).passed();
    std::ostringstream s;
    s << "# manifest_hash=" << ctx.hash << "\n";
    s << "itinerary,depth,tau_fiber,tau_s1,tau_s2,gap_lemma,hky,overlap_nonempty,"
         "hd_lower_bound\n";
    int code = kExitOk;
    for (const Itinerary& w : ctx.itineraries) {
        for (int n = 4; n <= ctx.opts.depth; ++n) {
            const auto [s1, s2] = preimage_components(ctx.params, w, n);
            const double tau = present(fiber_set(ctx.params, w, n).set).thickness;
            const double t1 = present(s1).thickness;
            const double t2 = present(s2).thickness;
            const bool gl = gap_lemma(t1, t2);
            const bool hk = hky_region(t1, t2);
            const bool nonempty = !IntervalUnion::intersect(s1, s2).empty();
            s << w.str() << "," << n << "," << fmt_real(tau) << "," << fmt_real(t1)
              << "," << fmt_real(t2) << "," << (gl ? 1 : 0) << "," << (hk ? 1 : 0)
              << "," << (nonempty ? 1 : 0) << "," << fmt_real(hd_lower_bound(tau))
              << "\n";
            if (valid && w.at(0) == 1 && !nonempty) code = kExitDiagnostic;
        }
    }
    write_file(ctx.opts.out_dir + "/thickness.csv", s.str());
    return code;
}

int cmd_overlap(const Ctx& ctx) {
    const bool valid = validate(ctx.params).passed();
    int code = kExitOk;
    for (const Itinerary& w : ctx.itineraries) {
        const auto [s1, s2] = preimage_components(ctx.params, w, ctx.opts.depth);
        const IntervalUnion inter = IntervalUnion::intersect(s1, s2);
        const double t1 = present(s1).thickness;
        const double t2 = present(s2).thickness;
        std::ostringstream s;
        s << "{\n"
          << "  \"itinerary\": \"" << w.str() << "\",\n"
          << "  \"depth\": " << ctx.opts.depth << ",\n"
          << "  \"s1_components\": " << s1.to_json() << ",\n"
          << "  \"s2_components\": " << s2.to_json() << ",\n"
          << "  \"tau_s1\": " << fmt_real_json(t1) << ",\n"
          << "  \"tau_s2\": " << fmt_real_json(t2) << ",\n"
          << "  \"interleaved\": " << bool_str(interleaved(s1, s2)) << ",\n"
          << "  \"gap_lemma\": " << bool_str(gap_lemma(t1, t2)) << ",\n"
          << "  \"hky_region\": " << bool_str(hky_region(t1, t2)) << ",\n"
          << "  \"intersection_thickness_bound\": "
          << fmt_real_json(intersection_thickness_bound(t1, t2)) << ",\n"
          << "  \"overlap_components\": " << inter.to_json() << ",\n"
          << "  \"nonempty\": " << bool_str(!inter.empty()) << ",\n"
          << "  \"manifest_hash\": \"" << ctx.hash << "\"\n"
          << "}\n";
        write_file(ctx.opts.out_dir + "/overlap_" + w.str() + ".json", s.str());
        if (valid && w.at(0) == 1 && inter.empty()) code = kExitDiagnostic;
    }
    return code;
}

// Lengthen a branch sequence until it supports the certified series depth,
// preferring the periodic continuation and falling back to the branch that
// keeps the lift inside the certified fiber set.
std::vector<std::uint8_t> lengthen_choices(const SystemParams& p, const Itinerary& w,
                                           double y, std::vector<std::uint8_t> choices,
                                           std::size_t target, int cert) {
    while (choices.size() < target) {
        bool placed = false;
        const std::uint8_t periodic = choices.back();
        for (std::uint8_t c : {periodic, static_cast<std::uint8_t>(3 - periodic)}) {
            choices.push_back(c);
            if (try_backward_lift(p, w, y, choices, cert)) {
                placed = true;
                break;
            }
            choices.pop_back();
        }
        if (!placed) {
            fail(errc::precision, "omega: cannot extend the lift to the required depth");
        }
    }
    return choices;
}

int cmd_omega(const Ctx& ctx) {
    const Itinerary& w = ctx.itineraries.front();
    double y;
    if (ctx.opts.y) {
        y = *ctx.opts.y;
    } else {
        const IntervalUnion over =
            overlap_set(ctx.params, w, std::min(kDepthCap, ctx.opts.depth + 6));
        if (over.empty()) {
            fail(errc::invalid_input, "omega: no overlap point available; pass --y");
        }
        std::size_t widest = 0;
        for (std::size_t i = 1; i < over.size(); ++i) {
            if (over.component(i).length() > over.component(widest).length()) widest = i;
        }
        y = 0.5 * (over.component(widest).lo + over.component(widest).hi);
    }
    const int cert = std::min(kDefaultCertDepth, ctx.opts.depth);
    auto c1 = parse_choices(ctx.opts.choices1);
    auto c2 = parse_choices(ctx.opts.choices2);
    std::size_t split = 0;
    while (split < std::min(c1.size(), c2.size()) && c1[split] == c2[split]) ++split;
    const std::size_t target = std::max(std::max(c1.size(), c2.size()), split + 4);
    c1 = lengthen_choices(ctx.params, w, y, std::move(c1), target, cert);
    c2 = lengthen_choices(ctx.params, w, y, std::move(c2), target, cert);
    const SeparationReport rep = slope_separation(ctx.params, w, y, c1, c2, 1e-14, cert);
    std::ostringstream s;
    s << "{\n"
      << "  \"itinerary\": \"" << w.str() << "\",\n"
      << "  \"y\": " << fmt_real(y) << ",\n"
      << "  \"m\": " << rep.m << ",\n"
      << "  \"delta_omega\": " << fmt_real(rep.delta_omega) << ",\n"
      << "  \"bound\": " << fmt_real(rep.separation_bound) << ",\n"
      << "  \"pass\": " << bool_str(rep.pass) << ",\n"
      << "  \"tail_bound\": " << fmt_real(rep.tail_bound) << ",\n"
      << "  \"cert_depth\": " << rep.cert_depth << ",\n"
      << "  \"manifest_hash\": \"" << ctx.hash << "\"\n"
      << "}\n";
    write_file(ctx.opts.out_dir + "/omega.json", s.str());
    return rep.pass ? kExitOk : kExitDiagnostic;
}

int cmd_cone(const Ctx& ctx) {
    const std::vector<Prehistory> samples =
        seeded_samples(ctx.params, ctx.opts.seed, 20, 4, kDefaultCertDepth);
    const double gamma = 0.99 * std::sqrt(ctx.params.beta * ctx.params.beta - 1.0);
    const ConeReport r1 = cone_verification(ctx.params, gamma, 1, samples);
    const ConeReport r2 = cone_verification(ctx.params, gamma, 2, samples);
    std::ostringstream s;
    auto emit = [&s](const char* name, const ConeReport& r) {
        s << "  \"" << name << "\": {\"N\": " << r.N << ", \"gamma\": " << fmt_real(r.gamma)
          << ", \"m_expand\": " << fmt_real(r.m_expand)
          << ", \"m_coexpand\": " << fmt_real(r.m_coexpand)
          << ", \"K\": " << fmt_real(r.K) << ", \"Kprime\": " << fmt_real(r.Kprime)
          << ", \"chain_ok\": " << bool_str(r.chain_ok)
          << ", \"pass\": " << bool_str(r.pass) << "}";
    };
    s << "{\n";
    emit("iterate_1", r1);
    s << ",\n";
    emit("iterate_2", r2);
    s << ",\n  \"manifest_hash\": \"" << ctx.hash << "\"\n}\n";
    write_file(ctx.opts.out_dir + "/cone.json", s.str());
    return (r1.pass && r2.pass && r1.chain_ok && r2.chain_ok) ? kExitOk : kExitDiagnostic;
}

int cmd_dimension(const Ctx& ctx) {
    const Itinerary& w = ctx.itineraries.front();
    const int deepest = std::clamp(ctx.opts.depth, 12, 20);
    const std::vector<int> depths = {deepest};
    const DimensionReport rep = dimension_report(ctx.params, w, depths, ctx.opts.seed);
    std::ostringstream s;
    s << "{\n"
      << "  \"itinerary\": \"" << w.str() << "\",\n"
      << "  \"depth\": " << deepest << ",\n"
      << "  \"t_u\": " << fmt_real(rep.t_u) << ",\n"
      << "  \"t_u_beta_bound\": " << fmt_real(rep.t_u_beta_bound) << ",\n"
      << "  \"t_u_bracket\": [" << fmt_real(rep.t_u_bracket_lo) << ", "
      << fmt_real(rep.t_u_bracket_hi) << "],\n"
      << "  \"t_s_lower\": " << fmt_real(rep.t_s_lower) << ",\n"
      << "  \"t_s_lower_dmax\": " << fmt_real(rep.t_s_lower_dmax) << ",\n"
      << "  \"t_s_eta1\": " << fmt_real(rep.t_s_eta1) << ",\n"
      << "  \"t_s_box\": " << fmt_real(rep.t_s_box) << ",\n"
      << "  \"box_r2\": " << fmt_real(rep.box_r2) << ",\n"
      << "  \"pt_bound\": " << fmt_real(rep.pt_bound) << ",\n"
      << "  \"tau_fiber\": " << fmt_real(rep.tau_fiber) << ",\n"
      << "  \"h_top\": " << fmt_real(rep.h_top) << ",\n"
      << "  \"census_d_max\": " << rep.census_d_max << ",\n"
      << "  \"stable_upper_note\": \"" << json_escape(rep.stable_upper_note) << "\",\n"
      << "  \"invariants_ok\": " << bool_str(rep.invariants_ok) << ",\n"
      << "  \"manifest_hash\": \"" << ctx.hash << "\"\n"
      << "}\n";
    write_file(ctx.opts.out_dir + "/dimension.json", s.str());
    return rep.invariants_ok ? kExitOk : kExitDiagnostic;
}

int cmd_census(const Ctx& ctx) {
    const bool valid = validate(ctx.params).passed();
    int code = kExitOk;
    for (const Itinerary& w : ctx.itineraries) {
        const CensusReport rep =
            preimage_census(ctx.params, w, ctx.opts.depth, ctx.opts.samples, ctx.opts.seed);
        std::ostringstream csv;
        csv << "# manifest_hash=" << ctx.hash << "\n";
        csv << "y,d_n,in_overlap_band\n";
        for (const CensusRow& row : rep.rows) {
            csv << fmt_real(row.y) << "," << row.d << "," << (row.in_overlap ? 1 : 0) << "\n";
        }
        write_file(ctx.opts.out_dir + "/census_" + w.str() + ".csv", csv.str());

        std::ostringstream s;
        s << "{\n"
          << "  \"itinerary\": \"" << w.str() << "\",\n"
          << "  \"depth\": " << rep.depth << ",\n"
          << "  \"seed\": " << rep.seed << ",\n"
          << "  \"samples\": " << rep.rows.size() << ",\n"
          << "  \"count_d0\": " << rep.count_d0 << ",\n"
          << "  \"count_d1\": " << rep.count_d1 << ",\n"
          << "  \"count_d2\": " << rep.count_d2 << ",\n"
          << "  \"d_max\": " << rep.d_max << ",\n"
          << "  \"manifest_hash\": \"" << ctx.hash << "\"\n"
          << "}\n";
        write_file(ctx.opts.out_dir + "/census_" + w.str() + ".json", s.str());
        if (valid && w.at(0) == 1 && (rep.count_d1 == 0 || rep.count_d2 == 0)) {
            code = kExitDiagnostic;
        }
    }
    return code;
}

} // namespace

SystemParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::config, "unreadable config file: " + path);
    std::map<std::string, std::vector<double>> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::istringstream key_in(line.substr(0, eq));
        std::string key;
        key_in >> key;
        std::istringstream val_in(line.substr(eq + 1));
        std::vector<double> vals;
        double v;
        while (val_in >> v) vals.push_back(v);
        if (!key.empty() && !vals.empty()) kv[key] = vals;
    }

    auto it = kv.find("alpha");
    if (it == kv.end()) fail(errc::config, "config missing alpha");
    SystemParams p = default_config(it->second[0]);

    auto interval = [&kv](const char* key, Interval& dst) {
        auto f = kv.find(key);
        if (f == kv.end()) return false;
        if (f->second.size() != 2) fail(errc::config, std::string(key) + " needs two endpoints");
        dst = {f->second[0], f->second[1]};
        return true;
    };
    const bool custom_i1 = interval("I1", p.I1);
    const bool custom_i2 = interval("I2", p.I2);

    const char* skeys[4] = {"s1", "s2", "s3", "s4"};
    for (int i = 0; i < 4; ++i) {
        auto f = kv.find(skeys[i]);
        if (f != kv.end()) p.s[static_cast<std::size_t>(i)] = f->second[0];
    }
    const char* pkeys[3] = {"psi1", "psi2", "psi3"};
    for (int i = 0; i < 3; ++i) {
        auto f = kv.find(pkeys[i]);
        if (f != kv.end()) p.psi[static_cast<std::size_t>(i)].coeffs = f->second;
    }
    if (auto f = kv.find("delta"); f != kv.end()) p.delta = f->second[0];
    if (auto f = kv.find("merge_tolerance"); f != kv.end()) p.merge_tolerance = f->second[0];
    if (auto f = kv.find("theta"); f != kv.end()) p.theta_alpha = f->second[0];
    if (auto f = kv.find("generalized_placement"); f != kv.end()) {
        p.generalized_placement = f->second[0] != 0.0;
    }

    if (auto f = kv.find("beta"); f != kv.end()) {
        p.beta = f->second[0];
    } else if (custom_i1 || custom_i2) {
        p.beta = 0.9 * std::min(p.lambda1(), p.lambda2());
    }
    if (auto f = kv.find("eps_alpha"); f != kv.end()) {
        p.eps_alpha = f->second[0];
    } else if (custom_i1 || custom_i2) {
        p.eps_alpha = std::max(std::abs(p.I1.lo - 0.5), std::abs(p.I2.lo - (1.0 - p.alpha)));
    }
    return p;
}

int run_command(const RunOptions& options, std::ostream& log) {
    if (std::find(kCommands.begin(), kCommands.end(), options.command) == kCommands.end()) {
        fail(errc::invalid_input, "unknown command: " + options.command);
    }

    Ctx ctx;
    ctx.opts = options;
    if (!options.config_path.empty()) {
        ctx.params = load_config(options.config_path);
    } else if (options.alpha) {
        ctx.params = default_config(*options.alpha);
    } else {
        fail(errc::invalid_input, "either --config or --alpha is required");
    }
    if (options.depth < 0 || options.depth > kDepthCap) {
        fail(errc::invalid_input, "depth outside [0, " + std::to_string(kDepthCap) + "]");
    }

    ctx.hash = hex64(fnv1a64(manifest_core(options)));
    for (const std::string& text : options.itineraries) {
        ctx.itineraries.push_back(Itinerary::parse(text));
    }
    if (ctx.itineraries.empty()) ctx.itineraries.push_back(Itinerary::parse("111"));
    for (const Itinerary& w : ctx.itineraries) {
        if (w.size() < 2) {
            fail(errc::invalid_input, "itineraries need at least two symbols");
        }
    }

    ensure_directory(options.out_dir);
    write_file(options.out_dir + "/manifest.json", manifest_json(options, ctx.hash));

    int code = kExitOk;
    auto run_one = [&](const std::string& name) {
        if (name == "validate") return cmd_validate(ctx);
        if (name == "fiber") return cmd_fiber(ctx);
        if (name == "thickness") return cmd_thickness(ctx);
        if (name == "overlap") return cmd_overlap(ctx);
        if (name == "omega") return cmd_omega(ctx);
        if (name == "cone") return cmd_cone(ctx);
        if (name == "dimension") return cmd_dimension(ctx);
        if (name == "census") return cmd_census(ctx);
        return kExitInputError;
    };

    if (options.command == "full-report") {
        for (const char* name : {"validate", "fiber", "thickness", "overlap",
                                 "omega", "cone", "dimension", "census"}) {
            code = std::max(code, run_one(name));
            log << name << ": done\n";
        }
    } else {
        code = run_one(options.command);
        log << options.command << ": done\n";
    }
    return code;
}

} // namespace skewlab
