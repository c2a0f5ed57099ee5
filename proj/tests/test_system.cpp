#include <doctest.h>

#include <cmath>

#include "skewlab/errors.hpp"
#include "skewlab/system.hpp"

using namespace skewlab;

TEST_SUITE("system") {

TEST_CASE("default_config pins the exact-linear instance") {
    const SystemParams p = default_config(0.01);
    CHECK(p.I1.lo == doctest::Approx(0.4999625).epsilon(1e-15));
    CHECK(p.I1.hi == doctest::Approx(0.4999875).epsilon(1e-15));
    CHECK(p.lambda1() == doctest::Approx(40000.0).epsilon(1e-9));
    CHECK(p.lambda2() == doctest::Approx(40000.0).epsilon(1e-9));
    CHECK(p.beta == doctest::Approx(36000.0).epsilon(1e-12));
    CHECK(p.beta * p.beta == doctest::Approx(1.296e9).epsilon(1e-12));
    CHECK(p.beta * p.beta > p.lambda1());
    CHECK(p.lambda1() > p.beta);
    CHECK(p.eps_alpha == doctest::Approx(3.75e-5).epsilon(1e-12));

    CHECK_THROWS_AS(default_config(0.0), error);
    CHECK_THROWS_AS(default_config(0.2), error);
}

TEST_CASE("validate passes the default config and reports both sides") {
    const SystemParams p = default_config(0.01);
    const ValidationReport rep = validate(p);
    for (const ValidationCheck& c : rep.checks) {
        INFO(c.name, " lhs=", c.lhs, " rhs=", c.rhs);
        CHECK(c.pass);
    }
    CHECK(rep.passed());
    CHECK(rep.theta_hat == doctest::Approx(0.0));
    CHECK(rep.eps_hat == doctest::Approx(3.75e-5).epsilon(1e-12));

    const ValidationCheck* c1 = rep.find("overlap_c1");
    REQUIRE(c1 != nullptr);
    CHECK(c1->lhs == doctest::Approx(0.505).epsilon(1e-12));
    CHECK(c1->rhs == doctest::Approx(0.5075).epsilon(1e-12));
}

TEST_CASE("validate flags a contraction factor far from the model") {
    SystemParams p = default_config(0.01);
    p.s[0] = 0.7;
    const ValidationReport rep = validate(p);
    const ValidationCheck* theta = rep.find("model_distance");
    REQUIRE(theta != nullptr);
    CHECK_FALSE(theta->pass);
    CHECK(theta->lhs == doctest::Approx(0.2).epsilon(1e-12));
    CHECK_FALSE(rep.passed());
}

TEST_CASE("validate flags a flat offset breaking the fiber gap window") {
    SystemParams p = default_config(0.01);
    p.psi[2].coeffs = {1.3};
    const ValidationReport rep = validate(p);
    const ValidationCheck* upper = rep.find("gap_c2_upper");
    REQUIRE(upper != nullptr);
    CHECK_FALSE(upper->pass);
    CHECK(upper->lhs >= 0.01); // the gap expression far exceeds alpha
    CHECK_FALSE(rep.passed());
}

TEST_CASE("base_point: constant itinerary hits the affine fixed point") {
    const SystemParams p = default_config(0.01);
    const Itinerary w = Itinerary::parse("111111111111111111");
    const double x = base_point(p, w);
    const double fixed = p.I1.lo / (1.0 - p.I1.length());
    CHECK(x == doctest::Approx(fixed).epsilon(1e-14));
    CHECK(p.g(x) == doctest::Approx(x).epsilon(1e-9));
    CHECK(p.I1.contains(x));

    CHECK_THROWS_AS(base_point(p, Itinerary()), error);
}

TEST_CASE("base_point: leading symbol fixes the branch domain") {
    const SystemParams p = default_config(0.01);
    for (const char* txt : {"12", "1221", "121212"}) {
        const double x = base_point(p, Itinerary::parse(txt));
        CHECK(p.I1.contains(x));
    }
    CHECK(p.I2.contains(base_point(p, Itinerary::parse("21"))));
}

TEST_CASE("base_point: alternating itinerary is a period-2 point") {
    const SystemParams p = default_config(0.01);
    const Itinerary w = Itinerary::parse("121212121212121212121212");
    const double x = base_point(p, w);
    // two forward branches magnify half-ulp seed noise by their derivatives
    CHECK(std::abs(p.g(p.g(x)) - x) < 1e-9);
    CHECK(std::abs(p.g(x) - x) > 1e-3);
}

TEST_CASE("coding consistency: g maps addressed points to shifted addresses") {
    const SystemParams p = default_config(0.02);
    for (const char* txt : {"1121121121121121", "2212212212212212", "1222111221112221"}) {
        const Itinerary w = Itinerary::parse(txt);
        // seed-truncation tolerance plus the float noise of one g step
        const double tol = std::pow(p.beta, -static_cast<double>(w.size()) + 1) +
                           8 * std::max(p.lambda1(), p.lambda2()) * 1e-16;
        CHECK(std::abs(p.g(base_point(p, w)) - base_point(p, w.shifted())) <= tol);
    }
    // with a short address the truncation term is the visible one
    const Itinerary shorty = Itinerary::parse("121");
    CHECK(std::abs(p.g(base_point(p, shorty)) - base_point(p, shorty.shifted())) <=
          std::pow(p.beta, -2.0));
}

TEST_CASE("base branches are increasing and onto the unit interval") {
    const SystemParams p = default_config(0.01);
    CHECK(p.g(p.I1.lo) == doctest::Approx(0.0));
    CHECK(p.g(p.I1.hi) == doctest::Approx(1.0));
    CHECK(p.g(p.I2.lo) == doctest::Approx(0.0));
    CHECK(p.g(p.I2.hi) == doctest::Approx(1.0));
    CHECK(p.g_inverse(1, 0.0) == p.I1.lo);
    CHECK(p.g_inverse(2, 1.0) == p.I2.hi);
}

TEST_CASE("preimage_itineraries prepends both symbols") {
    const Itinerary w = Itinerary::parse("2");
    const auto [a, b] = preimage_itineraries(w);
    CHECK(a.str() == "12");
    CHECK(b.str() == "22");
    CHECK(a.shifted() == w);
    CHECK(b.shifted() == w);

    const SystemParams p = default_config(0.01);
    const Itinerary deep = Itinerary::parse("1212121212121212");
    const double x1 = base_point(p, deep.prepended(1));
    CHECK(p.I1.contains(x1));
    // the preimage point refines into the sub-cylinder of its g-image
    CHECK(p.I1.contains(p.g(x1)));
}

TEST_CASE("fiber_map selects branches by the leading symbol pair") {
    const SystemParams p = default_config(0.01);

    const Itinerary w11 = Itinerary::parse("1111111111111111");
    const double x11 = base_point(p, w11);
    CHECK(fiber_map(p, w11, 1.0) == doctest::Approx(x11 + 0.5).epsilon(1e-15));

    const Itinerary w22 = Itinerary::parse("2222222222222222");
    CHECK(fiber_map(p, w22, 0.8) == doctest::Approx(0.4).epsilon(1e-15));

    const Itinerary w12 = Itinerary::parse("1222222222222222");
    CHECK(fiber_map(p, w12, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(fiber_map(p, Itinerary::parse("1"), 0.5), error);
}

TEST_CASE("fiber_derivatives per branch") {
    const SystemParams p = default_config(0.01);
    const auto d11 = fiber_derivatives(p, Itinerary::parse("1111111111111111"), 0.3);
    CHECK(d11.first == doctest::Approx(1.0));
    CHECK(d11.second == doctest::Approx(0.5));

    const auto d21 = fiber_derivatives(p, Itinerary::parse("2111111111111111"), 0.3);
    CHECK(d21.first == doctest::Approx(-1.0));
    CHECK(d21.second == doctest::Approx(0.5));

    const auto d22 = fiber_derivatives(p, Itinerary::parse("2222222222222222"), 0.3);
    CHECK(d22.first == doctest::Approx(0.0));
    CHECK(d22.second == doctest::Approx(0.5));

    const auto d12 = fiber_derivatives(p, Itinerary::parse("1222222222222222"), 0.3);
    CHECK(d12.first == doctest::Approx(0.0));
    CHECK(std::abs(d12.second) == doctest::Approx(0.5));
    CHECK(std::abs(d12.second) < p.delta);
}

TEST_CASE("fiber branches keep the unit interval for validated parameters") {
    const SystemParams p = default_config(0.01);
    for (const char* txt : {"11", "21", "12", "22"}) {
        const Itinerary w = Itinerary::parse(txt).extended_to(16);
        for (double y : {0.0, 1.0}) {
            const double v = fiber_map(p, w, y);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("itinerary parsing and extension") {
    CHECK_THROWS_AS(Itinerary::parse("103"), error);
    const Itinerary w = Itinerary::parse("12");
    CHECK(w.extended_to(5).str() == "12222");
    CHECK(w.symbol_at(10) == 2);
    CHECK(w.prepended(1).str() == "112");
}

} // TEST_SUITE
