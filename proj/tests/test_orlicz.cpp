#include <doctest.h>

#include <cmath>
#include <vector>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/orlicz.hpp"

using namespace ncorlicz;

namespace {

// central-difference oracle for the derivative
double fd_derivative(const OrliczFunction& phi, double t) {
    const double h = 1e-6 * std::max(1.0, t);
    return (phi.eval(t + h) - phi.eval(t - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("evaluation against hand values") {
    const auto plog = OrliczFunction::power_log(1.2, 0.5);
    CHECK(plog.eval(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(plog.eval(0.0) == 0.0);

    const auto pw = OrliczFunction::power(2.0);
    CHECK(pw.eval(3.0) == doctest::Approx(9.0).epsilon(1e-15));

    const auto psin = OrliczFunction::power_sin(4.0, 0.2);
    // at t=1 the oscillation vanishes: sin(p ln 1) = 0
    CHECK(psin.eval(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)pw.eval(-1.0), InvalidParameter);
}

TEST_CASE("derivatives match finite differences") {
    const std::vector<OrliczFunction> fns = {
        OrliczFunction::power(1.5),
        OrliczFunction::power(3.0),
        OrliczFunction::power_log(1.2, 0.5),
        OrliczFunction::power_log(2.5, 1.0),
        OrliczFunction::power_sin(4.0, 0.2),
    };
    for (const auto& phi : fns)
        for (double t : {0.03, 0.7, 1.0, 2.5, 40.0})
            CHECK(phi.eval_derivative(t) == doctest::Approx(fd_derivative(phi, t)).epsilon(1e-6));
}

TEST_CASE("parameter domains are enforced") {
    CHECK_THROWS_AS(OrliczFunction::power(0.5), InvalidParameter);
    CHECK_THROWS_AS(OrliczFunction::power_log(1.0, 0.5), InvalidParameter);
    CHECK_THROWS_AS(OrliczFunction::power_log(1.2, 0.0), InvalidParameter);
    CHECK_THROWS_AS(OrliczFunction::power_sin(4.0, 0.5), InvalidParameter);
    // p must exceed 1/(1-2c) for convexity
    CHECK_THROWS_AS(OrliczFunction::power_sin(1.2, 0.2), InvalidParameter);
    CHECK_NOTHROW(OrliczFunction::power_sin(1.7, 0.2));
}

TEST_CASE("midpoint convexity on random pairs") {
    const std::vector<OrliczFunction> fns = {
        OrliczFunction::power(1.0),
        OrliczFunction::power(2.0),
        OrliczFunction::power_log(1.2, 0.5),
        OrliczFunction::power_sin(4.0, 0.2),
    };
    for (const auto& phi : fns) {
        double s = 0.013;
        for (int i = 0; i < 60; ++i) {
            const double t = s * 1.9 + 0.2;
            const double lhs = phi.eval(0.5 * (s + t));
            const double rhs = 0.5 * (phi.eval(s) + phi.eval(t));
            CHECK(lhs <= rhs + 1e-12 * std::max(1.0, rhs));
            s *= 1.31;
            if (s > 1e3) s = 0.017;
        }
    }
}

TEST_CASE("growth function basics") {
    const auto pw = OrliczFunction::power(2.0);
    CHECK(pw.growth_function(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pw.growth_function(2.0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(pw.growth_function(0.5) == doctest::Approx(0.25).epsilon(1e-9));

    const auto plog = OrliczFunction::power_log(1.2, 0.5);
    // the sup dominates every specific ratio
    for (double u : {0.01, 0.3, 1.0, 7.0, 300.0})
        CHECK(plog.growth_function(3.0) >= plog.eval(3.0 * u) / plog.eval(u) - 1e-9);
    // submultiplicative up to grid resolution
    for (double s : {0.7, 1.8, 4.0})
        for (double t : {0.4, 2.5}) {
            const double lhs = plog.growth_function(s * t);
            const double rhs = plog.growth_function(s) * plog.growth_function(t);
            CHECK(lhs <= rhs * 1.01);
        }
}

TEST_CASE("index estimates hit the known values") {
    const auto plog = OrliczFunction::power_log(1.2, 0.5);
    const auto& e1 = plog.indices();
    CHECK(std::fabs(e1.p_phi - 1.2) < 5e-2);
    CHECK(std::fabs(e1.q_phi - 1.7) < 5e-2);
    CHECK(e1.p_phi <= e1.q_phi);

    const auto psin = OrliczFunction::power_sin(4.0, 0.2);
    const auto& e2 = psin.indices();
    CHECK(std::fabs(e2.p_phi - 4.0) < 5e-2);
    CHECK(std::fabs(e2.q_phi - 4.0) < 5e-2);

    const auto pw = OrliczFunction::power(1.5);
    const auto& e3 = pw.indices();
    CHECK(std::fabs(e3.p_phi - 1.5) < 1e-2);
    CHECK(std::fabs(e3.q_phi - 1.5) < 1e-2);
}

TEST_CASE("doubling constants") {
    for (double r : {1.0, 1.5, 2.0, 3.0}) {
        const auto pw = OrliczFunction::power(r);
        const auto k = pw.delta2_constant();
        REQUIRE(k.has_value());
        CHECK(*k == doctest::Approx(std::pow(2.0, r)).epsilon(1e-9));
    }
    CHECK(OrliczFunction::power_log(1.2, 0.5).delta2_constant().has_value());
    CHECK(OrliczFunction::power_sin(4.0, 0.2).delta2_constant().has_value());

    // exponential growth fails the doubling condition
    const auto ex = OrliczFunction::custom("expm1", [](double t) { return std::expm1(t); });
    CHECK_FALSE(ex.delta2_constant().has_value());
}

TEST_CASE("derivative ratio sup") {
    CHECK(OrliczFunction::power(2.0).derivative_ratio_sup() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(OrliczFunction::power(3.0).derivative_ratio_sup() == doctest::Approx(3.0).epsilon(1e-9));
    // t Phi'/Phi for the log family tends to a+b at 0 and a at infinity
    CHECK(OrliczFunction::power_log(1.2, 0.5).derivative_ratio_sup() ==
          doctest::Approx(1.7).epsilon(1e-3));
}

TEST_CASE("integral bounds: power closed forms") {
    const auto pw = OrliczFunction::power(2.0);
    CHECK(pw.integral_bound_low(1.5) == doctest::Approx(1.0 / 0.5).epsilon(1e-6));
    CHECK(pw.integral_bound_low(1.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pw.integral_bound_high(3.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pw.integral_bound_high(2.5) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS((void)pw.integral_bound_low(2.1), DivergentIntegral);
    CHECK_THROWS_AS((void)pw.integral_bound_high(1.9), DivergentIntegral);
    // below the admissible range entirely: a parameter error, not divergence
    CHECK_THROWS_AS((void)pw.integral_bound_low(0.9), InvalidParameter);

    const auto pw3 = OrliczFunction::power(3.0);
    CHECK(pw3.integral_bound_low(2.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pw3.integral_bound_high(4.5) == doctest::Approx(1.0 / 1.5).epsilon(1e-6));
    // a wide exponent gap exercises the far tail of the quadrature
    CHECK(pw3.integral_bound_low(1.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(OrliczFunction::power(2.0).integral_bound_high(4.0) ==
          doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("integral bounds: log family converges inside the index interval") {
    const auto plog = OrliczFunction::power_log(1.2, 0.5);
    const double b0 = plog.integral_bound_low(1.05);
    const double b1 = plog.integral_bound_high(3.0);
    CHECK(b0 > 0.0);
    CHECK(std::isfinite(b0));
    CHECK(b1 > 0.0);
    CHECK(std::isfinite(b1));
    // outside the interval the defining integrals diverge
    CHECK_THROWS_AS((void)plog.integral_bound_low(1.5), DivergentIntegral);
    CHECK_THROWS_AS((void)plog.integral_bound_high(1.5), DivergentIntegral);
}

TEST_CASE("spec parsing") {
    const auto a = parse_phi_spec("power:p=2");
    CHECK(a.family() == PhiFamily::Power);
    CHECK(a.param_a() == 2.0);

    const auto b = parse_phi_spec("powerlog:a=1.2,b=0.5");
    CHECK(b.family() == PhiFamily::PowerLog);
    CHECK(b.param_a() == 1.2);
    CHECK(b.param_b() == 0.5);

    const auto c = parse_phi_spec("powersin:p=4,c=0.2");
    CHECK(c.family() == PhiFamily::PowerSin);

    CHECK_THROWS_AS(parse_phi_spec("gauss:p=2"), InvalidParameter);
    CHECK_THROWS_AS(parse_phi_spec("power:q=2"), InvalidParameter);
    CHECK_THROWS_AS(parse_phi_spec("powerlog:a=1.2"), InvalidParameter);
    CHECK_THROWS_AS(parse_phi_spec("powerlog:a=1.2,b=0.5,c=1"), InvalidParameter);
    CHECK_THROWS_AS(parse_phi_spec("power:p=0.5"), InvalidParameter);
    CHECK_THROWS_AS(parse_phi_spec("power:p=abc"), InvalidParameter);

    // offending keys are named
    try {
        parse_phi_spec("powerlog:a=1.2,z=0.5");
        FAIL("expected a parse error");
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find("z") != std::string::npos);
    }
}
