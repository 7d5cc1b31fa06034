#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/noise_fourier.hpp"
#include "ncorlicz/random.hpp"

using namespace ncorlicz;

TEST_CASE("rademacher mode parsing") {
    const auto e = RademacherMode::parse("exact", 3);
    CHECK(e.kind == RademacherMode::Kind::Exact);
    CHECK(e.spec() == "exact");
    const auto m = RademacherMode::parse("mc:500", 3);
    CHECK(m.kind == RademacherMode::Kind::MonteCarlo);
    CHECK(m.samples == 500);
    CHECK(m.seed == 3);
    CHECK(m.spec() == "mc:500");
    CHECK_THROWS_AS(RademacherMode::parse("approx", 0), InvalidParameter);
    CHECK_THROWS_AS(RademacherMode::parse("mc:0", 0), InvalidParameter);
}

TEST_CASE("single operator: the average is the plain moment") {
    RngStream rng(2);
    const Matrix x = random_operator(rng, 5, EnsembleKind::Gaussian);
    const auto phi = OrliczFunction::power_log(1.2, 0.5);
    RademacherMode mode;
    const auto r = rademacher_phi_moment(phi, {x}, mode);
    CHECK(r.value == doctest::Approx(trace_phi_moment(phi, x)).epsilon(1e-15));
    CHECK(r.std_error == 0.0);
    CHECK(r.evaluations == 2);
}

TEST_CASE("quadratic moments see no signs") {
    RngStream rng(6);
    const auto xs = random_sequence(rng, 6, 5, EnsembleKind::Gaussian);
    const auto pw2 = OrliczFunction::power(2.0);
    RademacherMode mode;
    double want = 0.0;
    for (const auto& x : xs) want += normalized_trace_real(x.adjoint() * x);
    CHECK(rademacher_phi_moment(pw2, xs, mode).value == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("two scalars against a direct enumeration") {
    Matrix x(1, 1), y(1, 1);
    x(0, 0) = 0.8;
    y(0, 0) = -1.7;
    const auto phi = OrliczFunction::power_log(1.2, 0.5);
    RademacherMode mode;
    const double got = rademacher_phi_moment(phi, {x, y}, mode).value;
    const double want = 0.5 * (phi.eval(std::abs(0.8 + 1.7)) + phi.eval(std::abs(0.8 - 1.7)));
    CHECK(got == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("hermitian pair at the fourth power: trace-monomial expansion") {
    RngStream rng(11);
    const Matrix x = random_operator(rng, 6, EnsembleKind::Hermitian);
    const Matrix y = random_operator(rng, 6, EnsembleKind::Hermitian);
    const auto pw4 = OrliczFunction::power(4.0);
    RademacherMode mode;
    const double got = rademacher_phi_moment(pw4, {x, y}, mode).value;
    const Matrix x2 = x * x, y2 = y * y;
    const double want = normalized_trace_real(x2 * x2) + normalized_trace_real(y2 * y2) +
                        4.0 * normalized_trace_real(x2 * y2) +
                        2.0 * normalized_trace_real(x * y * x * y);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("exact averages are bit-stable under permutation and global flips") {
    RngStream rng(19);
    auto xs = random_sequence(rng, 4, 6, EnsembleKind::Gaussian);
    const auto phi = OrliczFunction::power_log(1.2, 0.5);
    RademacherMode mode;
    const double base = rademacher_phi_moment(phi, xs, mode).value;

    std::vector<Matrix> perm = {xs[3], xs[0], xs[5], xs[1], xs[4], xs[2]};
    CHECK(rademacher_phi_moment(phi, perm, mode).value == base);

    std::vector<Matrix> flipped;
    for (const auto& x : xs) flipped.push_back(-1.0 * x);
    CHECK(rademacher_phi_moment(phi, flipped, mode).value == base);
}

TEST_CASE("exact enumeration limit") {
    RngStream rng(1);
    const auto xs = random_sequence(rng, 2, 15, EnsembleKind::Gaussian);
    RademacherMode mode;
    try {
        rademacher_phi_moment(OrliczFunction::power(2.0), xs, mode);
        FAIL("expected a limit error");
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find("mc:") != std::string::npos);
    }
}

TEST_CASE("monte carlo reproducibility and consistency") {
    RngStream rng(23);
    const auto xs = random_sequence(rng, 4, 5, EnsembleKind::Gaussian);
    const auto phi = OrliczFunction::power_log(1.2, 0.5);
    const auto exact = rademacher_phi_moment(phi, xs, RademacherMode{});

    RademacherMode mc;
    mc.kind = RademacherMode::Kind::MonteCarlo;
    mc.samples = 4000;
    mc.seed = 77;
    const auto a = rademacher_phi_moment(phi, xs, mc);
    const auto b = rademacher_phi_moment(phi, xs, mc);
    CHECK(a.value == b.value);
    CHECK(a.std_error > 0.0);
    CHECK(std::fabs(a.value - exact.value) <= 6.0 * a.std_error);

    mc.seed = 78;
    CHECK(rademacher_phi_moment(phi, xs, mc).value != a.value);
}

TEST_CASE("trig polynomial evaluation") {
    TrigPolynomial f;
    f.dim = 2;
    Matrix c(2, 2);
    c(0, 1) = 1.0;
    f.add(3, c);
    f.add(3, c);  // accumulates
    CHECK(f.coeffs.at(3)(0, 1) == cd(2.0, 0.0));
    CHECK(f.max_abs_frequency() == 3);

    // value at the j-th N-th root: coefficient times w^{3j}
    const Matrix v = f.evaluate_at_root(8, 1);
    const double ang = 2.0 * 3.14159265358979323846 * 3.0 / 8.0;
    CHECK(std::abs(v(0, 1) - 2.0 * std::exp(cd(0, ang))) <= 1e-12);
}

TEST_CASE("lacunary embedding and block multipliers") {
    RngStream rng(5);
    const auto xs = random_sequence(rng, 4, 4, EnsembleKind::Gaussian);
    const TrigPolynomial f = lacunary_embed(xs);
    REQUIRE(f.coeffs.size() == 4);
    CHECK(f.coeffs.count(1) == 1);
    CHECK(f.coeffs.count(3) == 1);
    CHECK(f.coeffs.count(9) == 1);
    CHECK(f.coeffs.count(27) == 1);

    // each block isolates exactly one lacunary frequency
    for (int n = 0; n < block_count(f); ++n) {
        const TrigPolynomial bn = multiplier_block(f, n);
        if (n <= 3) {
            REQUIRE(bn.coeffs.size() == 1);
            long long want = 1;
            for (int k = 0; k < n; ++k) want *= 3;
            CHECK(bn.coeffs.begin()->first == want);
            CHECK((bn.coeffs.begin()->second - xs[std::size_t(n)]).frobenius_norm() == 0.0);
        } else {
            CHECK(bn.coeffs.empty());
        }
    }

    // idempotent and mutually disjoint
    const TrigPolynomial b2 = multiplier_block(f, 2);
    const TrigPolynomial b22 = multiplier_block(b2, 2);
    CHECK(b22.coeffs.size() == b2.coeffs.size());
    CHECK(multiplier_block(b2, 1).coeffs.empty());

    // a frequency between blocks is dropped by all of them
    TrigPolynomial g;
    g.dim = 4;
    g.add(4, xs[0]);  // 4 is in neither (1.5, 3] nor (4.5, 9]
    for (int n = 0; n < block_count(g); ++n) CHECK(multiplier_block(g, n).coeffs.empty());
}

TEST_CASE("circle averages") {
    RngStream rng(29);
    const auto xs = random_sequence(rng, 4, 3, EnsembleKind::Gaussian);
    const TrigPolynomial f = lacunary_embed(xs);
    const auto pw2 = OrliczFunction::power(2.0);

    // quadratic circle average is the coefficient sum of squares
    double want = 0.0;
    for (const auto& x : xs) want += normalized_trace_real(x.adjoint() * x);
    const long long nq = 2 * f.max_abs_frequency() + 1;
    CHECK(circle_phi_average(pw2, f, nq) == doctest::Approx(want).epsilon(1e-12));

    // a constant polynomial averages to its own moment
    TrigPolynomial c;
    c.dim = 4;
    c.add(0, xs[0]);
    const auto plog = OrliczFunction::power_log(1.2, 0.5);
    CHECK(circle_phi_average(plog, c, 5) ==
          doctest::Approx(trace_phi_moment(plog, xs[0])).epsilon(1e-14));

    // insufficient quadrature is rejected with the required minimum named
    try {
        circle_phi_average(pw2, f, nq - 1);
        FAIL("expected a quadrature error");
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find(std::to_string(nq)) != std::string::npos);
    }
}

TEST_CASE("block square moments") {
    RngStream rng(31);
    const auto xs = random_sequence(rng, 4, 3, EnsembleKind::Gaussian);
    const TrigPolynomial f = lacunary_embed(xs);
    const auto plog = OrliczFunction::power_log(1.2, 0.5);
    const long long nq = 2 * f.max_abs_frequency() + 1;

    // for lacunary data the block square function is z-independent
    Matrix g(4, 4);
    for (const auto& x : xs) g += x.adjoint() * x;
    const double want = trace_phi_moment(plog, psd_sqrt(g));
    CHECK(block_square_moment(plog, f, nq) == doctest::Approx(want).epsilon(1e-12));

    // quadrature refinement is stable for non-lacunary data
    TrigPolynomial h;
    h.dim = 4;
    h.add(1, xs[0]);
    h.add(2, xs[1]);
    h.add(3, xs[2]);
    const double a = block_square_moment(plog, h, 501);
    const double b = block_square_moment(plog, h, 1003);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}
