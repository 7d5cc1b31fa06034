#include "ncorlicz/noise_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/util.hpp"

namespace ncorlicz {

namespace {
constexpr int kExactLimit = 14;

double phi_moment_of_sigma(const OrliczFunction& phi, const std::vector<double>& sv) {
    double acc = 0.0;
    for (double v : sv) acc += phi.eval(v);
    return acc / double(sv.size());
}
}  // namespace

RademacherMode RademacherMode::parse(const std::string& text, std::uint64_t seed) {
    RademacherMode m;
    if (text == "exact") {
        m.kind = Kind::Exact;
        return m;
    }
    if (text.rfind("mc:", 0) == 0) {
        const std::string num = text.substr(3);
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(num, &pos);
        } catch (const std::exception&) {
            throw InvalidParameter("rademacher mode: bad sample count in '" + text + "'");
        }
        if (pos != num.size() || v <= 0)
            throw InvalidParameter("rademacher mode: bad sample count in '" + text + "'");
        m.kind = Kind::MonteCarlo;
        m.samples = v;
        m.seed = seed;
        return m;
    }
    throw InvalidParameter("rademacher mode: expected exact or mc:<samples>, got '" + text +
                           "'");
}

std::string RademacherMode::spec() const {
    if (kind == Kind::Exact) return "exact";
    return "mc:" + std::to_string(samples);
}

RademacherMoment rademacher_phi_moment(const OrliczFunction& phi,
                                       const std::vector<Matrix>& xs, RademacherMode mode) {
    if (xs.empty()) throw InvalidParameter("rademacher_phi_moment: empty sequence");
    const std::size_t n = xs.size();
    const std::size_t d = xs.front().rows();
    for (const auto& x : xs)
        if (x.rows() != d || x.cols() != d)
            throw DimensionMismatch("rademacher_phi_moment: mixed dimensions");

    RademacherMoment out;
    if (mode.kind == RademacherMode::Kind::Exact) {
        if (n > kExactLimit)
            throw InvalidParameter(
                "rademacher_phi_moment: exact enumeration is limited to " +
                std::to_string(kExactLimit) + " operators (2^n sign patterns); use mc:<samples>");
        const std::size_t patterns = std::size_t(1) << n;
        std::vector<double> vals(patterns);
        std::vector<double> terms_re(n), terms_im(n);
        Matrix y(d, d);
        for (std::size_t bits = 0; bits < patterns; ++bits) {
            // per-entry order-independent sums keep the result bit-stable
            // under permutations of xs
            for (std::size_t idx = 0; idx < d * d; ++idx) {
                for (std::size_t k = 0; k < n; ++k) {
                    const double s = (bits >> k) & 1 ? -1.0 : 1.0;
                    terms_re[k] = s * xs[k].data()[idx].real();
                    terms_im[k] = s * xs[k].data()[idx].imag();
                }
                y.data()[idx] = cd(exact_sum(terms_re), exact_sum(terms_im));
            }
            vals[bits] = phi_moment_of_sigma(phi, singular_values_desc(y));
        }
        out.value = exact_sum(vals) / double(patterns);
        out.std_error = 0.0;
        out.evaluations = long(patterns);
        return out;
    }

    RngStream rng(mix64(mode.seed ^ 0x72616465ULL));
    double sum = 0.0, sumsq = 0.0;
    Matrix y(d, d);
    std::vector<double> sg(n);
    for (long s = 0; s < mode.samples; ++s) {
        std::uint64_t word = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k % 64 == 0) word = rng.bits();
            sg[k] = (word >> (k % 64)) & 1 ? -1.0 : 1.0;
        }
        for (std::size_t idx = 0; idx < d * d; ++idx) {
            cd acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += sg[k] * xs[k].data()[idx];
            y.data()[idx] = acc;
        }
        const double v = phi_moment_of_sigma(phi, singular_values_desc(y));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / double(mode.samples);
    out.value = mean;
    if (mode.samples > 1) {
        const double var =
            std::max(0.0, (sumsq - double(mode.samples) * mean * mean) / double(mode.samples - 1));
        out.std_error = std::sqrt(var / double(mode.samples));
    }
    out.evaluations = mode.samples;
    return out;
}

void TrigPolynomial::add(long long frequency, const Matrix& c) {
    if (dim == 0) dim = c.rows();
    if (c.rows() != dim || c.cols() != dim)
        throw DimensionMismatch("trig polynomial: coefficient dimension mismatch");
    auto it = coeffs.find(frequency);
    if (it == coeffs.end()) coeffs.emplace(frequency, c);
    else it->second += c;
}

Matrix TrigPolynomial::evaluate_at_root(long long n_roots, long long j) const {
    if (n_roots <= 0) throw InvalidParameter("trig polynomial: need a positive root count");
    Matrix acc(dim, dim);
    for (const auto& [freq, c] : coeffs) {
        // exponent reduced mod N first: k*j never overflows and the angle
        // stays accurate for huge frequencies
        const long long km = ((freq % n_roots) + n_roots) % n_roots;
        const long long e = (km * (j % n_roots)) % n_roots;
        const double theta = 2.0 * std::numbers::pi * double(e) / double(n_roots);
        acc += cd(std::cos(theta), std::sin(theta)) * c;
    }
    return acc;
}

long long TrigPolynomial::max_abs_frequency() const {
    long long m = 0;
    for (const auto& [freq, c] : coeffs) m = std::max(m, std::llabs(freq));
    return m;
}

TrigPolynomial lacunary_embed(const std::vector<Matrix>& xs) {
    if (xs.size() > 20)
        throw InvalidParameter("lacunary_embed: at most 20 operators (frequency 3^k overflow)");
    TrigPolynomial f;
    long long freq = 1;
    for (const auto& x : xs) {
        f.add(freq, x);
        freq *= 3;
    }
    return f;
}

namespace {
long long pow3(int n) {
    long long v = 1;
    for (int k = 0; k < n; ++k) v *= 3;
    return v;
}
}  // namespace

TrigPolynomial multiplier_block(const TrigPolynomial& f, int n) {
    if (n < 0 || n > 38) throw InvalidParameter("multiplier_block: n must be in 0..38");
    const long long top = pow3(n);
    TrigPolynomial out;
    out.dim = f.dim;
    for (const auto& [freq, c] : f.coeffs)
        if (freq > 0 && 2 * freq > top && freq <= top) out.add(freq, c);
    return out;
}

int block_count(const TrigPolynomial& f) {
    const long long m = f.max_abs_frequency();
    int n = 0;
    while (pow3(n) < m) ++n;
    return n + 1;
}

double circle_phi_average(const OrliczFunction& phi, const TrigPolynomial& f,
                          long long quad_points) {
    const long long need = 2 * f.max_abs_frequency() + 1;
    if (quad_points < need)
        throw InvalidParameter("circle_phi_average: need at least " + std::to_string(need) +
                               " quadrature points (2*max|frequency|+1), got " +
                               std::to_string(quad_points));
    if (f.dim == 0) return 0.0;
    std::vector<double> vals(static_cast<std::size_t>(quad_points), 0.0);
    for (long long j = 0; j < quad_points; ++j)
        vals[std::size_t(j)] =
            phi_moment_of_sigma(phi, singular_values_desc(f.evaluate_at_root(quad_points, j)));
    return exact_sum(vals) / double(quad_points);
}

double block_square_moment(const OrliczFunction& phi, const TrigPolynomial& f,
                           long long quad_points) {
    const long long need = 2 * f.max_abs_frequency() + 1;
    if (quad_points < need)
        throw InvalidParameter("block_square_moment: need at least " + std::to_string(need) +
                               " quadrature points (2*max|frequency|+1), got " +
                               std::to_string(quad_points));
    if (f.dim == 0) return 0.0;
    const int blocks = block_count(f);
    std::vector<TrigPolynomial> parts;
    for (int n = 0; n < blocks; ++n) {
        TrigPolynomial p = multiplier_block(f, n);
        if (!p.coeffs.empty()) parts.push_back(std::move(p));
    }
    if (parts.empty()) return 0.0;

    std::vector<double> vals(static_cast<std::size_t>(quad_points), 0.0);
    for (long long j = 0; j < quad_points; ++j) {
        Matrix g(f.dim, f.dim);
        for (const auto& p : parts) {
            const Matrix b = p.evaluate_at_root(quad_points, j);
            g += b.adjoint() * b;
        }
        const auto eig = eig_hermitian(g);
        double acc = 0.0;
        for (double lam : eig.eigenvalues) acc += phi.eval(lam > 0.0 ? std::sqrt(lam) : 0.0);
        vals[std::size_t(j)] = acc / double(f.dim);
    }
    return exact_sum(vals) / double(quad_points);
}

}  // namespace ncorlicz
