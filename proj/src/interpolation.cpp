#include "ncorlicz/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/util.hpp"

namespace ncorlicz {

std::pair<Matrix, Matrix> split(const Matrix& x, double alpha) {
    if (!(alpha > 0.0)) throw InvalidParameter("split: alpha must be > 0");
    const Matrix p = spectral_projection(x, alpha);
    const Matrix x0 = x * p;
    return {x0, x - x0};
}

namespace {
// exact sup_alpha alpha^p lambda_alpha(y) from descending singular values
double weak_sup(const std::vector<double>& sv, double p) {
    const double d = double(sv.size());
    double best = 0.0;
    for (std::size_t k = 0; k < sv.size(); ++k) {
        if (sv[k] <= 0.0) break;
        best = std::max(best, std::pow(sv[k], p) * (double(k + 1) / d));
    }
    return best;
}
}  // namespace

double weak_type_ratio(const SublinearOperatorHandle& T, double p,
                       const std::vector<Matrix>& ensemble) {
    if (ensemble.empty()) throw InvalidParameter("weak_type_ratio: empty ensemble");
    if (!(p >= 1.0)) throw InvalidParameter("weak_type_ratio: p must be >= 1");
    double best = 0.0;
    for (const auto& x : ensemble) {
        const double denom = std::isinf(p) ? lp_norm(x, p) : std::pow(lp_norm(x, p), p);
        if (denom <= 0.0) continue;
        const Matrix tx = T.apply(x);
        if (std::isinf(p)) {
            best = std::max(best, lp_norm(tx, p) / denom);
        } else {
            best = std::max(best, weak_sup(singular_values_desc(tx), p) / denom);
        }
    }
    return std::isinf(p) ? best : std::pow(best, 1.0 / p);
}

double certified_constant(const OrliczFunction& phi, double p0, double p1, double A0,
                          double A1) {
    if (!(p0 >= 1.0)) throw InvalidParameter("certified_constant: p0 must be >= 1");
    if (!(p1 > p0)) throw InvalidParameter("certified_constant: p1 must exceed p0");
    if (!(A0 > 0.0) || !(A1 > 0.0))
        throw InvalidParameter("certified_constant: weak-type constants must be positive");
    const auto& est = phi.indices();
    if (!(p0 < est.p_phi))
        throw RegimeError("certified_constant: p0=" + format_double(p0) +
                          " is not below p_phi=" + format_double(est.p_phi));
    if (!(std::isinf(p1) || est.q_phi < p1))
        throw RegimeError("certified_constant: p1=" + format_double(p1) +
                          " is not above q_phi=" + format_double(est.q_phi));
    const auto k = phi.delta2_constant();
    if (!k)
        throw RegimeError("certified_constant: unbounded doubling constant (no finite bound)");
    const double d = phi.derivative_ratio_sup();
    const double b0 = phi.integral_bound_low(p0);
    if (std::isinf(p1)) return d * std::pow(A0 / A1, p0) * b0;
    const double b1 = phi.integral_bound_high(p1);
    return d * (*k) * (std::pow(A0, p0) * b0 + std::pow(A1, p1) * b1);
}

SublinearOperatorHandle identity_handle() {
    return {"identity", [](const Matrix& x) { return x; }, false};
}

SublinearOperatorHandle scaling_handle(double factor) {
    return {"scale:" + format_double(factor),
            [factor](const Matrix& x) { return factor * x; }, false};
}

SublinearOperatorHandle transform_handle(const Filtration& f, const std::vector<cd>& alpha) {
    if (alpha.size() < f.levels())
        throw InvalidParameter("transform_handle: symbol sequence shorter than the filtration");
    return {"transform",
            [f, alpha](const Matrix& x) {
                return transform(martingale_from_final(f, x), alpha).final();
            },
            false};
}

Matrix stein_embed(const std::vector<Matrix>& a, std::size_t m, char mode) {
    if (a.empty()) throw InvalidParameter("stein_embed: empty sequence");
    if (a.size() > m) throw InvalidParameter("stein_embed: sequence longer than block count");
    const std::size_t d = a.front().rows();
    Matrix x(d * m, d * m);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].rows() != d || a[i].cols() != d)
            throw DimensionMismatch("stein_embed: mixed dimensions");
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                if (mode == 'C') x(i * d + r, c) = a[i](r, c);
                else x(r, i * d + c) = a[i](r, c);
            }
    }
    return x;
}

SublinearOperatorHandle stein_handle(const Filtration& f, char mode) {
    if (mode != 'C' && mode != 'R')
        throw InvalidParameter("stein_handle: mode must be 'C' or 'R'");
    const std::size_t d = f.dim();
    const std::size_t m = f.levels();
    const std::string name = mode == 'C' ? "stein-col" : "stein-row";
    return {name,
            [f, d, m, mode](const Matrix& x) {
                if (x.rows() != d * m || x.cols() != d * m)
                    throw DimensionMismatch("stein handle: expected the block algebra M_{d*m}");
                Matrix out(d * m, d * m);
                for (std::size_t i = 0; i < m; ++i) {
                    Matrix block(d, d);
                    for (std::size_t r = 0; r < d; ++r)
                        for (std::size_t c = 0; c < d; ++c)
                            block(r, c) = mode == 'C' ? x(i * d + r, c) : x(r, i * d + c);
                    block = f.conditional_expectation(i, block);
                    for (std::size_t r = 0; r < d; ++r)
                        for (std::size_t c = 0; c < d; ++c) {
                            if (mode == 'C') out(i * d + r, c) = block(r, c);
                            else out(r, i * d + c) = block(r, c);
                        }
                }
                return out;
            },
            false};
}

VerificationReport verify_interpolation(const SublinearOperatorHandle& T,
                                        const OrliczFunction& phi, double p0, double p1,
                                        const std::vector<Matrix>& ensemble) {
    if (ensemble.empty()) throw InvalidParameter("verify_interpolation: empty ensemble");
    const auto& est = phi.indices();

    VerificationReport r;
    r.inequality = "interpolation:" + T.name;
    r.regime.p_phi = est.p_phi;
    r.regime.q_phi = est.q_phi;
    r.regime.gate = "p0 < p_phi <= q_phi < p1";

    long skipped = 0;
    double a0_sup = 0.0, a1_sup = 0.0;
    const bool top_inf = std::isinf(p1);
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const Matrix& x = ensemble[i];
        const Matrix tx = T.apply(x);
        const auto sx = singular_values_desc(x);
        const auto stx = singular_values_desc(tx);

        double mod_x = 0.0, mod_tx = 0.0;
        for (double v : sx) mod_x += phi.eval(v);
        for (double v : stx) mod_tx += phi.eval(v);
        mod_x /= double(sx.size());
        mod_tx /= double(stx.size());

        if (mod_x < 1e-14) {
            ++skipped;
        } else {
            SampleRow row;
            row.index = long(i);
            row.lhs = mod_tx;
            row.rhs = mod_x;
            row.ratio = mod_tx / mod_x;
            r.samples.push_back(row);
        }

        // measured weak-type data from the same singular values
        double denom0 = 0.0;
        for (double v : sx) denom0 += std::pow(v, p0);
        denom0 /= double(sx.size());
        if (denom0 > 0.0) a0_sup = std::max(a0_sup, weak_sup(stx, p0) / denom0);
        if (top_inf) {
            if (sx.front() > 0.0) a1_sup = std::max(a1_sup, stx.front() / sx.front());
        } else {
            double denom1 = 0.0;
            for (double v : sx) denom1 += std::pow(v, p1);
            denom1 /= double(sx.size());
            if (denom1 > 0.0) a1_sup = std::max(a1_sup, weak_sup(stx, p1) / denom1);
        }
    }

    const double a0 = std::pow(a0_sup, 1.0 / p0);
    const double a1 = top_inf ? a1_sup : std::pow(a1_sup, 1.0 / p1);
    const double c = certified_constant(phi, p0, p1, std::max(a0, 1e-300),
                                        std::max(a1, 1e-300));
    r.certified = c;
    r.aggregate = compute_aggregate(r.samples, skipped);
    r.pass = r.aggregate.max_ratio <= c;

    r.config.emplace_back("operator", T.name);
    r.config.emplace_back("phi", phi.spec());
    r.config.emplace_back("p0", format_double(p0));
    r.config.emplace_back("p1", top_inf ? "inf" : format_double(p1));
    r.config.emplace_back("ensemble_size", std::to_string(ensemble.size()));
    r.config.emplace_back("measured_a0", format_double(a0));
    r.config.emplace_back("measured_a1", format_double(a1));
    return r;
}

}  // namespace ncorlicz
