#include "ncorlicz/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/util.hpp"

namespace ncorlicz {

namespace {
constexpr double kTieRel = 1e-12;

void require_square(const Matrix& x, const char* where) {
    if (x.rows() != x.cols() || x.rows() == 0)
        throw DimensionMismatch(std::string(where) + ": operator must be square and nonempty");
}
}  // namespace

cd TracialMatrixAlgebra::trace(const Matrix& x) const {
    if (!contains(x)) throw DimensionMismatch("algebra trace: dimension mismatch");
    return x.trace() / double(dim);
}

double TracialMatrixAlgebra::trace_real(const Matrix& x) const { return trace(x).real(); }

cd normalized_trace(const Matrix& x) {
    require_square(x, "normalized_trace");
    return x.trace() / double(x.rows());
}

double normalized_trace_real(const Matrix& x) { return normalized_trace(x).real(); }

Matrix psd_sqrt(const Matrix& h) {
    require_square(h, "psd_sqrt");
    const auto eig = eig_hermitian(h);
    const std::size_t d = h.rows();
    Matrix r(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double s = eig.eigenvalues[k] > 0.0 ? std::sqrt(eig.eigenvalues[k]) : 0.0;
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < d; ++i) {
            const cd vis = s * eig.vectors(i, k);
            for (std::size_t j = 0; j < d; ++j)
                r(i, j) += vis * std::conj(eig.vectors(j, k));
        }
    }
    return r;
}

Matrix abs_op(const Matrix& x) {
    require_square(x, "abs_op");
    return psd_sqrt(x.adjoint() * x);
}

std::vector<double> singular_values_desc(const Matrix& x) {
    require_square(x, "singular_values");
    const auto eig = eig_hermitian(x.adjoint() * x);
    std::vector<double> s(eig.eigenvalues.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double lam = eig.eigenvalues[s.size() - 1 - i];
        s[i] = lam > 0.0 ? std::sqrt(lam) : 0.0;
    }
    return s;
}

double StepFunction::at(double t) const {
    if (!(t >= 0.0 && t < 1.0))
        throw InvalidParameter("StepFunction::at: t must lie in [0,1)");
    // breakpoints are k/d; locate the interval containing t
    std::size_t lo = 0, hi = breakpoints.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (breakpoints[mid] <= t) lo = mid; else hi = mid;
    }
    return values[lo];
}

StepFunction singular_values(const Matrix& x) {
    StepFunction f;
    f.values = singular_values_desc(x);
    const std::size_t d = f.values.size();
    f.breakpoints.resize(d);
    for (std::size_t k = 0; k < d; ++k) f.breakpoints[k] = double(k) / double(d);
    return f;
}

double distribution(const Matrix& x, double s) {
    const auto sv = singular_values_desc(x);
    const double tol = sv.empty() ? 0.0 : kTieRel * sv.front();
    std::size_t count = 0;
    for (double v : sv)
        if (v - s > tol) ++count;
    return double(count) / double(sv.size());
}

Matrix spectral_projection(const Matrix& x, double s) {
    require_square(x, "spectral_projection");
    if (!(s >= 0.0)) throw InvalidParameter("spectral_projection: s must be >= 0");
    const std::size_t d = x.rows();
    const auto eig = eig_hermitian(x.adjoint() * x);
    double smax = 0.0;
    for (double lam : eig.eigenvalues)
        smax = std::max(smax, lam > 0.0 ? std::sqrt(lam) : 0.0);
    const double tol = kTieRel * smax;
    Matrix p(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double sigma = eig.eigenvalues[k] > 0.0 ? std::sqrt(eig.eigenvalues[k]) : 0.0;
        if (!(sigma - s > tol)) continue;
        for (std::size_t i = 0; i < d; ++i) {
            const cd vi = eig.vectors(i, k);
            for (std::size_t j = 0; j < d; ++j) p(i, j) += vi * std::conj(eig.vectors(j, k));
        }
    }
    return p;
}

double trace_phi_moment(const OrliczFunction& phi, const Matrix& x) {
    const auto sv = singular_values_desc(x);
    double acc = 0.0;
    for (double v : sv) acc += phi.eval(v);
    return acc / double(sv.size());
}

double layer_cake_trace(const OrliczFunction& phi, const Matrix& x) {
    auto sv = singular_values_desc(x);
    const double d = double(sv.size());
    std::sort(sv.begin(), sv.end());  // ascending
    // Distinct positive jump locations v_1 < ... < v_m of the distribution
    // function; lambda is constant between them, so the Stieltjes integral
    // is sum_j lambda_{[v_j, v_{j+1})} * (Phi(v_{j+1}) - Phi(v_j)).
    double total = 0.0;
    double prev = 0.0;       // v_j (starts at 0)
    std::size_t above = sv.size();  // values strictly above prev... adjusted below
    std::size_t i = 0;
    while (i < sv.size() && sv[i] <= 0.0) ++i;  // zeros contribute nothing
    above = sv.size() - i;
    while (i < sv.size()) {
        const double v = sv[i];
        std::size_t j = i;
        while (j < sv.size() && sv[j] == v) ++j;
        // lambda on [prev, v) = fraction strictly above prev = above/d
        total += (double(above) / d) * (phi.eval(v) - phi.eval(prev));
        above -= (j - i);
        prev = v;
        i = j;
    }
    return total;
}

double orlicz_norm(const OrliczFunction& phi, const Matrix& x) {
    const auto sv = singular_values_desc(x);
    const double d = double(sv.size());
    const double smax = sv.empty() ? 0.0 : sv.front();
    if (smax <= 0.0) return 0.0;

    auto modular = [&](double c) {
        double acc = 0.0;
        for (double v : sv) {
            const double t = v / c;
            const double ph = phi.eval(t);
            if (!std::isfinite(ph)) return std::numeric_limits<double>::infinity();
            acc += ph;
        }
        return acc / d;
    };

    double hi = smax;
    for (int k = 0; k < 64 && modular(hi) > 1.0; ++k) hi *= 2.0;
    double lo = hi;
    for (int k = 0; k < 200; ++k) {
        const double cand = lo / 2.0;
        if (modular(cand) > 1.0) { lo = cand; break; }
        lo = cand;
        if (lo < smax * 1e-30) break;  // modular never exceeds 1: x in every ball
    }
    for (int k = 0; k < 80 && (hi - lo) > 1e-13 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (modular(mid) > 1.0) lo = mid; else hi = mid;
    }
    return hi;
}

double lp_norm(const Matrix& x, double p) {
    if (!(p > 0.0)) throw InvalidParameter("lp_norm: p must be positive (or infinity)");
    const auto sv = singular_values_desc(x);
    if (std::isinf(p)) return sv.empty() ? 0.0 : sv.front();
    double acc = 0.0;
    for (double v : sv) acc += std::pow(v, p);
    return std::pow(acc / double(sv.size()), 1.0 / p);
}

namespace {
Matrix gram_sum(const std::vector<Matrix>& xs, bool column) {
    if (xs.empty()) throw InvalidParameter("square function: empty sequence");
    const std::size_t d = xs.front().rows();
    Matrix acc(d, d);
    for (const auto& x : xs) {
        if (x.rows() != d || x.cols() != d)
            throw DimensionMismatch("square function: operators live in different algebras");
        acc += column ? x.adjoint() * x : x * x.adjoint();
    }
    return acc;
}
}  // namespace

Matrix column_square(const std::vector<Matrix>& xs) { return psd_sqrt(gram_sum(xs, true)); }
Matrix row_square(const std::vector<Matrix>& xs) { return psd_sqrt(gram_sum(xs, false)); }

std::pair<Matrix, Matrix> hermitian_parts(const Matrix& x) {
    require_square(x, "hermitian_parts");
    const Matrix xs = x.adjoint();
    Matrix y = x;
    y += xs;
    y *= cd(0.5, 0.0);
    Matrix z = x;
    z -= xs;
    z *= cd(0.0, -0.5);  // (x - x*) / (2i)
    return {y, z};
}

std::string operator_to_json(const Matrix& x) {
    require_square(x, "operator_to_json");
    std::ostringstream out;
    out << "{\"dim\":" << x.rows() << ",\"entries\":[";
    for (std::size_t k = 0; k < x.data().size(); ++k) {
        if (k) out << ",";
        out << "[" << format_double(x.data()[k].real()) << ","
            << format_double(x.data()[k].imag()) << "]";
    }
    out << "]}";
    return out.str();
}

Matrix operator_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidParameter(std::string("operator JSON: parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw InvalidParameter("operator JSON: expected object with 'dim' and 'entries'");
    const std::size_t d = j.at("dim").get<std::size_t>();
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != d * d)
        throw InvalidParameter("operator JSON: 'entries' must hold dim*dim [re,im] pairs");
    Matrix x(d, d);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& pair = entries[k];
        if (!pair.is_array() || pair.size() != 2)
            throw InvalidParameter("operator JSON: each entry must be a [re,im] pair");
        x.data()[k] = cd(pair[0].get<double>(), pair[1].get<double>());
    }
    return x;
}

}  // namespace ncorlicz
