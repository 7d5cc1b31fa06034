#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncorlicz/matrix.hpp"
#include "ncorlicz/orlicz.hpp"

namespace ncorlicz {

struct RademacherMode {
    enum class Kind { Exact, MonteCarlo } kind = Kind::Exact;
    long samples = 0;        // MonteCarlo only
    std::uint64_t seed = 0;  // MonteCarlo only

    // "exact" or "mc:<samples>"; the seed is supplied separately.
    static RademacherMode parse(const std::string& text, std::uint64_t seed);
    std::string spec() const;
};

struct RademacherMoment {
    double value = 0.0;
    double std_error = 0.0;  // 0 in exact mode
    long evaluations = 0;
};

// Average of tau(Phi(|sum_k eps_k x_k|)) over sign vectors eps. Exact mode
// enumerates all 2^n patterns (n <= 14) with order-independent summation,
// so the result is bit-identical under permutations of xs and global sign
// flips. MonteCarlo draws seeded patterns and reports a standard error.
RademacherMoment rademacher_phi_moment(const OrliczFunction& phi,
                                       const std::vector<Matrix>& xs, RademacherMode mode);

// Operator-coefficient polynomial sum_k c_k z^k on the unit circle.
struct TrigPolynomial {
    std::size_t dim = 0;
    std::map<long long, Matrix> coeffs;

    void add(long long frequency, const Matrix& c);
    Matrix evaluate_at_root(long long n_roots, long long j) const;
    long long max_abs_frequency() const;
};

// sum_k x_k z^{3^k}; the frequencies 3^k are lacunary with ratio 3.
TrigPolynomial lacunary_embed(const std::vector<Matrix>& xs);

// Keep exactly the frequencies in the dyadic-type block (3^n/2, 3^n].
TrigPolynomial multiplier_block(const TrigPolynomial& f, int n);

// Smallest n whose block could contain a frequency of f, plus 1 (loop bound).
int block_count(const TrigPolynomial& f);

// (1/N) sum_j tau(Phi(|f(w^j)|)) over the N-th roots of unity; exact for
// Phi = t^2 once N exceeds twice the top frequency (trapezoid rule resolves
// trigonometric polynomials).
double circle_phi_average(const OrliczFunction& phi, const TrigPolynomial& f,
                          long long quad_points);

// Circle average of tau(Phi[(sum_n |block_n f(z)|^2)^{1/2}]).
double block_square_moment(const OrliczFunction& phi, const TrigPolynomial& f,
                           long long quad_points);

}  // namespace ncorlicz
