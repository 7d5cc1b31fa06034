#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ncorlicz/matrix.hpp"
#include "ncorlicz/orlicz.hpp"

namespace ncorlicz {

// M_d with the normalized trace tau = tr/d, so tau(I) = 1. Operators are
// plain Matrix values; the algebra object carries the dimension and trace
// conventions.
struct TracialMatrixAlgebra {
    std::size_t dim = 1;

    cd trace(const Matrix& x) const;
    double trace_real(const Matrix& x) const;
    bool contains(const Matrix& x) const { return x.rows() == dim && x.cols() == dim; }
};

cd normalized_trace(const Matrix& x);
double normalized_trace_real(const Matrix& x);

// |x| = (x*x)^{1/2} by spectral calculus; eigenvalues of x*x are clipped at 0.
Matrix abs_op(const Matrix& x);
// Square root of a positive semidefinite Hermitian matrix (negative
// round-off eigenvalues clipped to 0).
Matrix psd_sqrt(const Matrix& h);

// Singular values of x, descending.
std::vector<double> singular_values_desc(const Matrix& x);

// The singular-value function mu_t(x) on [0,1): piecewise constant,
// value sigma_k on [k/d, (k+1)/d), nonincreasing.
struct StepFunction {
    std::vector<double> breakpoints;  // k/d, k = 0..d-1
    std::vector<double> values;       // descending singular values

    double at(double t) const;
};

StepFunction singular_values(const Matrix& x);

// lambda_s(x): fraction of singular values strictly above s. Values within
// 1e-12 * sigma_max of s count as <= s (same tie rule as spectral_projection).
double distribution(const Matrix& x, double s);

// Orthogonal projection onto the sum of eigenspaces of |x| with eigenvalue
// above s (tie rule as in distribution); Hermitian idempotent.
Matrix spectral_projection(const Matrix& x, double s);

// tau(Phi(|x|)) = (1/d) sum_i Phi(sigma_i).
double trace_phi_moment(const OrliczFunction& phi, const Matrix& x);

// Same quantity through the distribution function: the Stieltjes integral
// of lambda_s d Phi(s), summed over the plateaus of the step function
// lambda (no quadrature involved).
double layer_cake_trace(const OrliczFunction& phi, const Matrix& x);

// Luxemburg norm: the c at which tau(Phi(|x|/c)) crosses 1, by bisection
// (modular at the returned c is <= 1). Zero for the zero operator.
double orlicz_norm(const OrliczFunction& phi, const Matrix& x);

// ((1/d) sum sigma_i^p)^{1/p}; the largest singular value for p = infinity.
double lp_norm(const Matrix& x, double p);

// (sum_k x_k* x_k)^{1/2} and (sum_k x_k x_k*)^{1/2}.
Matrix column_square(const std::vector<Matrix>& xs);
Matrix row_square(const std::vector<Matrix>& xs);

// x = y + iz with y, z Hermitian: y = (x+x*)/2, z = (x-x*)/(2i).
std::pair<Matrix, Matrix> hermitian_parts(const Matrix& x);

// Exchange format: {"dim": d, "entries": [[re, im], ...]} row-major, d*d entries.
std::string operator_to_json(const Matrix& x);
Matrix operator_from_json(const std::string& text);

}  // namespace ncorlicz
