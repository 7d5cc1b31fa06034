#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ncorlicz/martingale.hpp"
#include "ncorlicz/matrix.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/report.hpp"

namespace ncorlicz {

// Spectral splitting at height alpha: x0 = x * P_(alpha,inf)(|x|) carries
// the large singular values, x1 = x - x0 satisfies ||x1||_inf <= alpha.
std::pair<Matrix, Matrix> split(const Matrix& x, double alpha);

// A sublinear map with declared weak-type data; apply must be safe for
// repeated calls (set serial if invocations must not interleave).
struct SublinearOperatorHandle {
    std::string name;
    std::function<Matrix(const Matrix&)> apply;
    bool serial = false;
};

// Measured weak-type (p,p) constant A over an ensemble:
//   A^p = max over samples and k of sigma_k(Tx)^p * (k+1)/d / ||x||_p^p,
// the exact supremum of alpha^p lambda_alpha(|Tx|)/||x||_p^p (the sup over
// alpha of a step function is attained just below its jumps, so jump
// points replace any search grid). Nothing is asserted; the measured
// constant is returned.
double weak_type_ratio(const SublinearOperatorHandle& T, double p,
                       const std::vector<Matrix>& ensemble);

// The explicit interpolation constant assembled from grid suprema:
//   C = D * K * (A0^p0 * B0(p0) + A1^p1 * B1(p1))
// with D = sup t Phi'(t)/Phi(t), K the doubling constant, B0/B1 the
// index-characterization integral bounds. Requires p0 < p_phi <= q_phi < p1.
// For p1 = infinity the separate form C = D * (A0/A1)^p0 * B0(p0) is used
// (the large-height half vanishes when ||Tx1^alpha||_inf <= A1*alpha).
double certified_constant(const OrliczFunction& phi, double p0, double p1, double A0,
                          double A1);

// Identity, scalar multiple, martingale transform, and Stein handles used
// by the CLI and the verification suite.
SublinearOperatorHandle identity_handle();
SublinearOperatorHandle scaling_handle(double factor);
SublinearOperatorHandle transform_handle(const Filtration& f, const std::vector<cd>& alpha);

// The Stein map as one operator on the block algebra M_{d*m} (m filtration
// levels): the i-th block of the first block column maps through E_i,
// everything else to zero. Column (mode 'C') reads blocks down the first
// block column, row (mode 'R') along the first block row.
SublinearOperatorHandle stein_handle(const Filtration& f, char mode);

// Embeds a sequence as the first block column (or row) of M_{d*m}.
Matrix stein_embed(const std::vector<Matrix>& a, std::size_t m, char mode);

VerificationReport verify_interpolation(const SublinearOperatorHandle& T,
                                        const OrliczFunction& phi, double p0, double p1,
                                        const std::vector<Matrix>& ensemble);

}  // namespace ncorlicz
