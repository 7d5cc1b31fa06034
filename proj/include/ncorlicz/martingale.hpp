#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncorlicz/matrix.hpp"
#include "ncorlicz/random.hpp"

namespace ncorlicz {

// An increasing chain of subalgebras of M_d with conditional expectations.
//
// Tensor model: M_d = M_2^{\otimes n} (d = 2^n); the level-k subalgebra is
// the first k tensor factors, and E_k is the normalized partial trace over
// the remaining factors (tensored back with the identity). Levels run over
// cuts 1..n by default; with the scalar flag, the trivial algebra C*1 is
// prepended as level 0 (E = tau(.)I).
//
// Partition model: levels are partitions of {0..d-1}, each coarser than its
// predecessor, the last a single block; the level algebra is the block
// diagonal one and E is the pinching that zeroes off-block entries.
class Filtration {
public:
    static Filtration tensor(std::size_t factors, bool scalar_level = false);
    static Filtration partition(std::vector<std::vector<std::vector<std::size_t>>> levels,
                                bool scalar_level = false);
    // partition into consecutive blocks of sizes 1, 2, 4, ..., d (d a power of 2)
    static Filtration dyadic_partition(std::size_t dim, bool scalar_level = false);

    // "tensor:4", "dyadic:16" (suffix "+scalar" for the prepended scalar
    // level), or inline JSON {"model":"tensor","factors":4} /
    // {"model":"partition","levels":[[[1,2],[3,4]],[[1,2,3,4]]]} (1-based).
    static Filtration from_descriptor(const std::string& text);
    std::string descriptor() const;

    std::size_t dim() const { return dim_; }
    std::size_t levels() const;
    bool has_scalar_level() const { return scalar_level_; }

    Matrix conditional_expectation(std::size_t level, const Matrix& x) const;

private:
    Filtration() = default;

    enum class Model { Tensor, Partition } model_ = Model::Tensor;
    bool scalar_level_ = false;
    std::size_t dim_ = 0;
    std::size_t factors_ = 0;                                // tensor
    std::vector<std::vector<std::vector<std::size_t>>> parts_;  // partition, 0-based
    std::vector<std::vector<std::size_t>> block_of_;            // per level, index -> block id
};

// Adapted sequence (x_0, ..., x_{L-1}), one element per filtration level,
// with E_n(x_{n+1}) = x_n. Construction checks adaptedness and the
// martingale property to 1e-10 (relative to the largest Frobenius norm).
class Martingale {
public:
    Martingale(Filtration f, std::vector<Matrix> elements);

    const Filtration& filtration() const { return filtration_; }
    const std::vector<Matrix>& elements() const { return elements_; }
    const Matrix& final() const { return elements_.back(); }
    std::size_t length() const { return elements_.size(); }

private:
    Filtration filtration_;
    std::vector<Matrix> elements_;
};

Martingale martingale_from_final(const Filtration& f, const Matrix& x_final);
Martingale random_martingale(const Filtration& f, RngStream& rng, EnsembleKind kind);

// dx_0 = x_0, dx_n = x_n - x_{n-1}
std::vector<Matrix> differences(const Martingale& m);

// S_{C,n} = (sum_{k<=n} dx_k* dx_k)^{1/2}, S_{R,n} with dx_k dx_k*.
Matrix square_function_col(const Martingale& m, std::size_t n);
Matrix square_function_row(const Martingale& m, std::size_t n);

// Difference-wise multiplication by the scalar symbol sequence.
Martingale transform(const Martingale& m, const std::vector<cd>& alpha);

// (E_n(a_n))_n for a sequence no longer than the filtration.
std::vector<Matrix> stein_map(const Filtration& f, const std::vector<Matrix>& a);

}  // namespace ncorlicz
