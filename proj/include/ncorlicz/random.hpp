#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ncorlicz/matrix.hpp"

namespace ncorlicz {

// Deterministic RNG stream. Samples in an ensemble each get their own
// stream derived from (master seed, sample index) by counter splitting, so
// results do not depend on evaluation order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1) with 53 random bits
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    // standard normal (Box-Muller, no spare caching: keeps the stream
    // position a pure function of the number of calls)
    double gaussian();

    // complex with independent N(0,1) real and imaginary parts
    cd cgaussian() { const double re = gaussian(); return cd(re, gaussian()); }

    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

RngStream sample_stream(std::uint64_t master_seed, std::uint64_t index);

enum class EnsembleKind { Gaussian, Hermitian, Diagonal };
EnsembleKind parse_ensemble_kind(const std::string& name);

// Gaussian: iid complex Gaussian entries. Hermitian: Gaussian hermitized as
// (g + g*)/2. Diagonal: real Gaussian diagonal (commutative test ensemble).
Matrix random_operator(RngStream& rng, std::size_t dim, EnsembleKind kind);
std::vector<Matrix> random_sequence(RngStream& rng, std::size_t dim, std::size_t length,
                                    EnsembleKind kind);

}  // namespace ncorlicz
