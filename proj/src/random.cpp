#include "ncorlicz/random.hpp"

#include <cmath>
#include <numbers>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/util.hpp"

namespace ncorlicz {

double RngStream::gaussian() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

RngStream sample_stream(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(mix64(mix64(master_seed) ^ (0x9E3779B97F4A7C15ULL * (index + 1))));
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
    if (name == "gaussian") return EnsembleKind::Gaussian;
    if (name == "hermitian") return EnsembleKind::Hermitian;
    if (name == "diagonal") return EnsembleKind::Diagonal;
    throw InvalidParameter("ensemble kind: expected gaussian|hermitian|diagonal, got '" +
                           name + "'");
}

Matrix random_operator(RngStream& rng, std::size_t dim, EnsembleKind kind) {
    if (dim == 0) throw InvalidParameter("random_operator: dim must be positive");
    Matrix x(dim, dim);
    switch (kind) {
        case EnsembleKind::Gaussian:
            for (auto& v : x.data()) v = rng.cgaussian();
            break;
        case EnsembleKind::Hermitian: {
            for (auto& v : x.data()) v = rng.cgaussian();
            const Matrix xs = x.adjoint();
            x += xs;
            x *= cd(0.5, 0.0);
            break;
        }
        case EnsembleKind::Diagonal:
            for (std::size_t i = 0; i < dim; ++i) x(i, i) = rng.gaussian();
            break;
    }
    return x;
}

std::vector<Matrix> random_sequence(RngStream& rng, std::size_t dim, std::size_t length,
                                    EnsembleKind kind) {
    std::vector<Matrix> xs;
    xs.reserve(length);
    for (std::size_t k = 0; k < length; ++k) xs.push_back(random_operator(rng, dim, kind));
    return xs;
}

}  // namespace ncorlicz
