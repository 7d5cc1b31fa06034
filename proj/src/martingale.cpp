#include "ncorlicz/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"

namespace ncorlicz {

Filtration Filtration::tensor(std::size_t factors, bool scalar_level) {
    if (factors == 0 || factors > 7)
        throw InvalidParameter("tensor filtration: factors must be in 1..7 (dim = 2^factors)");
    Filtration f;
    f.model_ = Model::Tensor;
    f.scalar_level_ = scalar_level;
    f.factors_ = factors;
    f.dim_ = std::size_t(1) << factors;
    return f;
}

Filtration Filtration::partition(std::vector<std::vector<std::vector<std::size_t>>> levels,
                                 bool scalar_level) {
    if (levels.empty()) throw InvalidParameter("partition filtration: no levels");
    Filtration f;
    f.model_ = Model::Partition;
    f.scalar_level_ = scalar_level;

    // dimension = total size of the first level's blocks
    std::size_t d = 0;
    for (const auto& block : levels.front()) d += block.size();
    if (d == 0) throw InvalidParameter("partition filtration: empty partition");
    f.dim_ = d;

    for (std::size_t lev = 0; lev < levels.size(); ++lev) {
        const auto& part = levels[lev];
        std::vector<std::size_t> block_of(d, std::size_t(-1));
        for (std::size_t b = 0; b < part.size(); ++b) {
            if (part[b].empty())
                throw InvalidParameter("partition filtration: empty block");
            for (std::size_t idx : part[b]) {
                if (idx >= d)
                    throw InvalidParameter("partition filtration: index out of range");
                if (block_of[idx] != std::size_t(-1))
                    throw InvalidParameter("partition filtration: index covered twice");
                block_of[idx] = b;
            }
        }
        for (std::size_t idx = 0; idx < d; ++idx)
            if (block_of[idx] == std::size_t(-1))
                throw InvalidParameter("partition filtration: index not covered");
        if (lev > 0) {
            // coarsening: indices sharing a block at the previous level
            // must share one here
            const auto& prev = f.block_of_.back();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j)
                    if (prev[i] == prev[j] && block_of[i] != block_of[j])
                        throw InvalidParameter(
                            "partition filtration: level " + std::to_string(lev) +
                            " is not coarser than its predecessor");
        }
        f.block_of_.push_back(std::move(block_of));
    }
    if (levels.back().size() != 1)
        throw InvalidParameter("partition filtration: last level must be a single block");
    f.parts_ = std::move(levels);
    return f;
}

Filtration Filtration::dyadic_partition(std::size_t dim, bool scalar_level) {
    if (dim == 0 || (dim & (dim - 1)) != 0)
        throw InvalidParameter("dyadic partition: dim must be a power of 2");
    std::vector<std::vector<std::vector<std::size_t>>> levels;
    for (std::size_t bs = 1; bs <= dim; bs *= 2) {
        std::vector<std::vector<std::size_t>> part;
        for (std::size_t start = 0; start < dim; start += bs) {
            std::vector<std::size_t> block(bs);
            for (std::size_t k = 0; k < bs; ++k) block[k] = start + k;
            part.push_back(std::move(block));
        }
        levels.push_back(std::move(part));
    }
    return partition(std::move(levels), scalar_level);
}

Filtration Filtration::from_descriptor(const std::string& text) {
    std::string body = text;
    bool scalar = false;
    if (const auto plus = body.find("+scalar"); plus != std::string::npos) {
        if (plus + 7 != body.size())
            throw InvalidParameter("filtration descriptor: trailing characters after '+scalar'");
        scalar = true;
        body = body.substr(0, plus);
    }
    if (body.rfind("tensor:", 0) == 0 || body.rfind("dyadic:", 0) == 0) {
        const bool is_tensor = body[0] == 't';
        const std::string num = body.substr(7);
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(num, &pos);
        } catch (const std::exception&) {
            throw InvalidParameter("filtration descriptor: bad number in '" + text + "'");
        }
        if (pos != num.size())
            throw InvalidParameter("filtration descriptor: bad number in '" + text + "'");
        return is_tensor ? tensor(v, scalar) : dyadic_partition(v, scalar);
    }
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const std::exception& e) {
            throw InvalidParameter(std::string("filtration descriptor: JSON parse failure: ") +
                                   e.what());
        }
        const std::string model = j.value("model", "");
        if (j.contains("scalar_level")) scalar = scalar || j.at("scalar_level").get<bool>();
        if (model == "tensor") return tensor(j.at("factors").get<std::size_t>(), scalar);
        if (model == "dyadic") return dyadic_partition(j.at("dim").get<std::size_t>(), scalar);
        if (model == "partition") {
            std::vector<std::vector<std::vector<std::size_t>>> levels;
            for (const auto& level : j.at("levels")) {
                std::vector<std::vector<std::size_t>> part;
                for (const auto& block : level) {
                    std::vector<std::size_t> b;
                    for (const auto& idx : block) {
                        const auto one_based = idx.get<std::size_t>();
                        if (one_based == 0)
                            throw InvalidParameter(
                                "filtration descriptor: partition indices are 1-based");
                        b.push_back(one_based - 1);
                    }
                    part.push_back(std::move(b));
                }
                levels.push_back(std::move(part));
            }
            return partition(std::move(levels), scalar);
        }
        throw InvalidParameter("filtration descriptor: unknown model '" + model + "'");
    }
    throw InvalidParameter("filtration descriptor: expected tensor:N, dyadic:D, or JSON, got '" +
                           text + "'");
}

std::string Filtration::descriptor() const {
    std::ostringstream out;
    if (model_ == Model::Tensor) {
        out << "tensor:" << factors_;
    } else {
        // dyadic partitions get the short form back
        bool dyadic = parts_.size() >= 1;
        std::size_t bs = 1;
        for (const auto& part : parts_) {
            if (part.size() != (dim_ + bs - 1) / bs) { dyadic = false; break; }
            for (std::size_t b = 0; b < part.size(); ++b) {
                if (part[b].size() != bs) { dyadic = false; break; }
                for (std::size_t k = 0; k < bs; ++k)
                    if (part[b][k] != b * bs + k) { dyadic = false; break; }
                if (!dyadic) break;
            }
            if (!dyadic) break;
            bs *= 2;
        }
        if (dyadic && bs == 2 * dim_) {
            out << "dyadic:" << dim_;
        } else {
            out << "{\"model\":\"partition\",\"levels\":[";
            for (std::size_t lev = 0; lev < parts_.size(); ++lev) {
                if (lev) out << ",";
                out << "[";
                for (std::size_t b = 0; b < parts_[lev].size(); ++b) {
                    if (b) out << ",";
                    out << "[";
                    for (std::size_t k = 0; k < parts_[lev][b].size(); ++k) {
                        if (k) out << ",";
                        out << parts_[lev][b][k] + 1;
                    }
                    out << "]";
                }
                out << "]";
            }
            out << "]}";
        }
    }
    if (scalar_level_) out << "+scalar";
    return out.str();
}

std::size_t Filtration::levels() const {
    const std::size_t base = model_ == Model::Tensor ? factors_ : parts_.size();
    return base + (scalar_level_ ? 1 : 0);
}

Matrix Filtration::conditional_expectation(std::size_t level, const Matrix& x) const {
    if (level >= levels())
        throw InvalidParameter("conditional_expectation: level out of range");
    if (x.rows() != dim_ || x.cols() != dim_)
        throw DimensionMismatch("conditional_expectation: operator dimension mismatch");
    if (scalar_level_) {
        if (level == 0) {
            Matrix e = Matrix::identity(dim_);
            e *= normalized_trace(x);
            return e;
        }
        --level;
    }
    if (model_ == Model::Tensor) {
        const std::size_t cut = level + 1;  // subalgebra = first `cut` factors
        if (cut == factors_) return x;
        const std::size_t head = std::size_t(1) << cut;
        const std::size_t tail = dim_ >> cut;
        Matrix e(dim_, dim_);
        for (std::size_t ih = 0; ih < head; ++ih) {
            for (std::size_t jh = 0; jh < head; ++jh) {
                cd acc = 0.0;
                for (std::size_t t = 0; t < tail; ++t)
                    acc += x(ih * tail + t, jh * tail + t);
                acc /= double(tail);
                for (std::size_t t = 0; t < tail; ++t)
                    e(ih * tail + t, jh * tail + t) = acc;
            }
        }
        return e;
    }
    // pinching
    const auto& block_of = block_of_[level];
    Matrix e(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (block_of[i] == block_of[j]) e(i, j) = x(i, j);
    return e;
}

Martingale::Martingale(Filtration f, std::vector<Matrix> elements)
    : filtration_(std::move(f)), elements_(std::move(elements)) {
    if (elements_.size() != filtration_.levels())
        throw InvalidParameter("martingale: need one element per filtration level");
    double scale = 1.0;
    for (const auto& x : elements_) {
        if (x.rows() != filtration_.dim() || x.cols() != filtration_.dim())
            throw DimensionMismatch("martingale: element dimension mismatch");
        scale = std::max(scale, x.frobenius_norm());
    }
    const double tol = 1e-10 * scale;
    for (std::size_t n = 0; n < elements_.size(); ++n) {
        const Matrix adapted = filtration_.conditional_expectation(n, elements_[n]);
        if ((adapted - elements_[n]).frobenius_norm() > tol)
            throw InvalidParameter("martingale: element " + std::to_string(n) +
                                   " is not adapted to its level");
        if (n + 1 < elements_.size()) {
            const Matrix proj = filtration_.conditional_expectation(n, elements_[n + 1]);
            if ((proj - elements_[n]).frobenius_norm() > tol)
                throw InvalidParameter("martingale: E_" + std::to_string(n) + "(x_" +
                                       std::to_string(n + 1) + ") != x_" + std::to_string(n));
        }
    }
}

Martingale martingale_from_final(const Filtration& f, const Matrix& x_final) {
    std::vector<Matrix> xs;
    xs.reserve(f.levels());
    for (std::size_t n = 0; n < f.levels(); ++n)
        xs.push_back(f.conditional_expectation(n, x_final));
    return Martingale(f, std::move(xs));
}

Martingale random_martingale(const Filtration& f, RngStream& rng, EnsembleKind kind) {
    return martingale_from_final(f, random_operator(rng, f.dim(), kind));
}

std::vector<Matrix> differences(const Martingale& m) {
    std::vector<Matrix> dx;
    dx.reserve(m.length());
    for (std::size_t n = 0; n < m.length(); ++n) {
        if (n == 0) dx.push_back(m.elements()[0]);
        else dx.push_back(m.elements()[n] - m.elements()[n - 1]);
    }
    return dx;
}

namespace {
Matrix square_function(const Martingale& m, std::size_t n, bool column) {
    if (n >= m.length()) throw InvalidParameter("square function: level out of range");
    auto dx = differences(m);
    dx.resize(n + 1);
    return column ? column_square(dx) : row_square(dx);
}
}  // namespace

Matrix square_function_col(const Martingale& m, std::size_t n) {
    return square_function(m, n, true);
}

Matrix square_function_row(const Martingale& m, std::size_t n) {
    return square_function(m, n, false);
}

Martingale transform(const Martingale& m, const std::vector<cd>& alpha) {
    if (alpha.size() < m.length())
        throw InvalidParameter("transform: symbol sequence shorter than the martingale");
    const auto dx = differences(m);
    std::vector<Matrix> xs;
    xs.reserve(m.length());
    Matrix acc(m.filtration().dim(), m.filtration().dim());
    for (std::size_t n = 0; n < m.length(); ++n) {
        acc += alpha[n] * dx[n];
        xs.push_back(acc);
    }
    return Martingale(m.filtration(), std::move(xs));
}

std::vector<Matrix> stein_map(const Filtration& f, const std::vector<Matrix>& a) {
    if (a.size() > f.levels())
        throw InvalidParameter("stein_map: sequence longer than the filtration");
    std::vector<Matrix> out;
    out.reserve(a.size());
    for (std::size_t n = 0; n < a.size(); ++n)
        out.push_back(f.conditional_expectation(n, a[n]));
    return out;
}

}  // namespace ncorlicz
