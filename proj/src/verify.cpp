#include "ncorlicz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <utility>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/interpolation.hpp"
#include "ncorlicz/noise_fourier.hpp"
#include "ncorlicz/util.hpp"

namespace ncorlicz {

namespace {

double modular_from_sv(const OrliczFunction& phi, const std::vector<double>& sv) {
    double acc = 0.0;
    for (double s : sv) acc += phi.eval(s);
    return acc / double(sv.size());
}

double lp_pow_from_sv(const std::vector<double>& sv, double p) {
    double acc = 0.0;
    for (double s : sv) acc += std::pow(s, p);
    return acc / double(sv.size());
}

// sup_alpha alpha^p lambda_alpha, attained just below the jumps of lambda
double weak_sup_from_sv(const std::vector<double>& sv, double p) {
    const double d = double(sv.size());
    double best = 0.0;
    for (std::size_t k = 0; k < sv.size(); ++k) {
        if (!(sv[k] > 0.0)) break;
        best = std::max(best, std::pow(sv[k], p) * (double(k + 1) / d));
    }
    return best;
}

// tau(Phi((sum x*x)^{1/2})) through the Gram eigenvalues (one
// diagonalization, no explicit square root)
double gram_phi_moment(const OrliczFunction& phi, const std::vector<Matrix>& xs, bool column) {
    const std::size_t d = xs.front().rows();
    Matrix g(d, d);
    for (const Matrix& x : xs) g += column ? x.adjoint() * x : x * x.adjoint();
    const EigResult e = eig_hermitian(g);
    double acc = 0.0;
    for (double lam : e.eigenvalues) acc += phi.eval(std::sqrt(std::max(0.0, lam)));
    return acc / double(d);
}

// Pooled weak-type accumulator: best over samples of
// sup-over-jumps(output)^p / ||input||_p^p, one per exponent.
struct WeakAccumulator {
    double p0 = 0.0, p1 = 0.0;
    double best0 = 0.0, best1 = 0.0;

    void add(const std::vector<double>& sv_in, const std::vector<double>& sv_out) {
        const double den0 = lp_pow_from_sv(sv_in, p0);
        const double den1 = lp_pow_from_sv(sv_in, p1);
        if (den0 > 0.0) best0 = std::max(best0, weak_sup_from_sv(sv_out, p0) / den0);
        if (den1 > 0.0) best1 = std::max(best1, weak_sup_from_sv(sv_out, p1) / den1);
    }
    double a0() const { return std::max(std::pow(best0, 1.0 / p0), 1e-300); }
    double a1() const { return std::max(std::pow(best1, 1.0 / p1), 1e-300); }
};

// Endpoint exponents bracketing the index interval: p0 halfway down to 1,
// p1 at twice the upper index.
std::pair<double, double> bracket_exponents(const IndexEstimate& est) {
    return {0.5 * (1.0 + est.p_phi), 2.0 * est.q_phi};
}

void require_two_sided_indices(const char* what, const OrliczFunction& phi,
                               const IndexEstimate& est) {
    if (!(est.p_phi > 1.0 + 1e-6))
        throw RegimeError(std::string(what) + ": requires lower growth index p_phi > 1, estimated p_phi=" +
                          format_double(est.p_phi));
    if (!phi.delta2_constant())
        throw RegimeError(std::string(what) +
                          ": requires a finite doubling constant (the upper index must be finite)");
}

// The 2-dichotomy: max form above 2, sum form below 2, nothing in between.
std::string dichotomy_gate(const char* what, const IndexEstimate& est) {
    if (est.p_phi > 2.0 + 1e-6) return "max";
    if (est.q_phi < 2.0 - 1e-6) {
        if (!(est.p_phi > 1.0 + 1e-6))
            throw RegimeError(std::string(what) + ": lower index p_phi=" + format_double(est.p_phi) +
                              " must exceed 1 for the sum-form comparison");
        return "sum";
    }
    throw RegimeError(std::string(what) + ": growth indices p_phi=" + format_double(est.p_phi) +
                      ", q_phi=" + format_double(est.q_phi) +
                      " straddle 2, so the index dichotomy gives no information here");
}

std::string resolve_form(const char* what, const EnsembleConfig& cfg, const IndexEstimate& est) {
    if (cfg.regime_override == "auto") return dichotomy_gate(what, est);
    if (cfg.regime_override == "sum" || cfg.regime_override == "max") return cfg.regime_override;
    throw ConfigError("regime_override: expected auto, sum, or max, got '" + cfg.regime_override +
                      "'");
}

std::size_t resolve_dim(const EnsembleConfig& cfg, const Filtration& filt) {
    if (cfg.dim != 0 && cfg.dim != filt.dim())
        throw ConfigError("dim=" + std::to_string(cfg.dim) + " conflicts with filtration '" +
                          filt.descriptor() + "' (dimension " + std::to_string(filt.dim()) + ")");
    return filt.dim();
}

void require_samples(const EnsembleConfig& cfg) {
    if (cfg.samples < 1) throw ConfigError("samples must be at least 1");
}

void echo_common(VerificationReport& r, const EnsembleConfig& cfg, const Filtration* filt,
                 std::size_t dim) {
    r.config.emplace_back("phi", cfg.phi);
    if (filt) r.config.emplace_back("filtration", filt->descriptor());
    r.config.emplace_back("dim", std::to_string(dim));
    r.config.emplace_back("samples", std::to_string(cfg.samples));
    r.config.emplace_back("seed", std::to_string(cfg.seed));
    r.config.emplace_back("ensemble", cfg.ensemble);
    if (cfg.quad != 0) r.config.emplace_back("quad", std::to_string(cfg.quad));
}

std::string optimizer_spec(const OptimizerSettings& s) {
    std::ostringstream os;
    os << "restarts=" << s.restarts << ",iterations=" << s.iterations
       << ",step_init=" << format_double(s.step_init) << ",step_tol=" << format_double(s.step_tol);
    return os.str();
}

std::uint64_t pattern_seed(const EnsembleConfig& cfg, int sample_index) {
    return mix64(mix64(cfg.seed ^ 0x7369676e736571ULL) ^ (std::uint64_t(sample_index) + 1));
}

constexpr double kZeroModular = 1e-14;  // denominators below this are skipped
constexpr int kSignPatternFallback = 2048;

}  // namespace

std::vector<cd> parse_alpha(const std::string& spec, std::size_t n) {
    std::vector<cd> out;
    if (spec == "ones") {
        out.assign(n, cd(1.0, 0.0));
        return out;
    }
    if (spec == "alternating") {
        for (std::size_t k = 0; k < n; ++k) out.emplace_back(k % 2 == 0 ? 1.0 : -1.0, 0.0);
        return out;
    }
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        const char* begin = tok.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0')
            throw InvalidParameter(
                "alpha: expected 'ones', 'alternating', or a comma-separated list of reals, got '" +
                spec + "'");
        out.emplace_back(v, 0.0);
    }
    if (out.size() < n)
        throw InvalidParameter("alpha: need at least " + std::to_string(n) + " symbols, got " +
                               std::to_string(out.size()));
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(out[k]) > 1.0 + 1e-12)
            throw InvalidParameter("alpha: symbol " + std::to_string(k + 1) + " has magnitude " +
                                   format_double(std::abs(out[k])) + " > 1");
    return out;
}

VerificationReport verify_transform(const EnsembleConfig& cfg) {
    const OrliczFunction phi = parse_phi_spec(cfg.phi);
    const IndexEstimate est = phi.indices();
    const Filtration filt = Filtration::from_descriptor(cfg.filtration);
    const std::size_t d = resolve_dim(cfg, filt);
    require_samples(cfg);
    require_two_sided_indices("transform", phi, est);
    const EnsembleKind kind = parse_ensemble_kind(cfg.ensemble);
    const std::vector<cd> alpha = parse_alpha(cfg.alpha, filt.levels());

    VerificationReport r;
    r.inequality = "transform";
    r.regime = RegimeInfo{est.p_phi, est.q_phi, "p_phi > 1 and finite doubling"};

    const auto [p0, p1] = bracket_exponents(est);
    WeakAccumulator weak{p0, p1};
    long skipped = 0;
    for (int i = 0; i < cfg.samples; ++i) {
        RngStream rng = sample_stream(cfg.seed, std::uint64_t(i));
        const Martingale m = random_martingale(filt, rng, kind);
        const Martingale tm = transform(m, alpha);
        const auto sx = singular_values_desc(m.final());
        const auto sy = singular_values_desc(tm.final());
        weak.add(sx, sy);
        const double mod_x = modular_from_sv(phi, sx);
        if (mod_x < kZeroModular) {
            ++skipped;
            continue;
        }
        const double mod_y = modular_from_sv(phi, sy);
        r.samples.push_back(SampleRow{i, mod_y, mod_x, mod_y / mod_x});
    }
    r.certified = certified_constant(phi, p0, p1, weak.a0(), weak.a1());
    r.aggregate = compute_aggregate(r.samples, skipped);
    r.pass = r.aggregate.max_ratio <= *r.certified;
    echo_common(r, cfg, &filt, d);
    r.config.emplace_back("alpha", cfg.alpha);
    r.config.emplace_back("p0", format_double(p0));
    r.config.emplace_back("p1", format_double(p1));
    return r;
}

VerificationReport verify_sign_equivalence(const EnsembleConfig& cfg) {
    const OrliczFunction phi = parse_phi_spec(cfg.phi);
    const IndexEstimate est = phi.indices();
    const Filtration filt = Filtration::from_descriptor(cfg.filtration);
    const std::size_t d = resolve_dim(cfg, filt);
    require_samples(cfg);
    require_two_sided_indices("sign-equivalence", phi, est);
    const EnsembleKind kind = parse_ensemble_kind(cfg.ensemble);
    const RademacherMode mode = RademacherMode::parse(cfg.rademacher, 0);

    VerificationReport r;
    r.inequality = "sign-equivalence";
    r.regime = RegimeInfo{est.p_phi, est.q_phi, "p_phi > 1 and finite doubling"};

    const std::size_t levels = filt.levels();
    const bool exhaustive = mode.kind == RademacherMode::Kind::Exact && levels <= 14;
    const long patterns = exhaustive ? (1L << levels)
                                     : (mode.kind == RademacherMode::Kind::MonteCarlo
                                            ? mode.samples
                                            : kSignPatternFallback);
    if (!exhaustive && mode.kind == RademacherMode::Kind::Exact)
        r.findings.push_back("sign patterns sampled (" + std::to_string(patterns) + " of 2^" +
                             std::to_string(levels) + "): exhaustive enumeration stops at 14 levels");

    const auto [p0, p1] = bracket_exponents(est);
    WeakAccumulator weak{p0, p1};
    long skipped = 0;
    std::vector<double> signs(levels);
    for (int i = 0; i < cfg.samples; ++i) {
        RngStream rng = sample_stream(cfg.seed, std::uint64_t(i));
        const Martingale m = random_martingale(filt, rng, kind);
        const std::vector<Matrix> dx = differences(m);
        const auto sx = singular_values_desc(m.final());
        const double base = modular_from_sv(phi, sx);

        RngStream prng(pattern_seed(cfg, i));
        double mod_max = -std::numeric_limits<double>::infinity();
        double mod_min = std::numeric_limits<double>::infinity();
        std::uint64_t word = 0;
        for (long pat = 0; pat < patterns; ++pat) {
            for (std::size_t k = 0; k < levels; ++k) {
                if (exhaustive) {
                    signs[k] = (pat >> k) & 1 ? -1.0 : 1.0;
                } else {
                    if (k % 64 == 0) word = prng.bits();
                    signs[k] = (word >> (k % 64)) & 1 ? -1.0 : 1.0;
                }
            }
            Matrix y(d, d);
            for (std::size_t k = 0; k < levels; ++k) y += signs[k] * dx[k];
            const auto sy = singular_values_desc(y);
            weak.add(sx, sy);
            const double mod_y = modular_from_sv(phi, sy);
            mod_max = std::max(mod_max, mod_y);
            mod_min = std::min(mod_min, mod_y);
        }
        if (base < kZeroModular) {
            skipped += 2;
            continue;
        }
        r.samples.push_back(SampleRow{2L * i, mod_max, base, mod_max / base});
        r.samples.push_back(SampleRow{2L * i + 1, mod_min, base, mod_min / base});
    }
    const double c = certified_constant(phi, p0, p1, weak.a0(), weak.a1());
    r.certified = c;
    r.aggregate = compute_aggregate(r.samples, skipped);
    r.pass = r.aggregate.max_ratio <= c && r.aggregate.min_ratio * c >= 1.0;
    echo_common(r, cfg, &filt, d);
    r.config.emplace_back("rademacher", mode.spec());
    r.config.emplace_back("patterns", std::to_string(patterns));
    r.config.emplace_back("p0", format_double(p0));
    r.config.emplace_back("p1", format_double(p1));
    return r;
}

VerificationReport verify_stein(const EnsembleConfig& cfg) {
    const OrliczFunction phi = parse_phi_spec(cfg.phi);
    const IndexEstimate est = phi.indices();
    const Filtration filt = Filtration::from_descriptor(cfg.filtration);
    const std::size_t d = resolve_dim(cfg, filt);
    require_samples(cfg);
    require_two_sided_indices("stein", phi, est);
    const EnsembleKind kind = parse_ensemble_kind(cfg.ensemble);
    const std::size_t len = cfg.seq_length == 0 ? filt.levels() : cfg.seq_length;
    if (len > filt.levels())
        throw ConfigError("seq_length=" + std::to_string(len) + " exceeds the filtration depth " +
                          std::to_string(filt.levels()));

    VerificationReport r;
    r.inequality = "stein";
    r.regime = RegimeInfo{est.p_phi, est.q_phi, "p_phi > 1 and finite doubling"};

    const auto [p0, p1] = bracket_exponents(est);
    WeakAccumulator weak_col{p0, p1};
    WeakAccumulator weak_row{p0, p1};
    const SublinearOperatorHandle t_col = stein_handle(filt, 'C');
    const SublinearOperatorHandle t_row = stein_handle(filt, 'R');
    long skipped = 0;
    for (int i = 0; i < cfg.samples; ++i) {
        RngStream rng = sample_stream(cfg.seed, std::uint64_t(i));
        const std::vector<Matrix> a = random_sequence(rng, d, len, kind);
        const std::vector<Matrix> ea = stein_map(filt, a);

        const double rhs_col = gram_phi_moment(phi, a, true);
        const double lhs_col = gram_phi_moment(phi, ea, true);
        const double rhs_row = gram_phi_moment(phi, a, false);
        const double lhs_row = gram_phi_moment(phi, ea, false);

        const Matrix xc = stein_embed(a, len, 'C');
        const Matrix xr = stein_embed(a, len, 'R');
        weak_col.add(singular_values_desc(xc), singular_values_desc(t_col.apply(xc)));
        weak_row.add(singular_values_desc(xr), singular_values_desc(t_row.apply(xr)));

        if (rhs_col < kZeroModular) ++skipped;
        else r.samples.push_back(SampleRow{2L * i, lhs_col, rhs_col, lhs_col / rhs_col});
        if (rhs_row < kZeroModular) ++skipped;
        else r.samples.push_back(SampleRow{2L * i + 1, lhs_row, rhs_row, lhs_row / rhs_row});
    }
    const double c_col = certified_constant(phi, p0, p1, weak_col.a0(), weak_col.a1());
    const double c_row = certified_constant(phi, p0, p1, weak_row.a0(), weak_row.a1());
    r.certified = std::max(c_col, c_row);
    r.aggregate = compute_aggregate(r.samples, skipped);
    r.pass = r.aggregate.max_ratio <= *r.certified;
    echo_common(r, cfg, &filt, d);
    r.config.emplace_back("seq_length", std::to_string(len));
    r.config.emplace_back("p0", format_double(p0));
    r.config.emplace_back("p1", format_double(p1));
    return r;
}

Decomposition decompose_optimal(const OrliczFunction& phi, const std::vector<Matrix>& xs,
                                const OptimizerSettings& settings, RngStream& rng,
                                const std::function<void(std::vector<Matrix>&)>& project) {
    if (xs.empty()) throw InvalidParameter("decompose_optimal: empty sequence");
    if (settings.restarts < 1 || settings.iterations < 0 || !(settings.step_init > 0.0) ||
        !(settings.step_tol > 0.0))
        throw InvalidParameter("decompose_optimal: invalid optimizer settings");
    const std::size_t d = xs.front().rows();
    const std::size_t n = xs.size();

    double fmax = 0.0;
    for (const Matrix& x : xs) fmax = std::max(fmax, x.frobenius_norm());
    const double entry_scale = fmax > 0.0 ? fmax / double(d) : 1.0;

    auto cost_of = [&](const std::vector<Matrix>& ys) {
        std::vector<Matrix> zs;
        zs.reserve(n);
        for (std::size_t k = 0; k < n; ++k) zs.push_back(xs[k] - ys[k]);
        return gram_phi_moment(phi, ys, true) + gram_phi_moment(phi, zs, false);
    };
    auto scaled = [&](double c) {
        std::vector<Matrix> ys;
        ys.reserve(n);
        for (const Matrix& x : xs) ys.push_back(c * x);
        return ys;
    };

    // feasible anchors: all-column, all-row, even split, then randomized
    // midpoints for the remaining restarts
    std::vector<std::vector<Matrix>> starts;
    starts.push_back(scaled(1.0));
    starts.push_back(scaled(0.0));
    if (settings.restarts > 2) starts.push_back(scaled(0.5));
    while (starts.size() < std::size_t(settings.restarts)) {
        std::vector<Matrix> ys = scaled(0.5);
        for (Matrix& y : ys)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) y(i, j) += 0.35 * entry_scale * rng.cgaussian();
        starts.push_back(std::move(ys));
    }
    if (project)
        for (auto& s : starts) project(s);

    std::vector<Matrix> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (auto& start : starts) {
        std::vector<Matrix> ys = start;
        double f = cost_of(ys);
        if (f < best_cost) {
            best_cost = f;
            best = ys;
        }
        double step = settings.step_init;
        for (int it = 0; it < settings.iterations && step > settings.step_tol * settings.step_init;
             ++it) {
            std::vector<Matrix> cand = ys;
            for (Matrix& y : cand)
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j)
                        y(i, j) += step * entry_scale * rng.cgaussian();
            if (project) project(cand);
            const double fc = cost_of(cand);
            if (fc < f) {
                ys = std::move(cand);
                f = fc;
                step *= 1.15;
            } else {
                step *= 0.75;
            }
        }
        if (f < best_cost) {
            best_cost = f;
            best = ys;
        }
    }

    Decomposition out;
    out.ys = std::move(best);
    out.zs.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.zs.push_back(xs[k] - out.ys[k]);
    out.value = best_cost;
    return out;
}

VerificationReport verify_khintchine(const EnsembleConfig& cfg) {
    const OrliczFunction phi = parse_phi_spec(cfg.phi);
    const IndexEstimate est = phi.indices();
    require_samples(cfg);
    const std::string form = resolve_form("khintchine", cfg, est);
    const std::size_t d = cfg.dim != 0 ? cfg.dim : Filtration::from_descriptor(cfg.filtration).dim();
    const std::size_t n = cfg.seq_length == 0 ? 4 : cfg.seq_length;
    const EnsembleKind kind = parse_ensemble_kind(cfg.ensemble);
    const RademacherMode mode = RademacherMode::parse(cfg.rademacher, 0);
    const bool power_exact = phi.family() == PhiFamily::Power && phi.param_a() >= 2.0 - 1e-12 &&
                             mode.kind == RademacherMode::Kind::Exact;

    VerificationReport r;
    r.inequality = "khintchine-" + form;
    r.regime = RegimeInfo{est.p_phi, est.q_phi,
                          form == "max" ? "p_phi > 2" : "1 < p_phi <= q_phi < 2"};

    long skipped = 0;
    long violations = 0;
    for (int i = 0; i < cfg.samples; ++i) {
        RngStream rng = sample_stream(cfg.seed, std::uint64_t(i));
        const std::vector<Matrix> xs = random_sequence(rng, d, n, kind);
        RademacherMode mi = mode;
        mi.seed = pattern_seed(cfg, i);
        const double rad = rademacher_phi_moment(phi, xs, mi).value;
        const double col = gram_phi_moment(phi, xs, true);
        const double row = gram_phi_moment(phi, xs, false);

        if (form == "sum") {
            const double mn = std::min(col, row);
            const Decomposition dec = decompose_optimal(phi, xs, cfg.optimizer, rng);
            if (dec.value > mn + 1e-12) {
                r.pass = false;
                r.findings.push_back("sample " + std::to_string(i) +
                                     ": decomposition search exceeded its trivial upper bound (" +
                                     format_double(dec.value) + " > " + format_double(mn) + ")");
            }
            if (mn < kZeroModular) ++skipped;
            else r.samples.push_back(SampleRow{2L * i, rad, mn, rad / mn});
            if (dec.value < kZeroModular) ++skipped;
            else r.samples.push_back(SampleRow{2L * i + 1, rad, dec.value, rad / dec.value});
        } else {
            const double lhs = std::max(col, row);
            if (rad < kZeroModular) {
                ++skipped;
                continue;
            }
            const double ratio = lhs / rad;
            r.samples.push_back(SampleRow{long(i), lhs, rad, ratio});
            if (ratio > 1.0 + 1e-9) {
                ++violations;
                if (power_exact || mode.kind == RademacherMode::Kind::Exact)
                    r.findings.push_back("sample " + std::to_string(i) +
                                         ": square-function moment exceeds the Rademacher average, ratio=" +
                                         format_double(ratio));
            }
        }
    }
    if (form == "max" && power_exact) r.pass = violations == 0;
    r.aggregate = compute_aggregate(r.samples, skipped);
    echo_common(r, cfg, nullptr, d);
    r.config.emplace_back("seq_length", std::to_string(n));
    r.config.emplace_back("rademacher", mode.spec());
    if (form == "sum") r.config.emplace_back("optimizer", optimizer_spec(cfg.optimizer));
    return r;
}

VerificationReport verify_bg(const EnsembleConfig& cfg) {
    const OrliczFunction phi = parse_phi_spec(cfg.phi);
    const IndexEstimate est = phi.indices();
    const Filtration filt = Filtration::from_descriptor(cfg.filtration);
    const std::size_t d = resolve_dim(cfg, filt);
    require_samples(cfg);
    const std::string form = resolve_form("burkholder-gundy", cfg, est);
    const EnsembleKind kind = parse_ensemble_kind(cfg.ensemble);
    const RademacherMode mode = RademacherMode::parse(cfg.rademacher, 0);
    const bool power_exact = phi.family() == PhiFamily::Power && phi.param_a() >= 2.0 - 1e-12 &&
                             mode.kind == RademacherMode::Kind::Exact && filt.levels() <= 14;

    VerificationReport r;
    r.inequality = "burkholder-gundy-" + form;
    r.regime = RegimeInfo{est.p_phi, est.q_phi,
                          form == "max" ? "p_phi > 2" : "1 < p_phi <= q_phi < 2"};

    // Re-impose martingale-difference structure after each mutation:
    // dy_0 stays level-0 measurable, dy_k keeps E_{k-1}(dy_k) = 0.
    const auto project = [&filt](std::vector<Matrix>& ys) {
        for (std::size_t k = 0; k < ys.size(); ++k) {
            Matrix ek = filt.conditional_expectation(k, ys[k]);
            if (k == 0) {
                ys[k] = std::move(ek);
            } else {
                ys[k] = ek - filt.conditional_expectation(k - 1, ek);
            }
        }
    };

    long skipped = 0;
    long violations = 0;
    bool subcheck_everywhere = true;
    for (int i = 0; i < cfg.samples; ++i) {
        RngStream rng = sample_stream(cfg.seed, std::uint64_t(i));
        const Martingale m = random_martingale(filt, rng, kind);
        const std::vector<Matrix> dx = differences(m);
        const double lhs = trace_phi_moment(phi, m.final());

        if (form == "sum") {
            const double col = gram_phi_moment(phi, dx, true);
            const double row = gram_phi_moment(phi, dx, false);
            const Decomposition dec = decompose_optimal(phi, dx, cfg.optimizer, rng, project);
            if (dec.value > std::min(col, row) + 1e-12) {
                r.pass = false;
                r.findings.push_back("sample " + std::to_string(i) +
                                     ": decomposition search exceeded its trivial upper bound (" +
                                     format_double(dec.value) + " > " +
                                     format_double(std::min(col, row)) + ")");
            }
            if (dec.value < kZeroModular) {
                ++skipped;
                continue;
            }
            r.samples.push_back(SampleRow{long(i), lhs, dec.value, lhs / dec.value});
        } else {
            const double col = gram_phi_moment(phi, dx, true);
            const double row = gram_phi_moment(phi, dx, false);
            const double rhs = std::max(col, row);
            if (rhs < kZeroModular) {
                ++skipped;
                continue;
            }
            r.samples.push_back(SampleRow{long(i), lhs, rhs, lhs / rhs});
            if (power_exact) {
                // convexity check: the square-function moment never exceeds
                // the exact Rademacher average of the differences
                RademacherMode mi;
                mi.kind = RademacherMode::Kind::Exact;
                const double rad = rademacher_phi_moment(phi, dx, mi).value;
                if (rhs > rad * (1.0 + 1e-9)) {
                    ++violations;
                    r.findings.push_back("sample " + std::to_string(i) +
                                         ": square-function moment exceeds the Rademacher average (" +
                                         format_double(rhs) + " > " + format_double(rad) + ")");
                }
            } else {
                subcheck_everywhere = false;
            }
        }
    }
    if (form == "max" && power_exact && subcheck_everywhere) r.pass = violations == 0;
    r.aggregate = compute_aggregate(r.samples, skipped);
    echo_common(r, cfg, &filt, d);
    r.config.emplace_back("rademacher", mode.spec());
    if (form == "sum") r.config.emplace_back("optimizer", optimizer_spec(cfg.optimizer));
    return r;
}

std::vector<VerificationReport> ensemble_run(const EnsembleConfig& cfg,
                                             const std::vector<std::string>& which) {
    std::vector<VerificationReport> out;
    out.reserve(which.size());
    for (const std::string& id : which) {
        EnsembleConfig sub = cfg;
        sub.seed = mix64(cfg.seed ^ hash_string(id));
        VerificationReport (*run)(const EnsembleConfig&) = nullptr;
        if (id == "transform") run = verify_transform;
        else if (id == "signs") run = verify_sign_equivalence;
        else if (id == "stein") run = verify_stein;
        else if (id == "khintchine") run = verify_khintchine;
        else if (id == "bg") run = verify_bg;
        else
            throw ConfigError("ensemble: unknown inequality id '" + id +
                              "' (expected transform, signs, stein, khintchine, or bg)");
        try {
            out.push_back(run(sub));
        } catch (const ConfigError&) {
            throw;  // the request itself is malformed; do not soften
        } catch (const std::exception& e) {
            VerificationReport r;
            r.inequality = id;
            r.error = e.what();
            echo_common(r, sub, nullptr, cfg.dim);
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace ncorlicz
