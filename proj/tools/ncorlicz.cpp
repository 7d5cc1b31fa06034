// Command-line front end: index/doubling diagnostics, interpolation runs,
// and the inequality verifiers, with JSON/CSV report output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/errors.hpp"
#include "ncorlicz/interpolation.hpp"
#include "ncorlicz/martingale.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/report.hpp"
#include "ncorlicz/util.hpp"
#include "ncorlicz/verify.hpp"

namespace {

using namespace ncorlicz;

struct Opts {
    std::string phi = "power:p=2";
    std::string filtration = "tensor:3";
    std::size_t dim = 0;
    int samples = 50;
    std::uint64_t seed = 1;
    std::string rademacher = "exact";
    std::size_t seq_length = 0;
    std::string ensemble = "gaussian";
    std::string alpha = "ones";
    long long quad = 0;
    bool scalar_level = false;
    std::string format = "json";
    std::string out;
    std::string config_path;
    // interpolate
    double p0 = 1.05;
    std::string p1 = "3";
    std::string op = "identity";
    // ensemble
    std::string which = "transform,signs,stein,khintchine,bg";
    OptimizerSettings optimizer;
};

// Tracks which config keys a subcommand accepts and which were given on the
// command line (flags take precedence over the config file).
struct Binder {
    CLI::App* cmd = nullptr;
    std::map<std::string, CLI::Option*> by_key;
    bool allow_optimizer = false;

    template <typename T>
    void opt(const std::string& key, const std::string& flag, T& ref, const std::string& help) {
        by_key[key] = cmd->add_option(flag, ref, help);
    }
    void flag(const std::string& key, const std::string& name, bool& ref,
              const std::string& help) {
        by_key[key] = cmd->add_flag(name, ref, help);
    }
};

std::string jstr(const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    o += '"';
    return o;
}

void assign_config_value(const std::string& key, const nlohmann::json& val, Opts& o) {
    auto want_string = [&]() -> std::string {
        if (!val.is_string())
            throw ConfigError("config file: key '" + key + "' must be a string");
        return val.get<std::string>();
    };
    auto want_uint = [&]() -> std::uint64_t {
        if (!val.is_number_integer() && !val.is_number_unsigned())
            throw ConfigError("config file: key '" + key + "' must be an integer");
        if (val.is_number_integer() && val.get<long long>() < 0)
            throw ConfigError("config file: key '" + key + "' must be nonnegative");
        return val.get<std::uint64_t>();
    };

    if (key == "phi") o.phi = want_string();
    else if (key == "filtration") o.filtration = want_string();
    else if (key == "rademacher") o.rademacher = want_string();
    else if (key == "ensemble") o.ensemble = want_string();
    else if (key == "alpha") o.alpha = want_string();
    else if (key == "format") o.format = want_string();
    else if (key == "out") o.out = want_string();
    else if (key == "op") o.op = want_string();
    else if (key == "p1") o.p1 = want_string();
    else if (key == "which") o.which = want_string();
    else if (key == "dim") o.dim = std::size_t(want_uint());
    else if (key == "samples") o.samples = int(want_uint());
    else if (key == "seed") o.seed = want_uint();
    else if (key == "seq_length") o.seq_length = std::size_t(want_uint());
    else if (key == "quad") o.quad = (long long)(want_uint());
    else if (key == "p0") {
        if (!val.is_number()) throw ConfigError("config file: key 'p0' must be a number");
        o.p0 = val.get<double>();
    } else if (key == "scalar_level") {
        if (!val.is_boolean())
            throw ConfigError("config file: key 'scalar_level' must be a boolean");
        o.scalar_level = val.get<bool>();
    } else {
        throw ConfigError("config file: unhandled key '" + key + "'");
    }
}

void apply_config_file(const Binder& b, Opts& o) {
    std::ifstream f(o.config_path);
    if (!f) throw ConfigError("cannot open config file '" + o.config_path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + o.config_path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file: expected a JSON object");
    for (const auto& [key, val] : j.items()) {
        if (key == "optimizer") {
            if (!b.allow_optimizer)
                throw ConfigError("config file: unknown key 'optimizer' for this command");
            if (!val.is_object())
                throw ConfigError("config file: key 'optimizer' must be an object");
            for (const auto& [ok, ov] : val.items()) {
                if (!ov.is_number())
                    throw ConfigError("config file: optimizer key '" + ok + "' must be a number");
                if (ok == "restarts") o.optimizer.restarts = ov.get<int>();
                else if (ok == "iterations") o.optimizer.iterations = ov.get<int>();
                else if (ok == "step_init") o.optimizer.step_init = ov.get<double>();
                else if (ok == "step_tol") o.optimizer.step_tol = ov.get<double>();
                else throw ConfigError("config file: unknown optimizer key '" + ok + "'");
            }
            continue;
        }
        auto it = b.by_key.find(key);
        if (it == b.by_key.end())
            throw ConfigError("config file: unknown key '" + key + "' for this command");
        if (it->second->count() > 0) continue;  // command-line flag wins
        assign_config_value(key, val, o);
    }
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + out_path + "'");
    f << text;
}

std::string render_reports(const std::vector<VerificationReport>& rs, const std::string& format) {
    if (format == "json") return reports_to_json(rs) + "\n";
    if (format == "csv") return reports_to_csv(rs);
    throw ConfigError("format: expected json or csv, got '" + format + "'");
}

int exit_from(const std::vector<VerificationReport>& rs) {
    for (const auto& r : rs)
        if (r.pass.has_value() && !*r.pass) return 1;
    return 0;
}

EnsembleConfig to_ensemble_config(const Opts& o) {
    EnsembleConfig cfg;
    cfg.phi = o.phi;
    cfg.filtration = o.filtration;
    cfg.dim = o.dim;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.rademacher = o.rademacher;
    cfg.seq_length = o.seq_length;
    cfg.ensemble = o.ensemble;
    cfg.alpha = o.alpha;
    cfg.quad = o.quad;
    cfg.optimizer = o.optimizer;
    return cfg;
}

void fold_scalar_level(Opts& o) {
    if (!o.scalar_level) return;
    if (!o.filtration.empty() && o.filtration.front() == '{')
        throw ConfigError(
            "scalar-level: set \"scalar_level\" inside the JSON filtration descriptor instead");
    if (o.filtration.find("+scalar") == std::string::npos) o.filtration += "+scalar";
}

void add_common(Binder& b, Opts& o, bool with_rademacher = true) {
    b.opt("phi", "--phi", o.phi, "Orlicz function spec, e.g. power:p=2, powerlog:a=1.2,b=0.5");
    b.opt("filtration", "--filtration", o.filtration, "filtration descriptor, e.g. tensor:3");
    b.opt("dim", "--dim", o.dim, "algebra dimension (0: derive from the filtration)");
    b.opt("samples", "--samples", o.samples, "ensemble size");
    b.opt("seed", "--seed", o.seed, "master RNG seed");
    b.opt("ensemble", "--ensemble", o.ensemble, "gaussian | hermitian | diagonal");
    b.opt("alpha", "--alpha", o.alpha, "transform symbols: ones | alternating | list");
    if (with_rademacher)
        b.opt("rademacher", "--rademacher", o.rademacher, "exact | mc:<samples>");
    b.opt("seq_length", "--seq-length", o.seq_length, "sequence length (0: auto)");
    b.opt("quad", "--quad", o.quad, "circle-quadrature override (echoed)");
    b.flag("scalar_level", "--scalar-level", o.scalar_level, "prepend the scalar level");
    b.opt("format", "--format", o.format, "json | csv");
    b.opt("out", "--out", o.out, "write the report here instead of stdout");
    b.cmd->add_option("--config", o.config_path, "JSON config file (flags take precedence)");
}

int run(int argc, char** argv) {
    CLI::App app{"noncommutative Orlicz moment inequalities on tracial matrix algebras"};
    app.require_subcommand(1);
    Opts o;

    // indices / delta2: function diagnostics only
    Binder b_indices{app.add_subcommand("indices", "estimate the growth indices of an Orlicz function")};
    b_indices.opt("phi", "--phi", o.phi, "Orlicz function spec");
    b_indices.opt("out", "--out", o.out, "write the result here instead of stdout");
    b_indices.cmd->add_option("--config", o.config_path, "JSON config file");

    Binder b_delta2{app.add_subcommand("delta2", "doubling constant sup Phi(2t)/Phi(t)")};
    b_delta2.opt("phi", "--phi", o.phi, "Orlicz function spec");
    b_delta2.opt("out", "--out", o.out, "write the result here instead of stdout");
    b_delta2.cmd->add_option("--config", o.config_path, "JSON config file");

    // interpolate
    Binder b_interp{app.add_subcommand(
        "interpolate", "weak-type endpoint measurement and the certified moment bound")};
    add_common(b_interp, o, /*with_rademacher=*/false);
    b_interp.opt("p0", "--p0", o.p0, "lower endpoint exponent (>= 1, below p_phi)");
    b_interp.opt("p1", "--p1", o.p1, "upper endpoint exponent (above q_phi, 'inf' allowed)");
    b_interp.opt("op", "--op", o.op, "identity | scale:<v> | transform | stein");

    // verify <inequality>
    CLI::App* verify = app.add_subcommand("verify", "run one inequality verifier");
    verify->require_subcommand(1);
    std::map<std::string, Binder> b_verify;
    for (const char* name : {"transform", "signs", "stein", "khintchine", "bg"}) {
        Binder b{verify->add_subcommand(name, std::string("verify the ") + name + " inequality")};
        add_common(b, o);
        b.allow_optimizer = true;
        b_verify.emplace(name, std::move(b));
    }

    // ensemble
    Binder b_ens{app.add_subcommand("ensemble", "run several verifiers with derived seeds")};
    add_common(b_ens, o);
    b_ens.opt("which", "--which", o.which, "comma list of verifiers to run");
    b_ens.allow_optimizer = true;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const Binder* active = nullptr;
    std::string leaf;
    if (b_indices.cmd->parsed()) { active = &b_indices; leaf = "indices"; }
    else if (b_delta2.cmd->parsed()) { active = &b_delta2; leaf = "delta2"; }
    else if (b_interp.cmd->parsed()) { active = &b_interp; leaf = "interpolate"; }
    else if (b_ens.cmd->parsed()) { active = &b_ens; leaf = "ensemble"; }
    else {
        for (auto& [name, b] : b_verify)
            if (b.cmd->parsed()) { active = &b; leaf = "verify:" + name; }
    }
    if (!o.config_path.empty()) apply_config_file(*active, o);
    fold_scalar_level(o);

    if (leaf == "indices") {
        const OrliczFunction phi = parse_phi_spec(o.phi);
        const IndexEstimate& est = phi.indices();
        emit("{\"phi\":" + jstr(o.phi) + ",\"p_phi\":" + format_double(est.p_phi) +
                 ",\"q_phi\":" + format_double(est.q_phi) +
                 ",\"residual\":" + format_double(est.residual) + "}\n",
             o.out);
        return 0;
    }
    if (leaf == "delta2") {
        const OrliczFunction phi = parse_phi_spec(o.phi);
        const auto k = phi.delta2_constant();
        emit("{\"phi\":" + jstr(o.phi) +
                 ",\"delta2\":" + (k ? format_double(*k) : std::string("null")) + "}\n",
             o.out);
        return 0;
    }
    if (leaf == "interpolate") {
        const OrliczFunction phi = parse_phi_spec(o.phi);
        const double p1v = o.p1 == "inf" ? std::numeric_limits<double>::infinity() : [&] {
            char* end = nullptr;
            const double v = std::strtod(o.p1.c_str(), &end);
            if (end == o.p1.c_str() || *end != '\0')
                throw ConfigError("p1: expected a number or 'inf', got '" + o.p1 + "'");
            return v;
        }();
        if (o.samples < 1) throw ConfigError("samples must be at least 1");
        const EnsembleKind kind = parse_ensemble_kind(o.ensemble);

        SublinearOperatorHandle T;
        std::vector<Matrix> ensemble;
        ensemble.reserve(std::size_t(o.samples));
        if (o.op == "identity" || o.op.rfind("scale:", 0) == 0) {
            const std::size_t d = o.dim != 0 ? o.dim : 8;
            if (o.op == "identity") {
                T = identity_handle();
            } else {
                char* end = nullptr;
                const double v = std::strtod(o.op.c_str() + 6, &end);
                if (end == o.op.c_str() + 6 || *end != '\0')
                    throw ConfigError("op: bad scale factor in '" + o.op + "'");
                T = scaling_handle(v);
            }
            for (int i = 0; i < o.samples; ++i) {
                RngStream rng = sample_stream(o.seed, std::uint64_t(i));
                ensemble.push_back(random_operator(rng, d, kind));
            }
        } else if (o.op == "transform") {
            const Filtration filt = Filtration::from_descriptor(o.filtration);
            if (o.dim != 0 && o.dim != filt.dim())
                throw ConfigError("dim conflicts with the filtration dimension");
            T = transform_handle(filt, parse_alpha(o.alpha, filt.levels()));
            for (int i = 0; i < o.samples; ++i) {
                RngStream rng = sample_stream(o.seed, std::uint64_t(i));
                ensemble.push_back(random_operator(rng, filt.dim(), kind));
            }
        } else if (o.op == "stein") {
            const Filtration filt = Filtration::from_descriptor(o.filtration);
            if (o.dim != 0 && o.dim != filt.dim())
                throw ConfigError("dim conflicts with the filtration dimension");
            const std::size_t len = o.seq_length == 0 ? filt.levels() : o.seq_length;
            if (len > filt.levels())
                throw ConfigError("seq_length exceeds the filtration depth");
            T = stein_handle(filt, 'C');
            for (int i = 0; i < o.samples; ++i) {
                RngStream rng = sample_stream(o.seed, std::uint64_t(i));
                ensemble.push_back(stein_embed(random_sequence(rng, filt.dim(), len, kind), len, 'C'));
            }
        } else {
            throw ConfigError("op: expected identity, scale:<v>, transform, or stein, got '" +
                              o.op + "'");
        }
        const std::vector<VerificationReport> rs{verify_interpolation(T, phi, o.p0, p1v, ensemble)};
        emit(render_reports(rs, o.format), o.out);
        return exit_from(rs);
    }
    if (leaf == "ensemble") {
        std::vector<std::string> which;
        std::istringstream is(o.which);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) which.push_back(tok);
        if (which.empty()) throw ConfigError("which: empty verifier list");
        const std::vector<VerificationReport> rs = ensemble_run(to_ensemble_config(o), which);
        emit(render_reports(rs, o.format), o.out);
        return exit_from(rs);
    }

    // verify:<name>
    const std::string name = leaf.substr(leaf.find(':') + 1);
    const EnsembleConfig cfg = to_ensemble_config(o);
    VerificationReport rep;
    if (name == "transform") rep = verify_transform(cfg);
    else if (name == "signs") rep = verify_sign_equivalence(cfg);
    else if (name == "stein") rep = verify_stein(cfg);
    else if (name == "khintchine") rep = verify_khintchine(cfg);
    else rep = verify_bg(cfg);
    const std::vector<VerificationReport> rs{rep};
    emit(render_reports(rs, o.format), o.out);
    return exit_from(rs);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DivergentIntegral& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
