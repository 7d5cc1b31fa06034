#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ncorlicz/martingale.hpp"
#include "ncorlicz/matrix.hpp"
#include "ncorlicz/orlicz.hpp"
#include "ncorlicz/random.hpp"
#include "ncorlicz/report.hpp"

namespace ncorlicz {

// Settings for the derivative-free decomposition search used by the
// Khintchine and Burkholder-Gundy lower-bound checks.
struct OptimizerSettings {
    int restarts = 4;
    int iterations = 200;
    double step_init = 0.25;
    double step_tol = 1e-6;
};

// Shared configuration for the inequality verifiers.  `dim == 0` means
// "derive from the filtration descriptor".  `regime_override` is a test
// hook for the Burkholder-Gundy verifier ("auto" | "sum" | "max"); it is
// not exposed on the command line.
struct EnsembleConfig {
    std::string phi = "power:p=2";
    std::string filtration = "tensor:3";
    std::size_t dim = 0;
    int samples = 50;
    std::uint64_t seed = 1;
    std::string rademacher = "exact";
    std::size_t seq_length = 0;  // 0: filtration depth (stein), 4 (khintchine)
    std::string ensemble = "gaussian";
    std::string alpha = "ones";
    long long quad = 0;  // reserved: circle-quadrature override, echoed only
    OptimizerSettings optimizer;
    std::string regime_override = "auto";
};

// Expand a symbol-sequence spec ("ones", "alternating", or a comma list of
// reals) to exactly n coefficients.  A comma list must supply at least n
// values; the magnitude of every coefficient must be <= 1.
std::vector<cd> parse_alpha(const std::string& spec, std::size_t n);

// Result of the two-sided decomposition search: xs = ys + zs with the
// column cost charged to ys and the row cost to zs.
struct Decomposition {
    std::vector<Matrix> ys;
    std::vector<Matrix> zs;
    double value = 0.0;  // trace_phi_moment(colsq(ys)) + trace_phi_moment(rowsq(zs))
};

// Multi-start (1+1)-evolution search for a decomposition minimizing the
// combined column/row moment.  `project` (optional) restores feasibility
// after each mutation, e.g. re-imposing martingale-difference structure.
// The returned value never exceeds the pure column or pure row cost.
Decomposition decompose_optimal(const OrliczFunction& phi, const std::vector<Matrix>& xs,
                                const OptimizerSettings& settings, RngStream& rng,
                                const std::function<void(std::vector<Matrix>&)>& project = {});

VerificationReport verify_transform(const EnsembleConfig& cfg);
VerificationReport verify_sign_equivalence(const EnsembleConfig& cfg);
VerificationReport verify_stein(const EnsembleConfig& cfg);
VerificationReport verify_khintchine(const EnsembleConfig& cfg);
VerificationReport verify_bg(const EnsembleConfig& cfg);

// Run the named verifiers ("transform", "signs", "stein", "khintchine",
// "bg") with per-verifier derived seeds.  Runtime failures of one verifier
// are captured in its report's `error` field; unknown names are
// configuration errors and abort the run.
std::vector<VerificationReport> ensemble_run(const EnsembleConfig& cfg,
                                             const std::vector<std::string>& which);

}  // namespace ncorlicz
