#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace ncorlicz {

enum class PhiFamily { Power, PowerLog, PowerSin, Custom };

// Matuszewska-type growth indices estimated from the growth function
// M(t) = sup_s phi(ts)/phi(s): p_phi from the slope of log M vs log t over
// three small decades, q_phi over three large ones.
struct IndexEstimate {
    double p_phi = 1.0;
    double q_phi = 1.0;
    double residual = 0.0;   // worst least-squares residual of the two fits
    double grid_lo = 0.0;    // s-grid bounds used for the sup (natural log)
    double grid_hi = 0.0;
    int grid_points = 0;
    bool degraded = false;   // custom callable or clamped grid
};

struct GrowthDiagnostics {
    bool clamped = false;    // some ratios overflowed and were dropped/capped
    int skipped = 0;
};

// A convex growth function phi: [0,inf) -> [0,inf) with phi(0) = 0 from one
// of three closed parametric families:
//   power      phi(t) = t^p                     p >= 1
//   powerlog   phi(t) = t^a log(1 + t^b)        a > 1, b > 0
//   powersin   phi(t) = t^p (1 + c sin(p log t))  0 < c < 1/2, p > 1/(1-2c)
// plus a test-only escape hatch wrapping an arbitrary callable (no index or
// convexity guarantees; evaluation only).
class OrliczFunction {
public:
    static OrliczFunction power(double p);
    static OrliczFunction power_log(double a, double b);
    static OrliczFunction power_sin(double p, double c);
    // Test-only: wraps a callable as-is. Growth/index machinery falls back
    // to direct evaluation with clamping and marks estimates degraded.
    static OrliczFunction custom(std::string name, std::function<double(double)> fn);

    PhiFamily family() const { return family_; }
    double param_a() const { return a_; }   // p (power, powersin) or a (powerlog)
    double param_b() const { return b_; }   // b (powerlog) or c (powersin)
    const std::string& spec() const { return spec_; }

    double eval(double t) const;
    // Right derivative; at t = 0 the limit from the right.
    double eval_derivative(double t) const;

    // log phi(e^u), evaluated stably over the whole double range.
    // Only the three closed families have a log form.
    bool has_log_form() const { return family_ != PhiFamily::Custom; }
    double log_eval(double u) const;

    // Grid estimate of M(t) = sup_s phi(ts)/phi(s) over the standard
    // log-uniform grid s in [1e-6, 1e6] (2000 points).
    double growth_function(double t, GrowthDiagnostics* diag = nullptr) const;

    // Cached estimates; thread-safe lazy initialization.
    const IndexEstimate& indices() const;
    // sup_t phi(2t)/phi(t) over the standard grid; nullopt when the running
    // sup exceeds 1e12 (treated as unbounded).
    std::optional<double> delta2_constant() const;
    // sup_t t phi'(t)/phi(t) over the standard grid.
    double derivative_ratio_sup() const;

    // B0(p) = sup_t t^p (integral_0^t s^{-p-1} phi(s) ds) / phi(t),  1 <= p < p_phi
    // B1(q) = sup_t t^q (integral_t^inf s^{-q-1} phi(s) ds) / phi(t),  q > q_phi
    // Throw DivergentIntegral outside those ranges.
    double integral_bound_low(double p) const;
    double integral_bound_high(double q) const;

private:
    OrliczFunction() = default;
    struct Cache;

    PhiFamily family_ = PhiFamily::Power;
    double a_ = 1.0;
    double b_ = 0.0;
    std::string spec_;
    std::function<double(double)> custom_;
    std::shared_ptr<Cache> cache_;
};

// Parses the mini-language: "power:p=2", "powerlog:a=1.2,b=0.5",
// "powersin:p=4,c=0.2". Errors name the offending key or token.
OrliczFunction parse_phi_spec(const std::string& spec);

}  // namespace ncorlicz
