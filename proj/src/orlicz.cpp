#include "ncorlicz/orlicz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <vector>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/util.hpp"

namespace ncorlicz {

namespace {

constexpr double kGridLo = -6.0 * 2.302585092994045684;  // ln 1e-6
constexpr double kGridHi = +6.0 * 2.302585092994045684;  // ln 1e6
constexpr int kGridPoints = 2000;
constexpr double kDelta2Cutoff = 1e12;

std::vector<double> standard_log_grid() {
    std::vector<double> g(kGridPoints);
    const double step = (kGridHi - kGridLo) / (kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) g[i] = kGridLo + step * i;
    return g;
}

// log(log(1 + e^w)), stable over the whole double range.
double log_log1p_exp(double w) {
    if (w < -36.0) return w;                        // log1p(e^w) ~ e^w
    if (w > 36.0) return std::log(w + std::exp(-w));  // log1p(e^w) ~ w + e^-w
    return std::log(std::log1p(std::exp(w)));
}

struct FitResult {
    double slope;
    double residual;
};

FitResult least_squares_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double xm = 0, ym = 0;
    for (std::size_t i = 0; i < n; ++i) { xm += x[i]; ym += y[i]; }
    xm /= double(n);
    ym /= double(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - xm) * (y[i] - ym);
        sxx += (x[i] - xm) * (x[i] - xm);
    }
    const double slope = sxy / sxx;
    const double icpt = ym - slope * xm;
    double res = 0;
    for (std::size_t i = 0; i < n; ++i)
        res = std::max(res, std::fabs(y[i] - (icpt + slope * x[i])));
    return {slope, res};
}

// Adaptive Simpson on [a, b] with an absolute tolerance.
template <typename F>
double simpson_rec(const F& f, double a, double m, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 24);
}

double parse_number(const std::string& token, const std::string& key) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw InvalidParameter("phi spec: value for key '" + key + "' is not a number: '" +
                               token + "'");
    }
    if (pos != token.size())
        throw InvalidParameter("phi spec: trailing characters in value for key '" + key +
                               "': '" + token + "'");
    return v;
}

std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

struct OrliczFunction::Cache {
    std::once_flag idx_once, d2_once, dsup_once;
    IndexEstimate idx;
    std::optional<double> d2;
    double dsup = 0.0;
};

OrliczFunction OrliczFunction::power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw InvalidParameter("power: parameter p must satisfy p >= 1, got p=" +
                               format_param(p));
    OrliczFunction f;
    f.family_ = PhiFamily::Power;
    f.a_ = p;
    f.spec_ = "power:p=" + format_param(p);
    f.cache_ = std::make_shared<Cache>();
    return f;
}

OrliczFunction OrliczFunction::power_log(double a, double b) {
    if (!(a > 1.0) || !std::isfinite(a))
        throw InvalidParameter("powerlog: parameter a must satisfy a > 1, got a=" +
                               format_param(a));
    if (!(b > 0.0) || !std::isfinite(b))
        throw InvalidParameter("powerlog: parameter b must satisfy b > 0, got b=" +
                               format_param(b));
    OrliczFunction f;
    f.family_ = PhiFamily::PowerLog;
    f.a_ = a;
    f.b_ = b;
    f.spec_ = "powerlog:a=" + format_param(a) + ",b=" + format_param(b);
    f.cache_ = std::make_shared<Cache>();
    return f;
}

OrliczFunction OrliczFunction::power_sin(double p, double c) {
    if (!(c > 0.0 && c < 0.5))
        throw InvalidParameter("powersin: parameter c must satisfy 0 < c < 1/2, got c=" +
                               format_param(c));
    if (!(p > 1.0 / (1.0 - 2.0 * c)) || !std::isfinite(p))
        throw InvalidParameter("powersin: parameter p must satisfy p > 1/(1-2c), got p=" +
                               format_param(p));
    OrliczFunction f;
    f.family_ = PhiFamily::PowerSin;
    f.a_ = p;
    f.b_ = c;
    f.spec_ = "powersin:p=" + format_param(p) + ",c=" + format_param(c);
    f.cache_ = std::make_shared<Cache>();
    return f;
}

OrliczFunction OrliczFunction::custom(std::string name, std::function<double(double)> fn) {
    if (!fn) throw InvalidParameter("custom: callable must be non-empty");
    OrliczFunction f;
    f.family_ = PhiFamily::Custom;
    f.spec_ = "custom:" + name;
    f.custom_ = std::move(fn);
    f.cache_ = std::make_shared<Cache>();
    return f;
}

double OrliczFunction::eval(double t) const {
    if (!(t >= 0.0)) throw InvalidParameter("phi: argument must be >= 0");
    if (t == 0.0) return 0.0;
    switch (family_) {
        case PhiFamily::Power:
            return std::pow(t, a_);
        case PhiFamily::PowerLog:
            return std::pow(t, a_) * std::log1p(std::pow(t, b_));
        case PhiFamily::PowerSin:
            return std::pow(t, a_) * (1.0 + b_ * std::sin(a_ * std::log(t)));
        case PhiFamily::Custom:
            return custom_(t);
    }
    return 0.0;
}

double OrliczFunction::eval_derivative(double t) const {
    if (!(t >= 0.0)) throw InvalidParameter("phi: argument must be >= 0");
    if (t == 0.0) {
        // limit from the right
        if (family_ == PhiFamily::Power && a_ == 1.0) return 1.0;
        if (family_ == PhiFamily::Custom) {
            const double h = 1e-8;
            return (custom_(h) - custom_(0.0)) / h;
        }
        return 0.0;
    }
    switch (family_) {
        case PhiFamily::Power:
            return a_ * std::pow(t, a_ - 1.0);
        case PhiFamily::PowerLog: {
            const double tb = std::pow(t, b_);
            return a_ * std::pow(t, a_ - 1.0) * std::log1p(tb) +
                   b_ * std::pow(t, a_ + b_ - 1.0) / (1.0 + tb);
        }
        case PhiFamily::PowerSin: {
            const double th = a_ * std::log(t);
            return a_ * std::pow(t, a_ - 1.0) *
                   (1.0 + b_ * std::sin(th) + b_ * std::cos(th));
        }
        case PhiFamily::Custom: {
            const double h = std::max(1e-8, 1e-8 * t);
            return (custom_(t + h) - custom_(std::max(0.0, t - h))) / (2.0 * h);
        }
    }
    return 0.0;
}

double OrliczFunction::log_eval(double u) const {
    switch (family_) {
        case PhiFamily::Power:
            return a_ * u;
        case PhiFamily::PowerLog:
            return a_ * u + log_log1p_exp(b_ * u);
        case PhiFamily::PowerSin:
            return a_ * u + std::log1p(b_ * std::sin(a_ * u));
        case PhiFamily::Custom:
            break;
    }
    throw InvalidParameter("log_eval: no closed log form for custom phi");
}

double OrliczFunction::growth_function(double t, GrowthDiagnostics* diag) const {
    if (!(t > 0.0)) throw InvalidParameter("growth_function: t must be > 0");
    const auto grid = standard_log_grid();
    double best = 0.0;
    GrowthDiagnostics d;
    if (has_log_form()) {
        const double lt = std::log(t);
        for (double u : grid) {
            const double diff = log_eval(u + lt) - log_eval(u);
            if (diff > 700.0) {
                d.clamped = true;
                best = std::numeric_limits<double>::max();
                continue;
            }
            best = std::max(best, std::exp(diff));
        }
    } else {
        for (double u : grid) {
            const double s = std::exp(u);
            const double den = custom_(s);
            const double num = custom_(t * s);
            if (!std::isfinite(num) || !std::isfinite(den) || den <= 0.0) {
                d.skipped++;
                d.clamped = true;
                continue;
            }
            best = std::max(best, num / den);
        }
    }
    if (diag) *diag = d;
    return best;
}

const IndexEstimate& OrliczFunction::indices() const {
    std::call_once(cache_->idx_once, [this] {
        IndexEstimate est;
        const std::array<double, 3> lts_p = {std::log(1e-3), std::log(1e-4), std::log(1e-5)};
        const std::array<double, 3> lts_q = {std::log(1e3), std::log(1e4), std::log(1e5)};

        std::vector<double> grid;
        if (has_log_form()) {
            // The sup over s converges only logarithmically for the log
            // family, so the index fit runs on a much wider grid than the
            // standard one, entirely in log coordinates. The step resolves
            // the sine-modulated family's oscillation.
            const double lo = std::log(1e-240), hi = std::log(1e240);
            const double p_hint = std::max(1.0, family_ == PhiFamily::PowerLog ? a_ + b_ : a_);
            double step = std::min(0.0138, 0.02 / p_hint);
            const int max_points = 900000;
            int n = int((hi - lo) / step) + 2;
            if (n > max_points) { n = max_points; }
            step = (hi - lo) / (n - 1);
            grid.resize(std::size_t(n));
            for (int i = 0; i < n; ++i) grid[std::size_t(i)] = lo + step * i;
            est.grid_lo = lo;
            est.grid_hi = hi;
            est.grid_points = n;
        } else {
            grid = standard_log_grid();
            est.grid_lo = kGridLo;
            est.grid_hi = kGridHi;
            est.grid_points = kGridPoints;
            est.degraded = true;
        }

        auto log_growth = [&](double lt) {
            double best = -std::numeric_limits<double>::infinity();
            if (has_log_form()) {
                for (double u : grid) best = std::max(best, log_eval(u + lt) - log_eval(u));
            } else {
                for (double u : grid) {
                    const double s = std::exp(u);
                    const double den = custom_(s);
                    const double num = custom_(std::exp(lt) * s);
                    if (!std::isfinite(num) || !std::isfinite(den) || den <= 0.0 || num <= 0.0)
                        continue;
                    best = std::max(best, std::log(num) - std::log(den));
                }
            }
            return best;
        };

        std::array<double, 3> yp{}, yq{};
        for (int i = 0; i < 3; ++i) yp[std::size_t(i)] = log_growth(lts_p[std::size_t(i)]);
        for (int i = 0; i < 3; ++i) yq[std::size_t(i)] = log_growth(lts_q[std::size_t(i)]);
        const auto fp = least_squares_slope(lts_p, yp);
        const auto fq = least_squares_slope(lts_q, yq);
        est.p_phi = std::max(1.0, fp.slope);
        est.q_phi = std::max(est.p_phi, fq.slope);
        est.residual = std::max(fp.residual, fq.residual);
        cache_->idx = est;
    });
    return cache_->idx;
}

std::optional<double> OrliczFunction::delta2_constant() const {
    std::call_once(cache_->d2_once, [this] {
        const auto grid = standard_log_grid();
        const double l2 = std::log(2.0);
        double best = 0.0;
        bool unbounded = false;
        if (has_log_form()) {
            for (double u : grid) {
                const double diff = log_eval(u + l2) - log_eval(u);
                best = std::max(best, diff > 700.0 ? kDelta2Cutoff * 2.0 : std::exp(diff));
                if (best > kDelta2Cutoff) { unbounded = true; break; }
            }
        } else {
            for (double u : grid) {
                const double s = std::exp(u);
                const double den = custom_(s);
                const double num = custom_(2.0 * s);
                if (!std::isfinite(den) || den <= 0.0) continue;
                if (!std::isfinite(num)) { unbounded = true; break; }
                best = std::max(best, num / den);
                if (best > kDelta2Cutoff) { unbounded = true; break; }
            }
        }
        cache_->d2 = unbounded ? std::optional<double>{} : std::optional<double>{best};
    });
    return cache_->d2;
}

double OrliczFunction::derivative_ratio_sup() const {
    std::call_once(cache_->dsup_once, [this] {
        const auto grid = standard_log_grid();
        double best = 0.0;
        for (double u : grid) {
            const double t = std::exp(u);
            const double ph = eval(t);
            if (!(ph > 0.0) || !std::isfinite(ph)) continue;
            const double r = t * eval_derivative(t) / ph;
            if (std::isfinite(r)) best = std::max(best, r);
        }
        cache_->dsup = best;
    });
    return cache_->dsup;
}

double OrliczFunction::integral_bound_low(double p) const {
    if (!(p >= 1.0)) throw InvalidParameter("integral_bound_low: requires p >= 1");
    const auto& est = indices();
    if (!(p < est.p_phi))
        throw DivergentIntegral("integral_bound_low: p=" + format_param(p) +
                                " is not below the lower index estimate p_phi=" +
                                format_param(est.p_phi));
    auto g = [&](double u) {
        const double e = log_eval(u) - p * u;
        return e < -700.0 ? 0.0 : std::exp(e);
    };
    // tail below the standard grid; the block count covers slowly
    // converging cases (p just under the lower index).  Each block gets a
    // tolerance scaled to its own magnitude: an absolute floor here would be
    // amplified by the prefactor at the grid edge.
    double acc = 0.0;
    for (int k = 0; k < 4000; ++k) {
        const double hi = kGridLo - 20.0 * k;
        const double lo = hi - 20.0;
        const double peak = std::max({g(lo), g(0.5 * (lo + hi)), g(hi)});
        const double block =
            adaptive_simpson(g, lo, hi, 1e-13 * std::max({1e-300, 20.0 * peak, acc}));
        acc += block;
        if (block <= 1e-16 * acc) break;
    }
    const auto grid = standard_log_grid();
    double best = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0)
            acc += adaptive_simpson(g, grid[i - 1], grid[i], 1e-13 * std::max(1.0, acc));
        const double pref = std::exp(p * grid[i] - log_eval(grid[i]));
        best = std::max(best, pref * acc);
    }
    return best;
}

double OrliczFunction::integral_bound_high(double q) const {
    const auto& est = indices();
    if (!(q > est.q_phi))
        throw DivergentIntegral("integral_bound_high: q=" + format_param(q) +
                                " is not above the upper index estimate q_phi=" +
                                format_param(est.q_phi));
    auto g = [&](double u) {
        const double e = log_eval(u) - q * u;
        return e < -700.0 ? 0.0 : std::exp(e);
    };
    // tail above the standard grid; see the low-tail notes on the block
    // count and the per-block tolerance scaling
    double acc = 0.0;
    for (int k = 0; k < 4000; ++k) {
        const double lo = kGridHi + 20.0 * k;
        const double hi = lo + 20.0;
        const double peak = std::max({g(lo), g(0.5 * (lo + hi)), g(hi)});
        const double block =
            adaptive_simpson(g, lo, hi, 1e-13 * std::max({1e-300, 20.0 * peak, acc}));
        acc += block;
        if (block <= 1e-16 * acc) break;
    }
    const auto grid = standard_log_grid();
    double best = 0.0;
    for (std::size_t i = grid.size(); i-- > 0;) {
        if (i + 1 < grid.size())
            acc += adaptive_simpson(g, grid[i], grid[i + 1], 1e-13 * std::max(1.0, acc));
        const double pref = std::exp(q * grid[i] - log_eval(grid[i]));
        best = std::max(best, pref * acc);
    }
    return best;
}

OrliczFunction parse_phi_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw InvalidParameter("phi spec: expected '<family>:<key>=<value>,...', got '" +
                               spec + "'");
    const std::string family = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);

    std::vector<std::pair<std::string, double>> kv;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InvalidParameter("phi spec: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (val.empty())
            throw InvalidParameter("phi spec: empty value for key '" + key + "'");
        kv.emplace_back(key, parse_number(val, key));
    }

    auto want = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : kv) {
            bool ok = false;
            for (const char* w : keys)
                if (k == w) ok = true;
            if (!ok)
                throw InvalidParameter("phi spec: unknown key '" + k + "' for family '" +
                                       family + "'");
        }
        for (const char* w : keys) {
            bool seen = false;
            for (const auto& [k, v] : kv)
                if (k == w) seen = true;
            if (!seen)
                throw InvalidParameter("phi spec: missing key '" + std::string(w) +
                                       "' for family '" + family + "'");
        }
    };
    auto get = [&](const char* key) {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        throw InvalidParameter("phi spec: missing key '" + std::string(key) + "'");
    };

    if (family == "power") {
        want({"p"});
        return OrliczFunction::power(get("p"));
    }
    if (family == "powerlog") {
        want({"a", "b"});
        return OrliczFunction::power_log(get("a"), get("b"));
    }
    if (family == "powersin") {
        want({"p", "c"});
        return OrliczFunction::power_sin(get("p"), get("c"));
    }
    throw InvalidParameter("phi spec: unknown family '" + family + "'");
}

}  // namespace ncorlicz
