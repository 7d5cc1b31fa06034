#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ncorlicz {

struct RegimeInfo {
    double p_phi = 0.0;
    double q_phi = 0.0;
    std::string gate;  // which index condition admitted (or rejected) the run
};

struct SampleRow {
    long index = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct Aggregate {
    double min_ratio = 0.0;
    double median_ratio = 0.0;
    double max_ratio = 0.0;
    // max(max_ratio, 1/min_ratio): the two-sided constant the sample set
    // exhibits (equals max_ratio for one-sided comparisons with ratios >= 1)
    double empirical_constant = 0.0;
    long skipped = 0;
};

// One verified inequality: per-sample left/right modular values and their
// ratios, aggregate statistics, the certified constant when one exists,
// and a pass flag. pass is empty for findings-only runs (nothing asserted),
// true/false when an analytic bound was checked. error is set when the run
// was rejected (for example by a regime gate) before producing samples.
struct VerificationReport {
    std::string inequality;
    RegimeInfo regime;
    std::vector<SampleRow> samples;
    Aggregate aggregate;
    std::optional<double> certified;
    std::optional<bool> pass;
    std::vector<std::string> findings;
    std::vector<std::pair<std::string, std::string>> config;  // ordered echo
    std::optional<std::string> error;
};

// min/median/max over the rows' ratios; skipped passed through.
Aggregate compute_aggregate(const std::vector<SampleRow>& samples, long skipped);

bool operator==(const SampleRow& a, const SampleRow& b);
bool operator==(const RegimeInfo& a, const RegimeInfo& b);
bool operator==(const Aggregate& a, const Aggregate& b);
bool operator==(const VerificationReport& a, const VerificationReport& b);

// Stable JSON: fixed field order, floats at 17 significant digits, no
// whitespace variation — byte-identical for equal reports.
std::string report_to_json(const VerificationReport& r);
std::string reports_to_json(const std::vector<VerificationReport>& rs);
VerificationReport report_from_json(const std::string& text);
std::vector<VerificationReport> reports_from_json(const std::string& text);

// CSV flattening: header inequality,index,lhs,rhs,ratio then one row per sample.
std::string reports_to_csv(const std::vector<VerificationReport>& rs);

}  // namespace ncorlicz
