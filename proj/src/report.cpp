#include "ncorlicz/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ncorlicz/errors.hpp"
#include "ncorlicz/util.hpp"

namespace ncorlicz {

Aggregate compute_aggregate(const std::vector<SampleRow>& samples, long skipped) {
    Aggregate a;
    a.skipped = skipped;
    if (samples.empty()) return a;
    std::vector<double> ratios;
    ratios.reserve(samples.size());
    for (const auto& s : samples) ratios.push_back(s.ratio);
    a.min_ratio = *std::min_element(ratios.begin(), ratios.end());
    a.max_ratio = *std::max_element(ratios.begin(), ratios.end());
    a.median_ratio = median_of(ratios);
    a.empirical_constant =
        a.min_ratio > 0.0 ? std::max(a.max_ratio, 1.0 / a.min_ratio) : a.max_ratio;
    return a;
}

bool operator==(const SampleRow& a, const SampleRow& b) {
    return a.index == b.index && a.lhs == b.lhs && a.rhs == b.rhs && a.ratio == b.ratio;
}

bool operator==(const RegimeInfo& a, const RegimeInfo& b) {
    return a.p_phi == b.p_phi && a.q_phi == b.q_phi && a.gate == b.gate;
}

bool operator==(const Aggregate& a, const Aggregate& b) {
    return a.min_ratio == b.min_ratio && a.median_ratio == b.median_ratio &&
           a.max_ratio == b.max_ratio && a.empirical_constant == b.empirical_constant &&
           a.skipped == b.skipped;
}

bool operator==(const VerificationReport& a, const VerificationReport& b) {
    return a.inequality == b.inequality && a.regime == b.regime && a.samples == b.samples &&
           a.aggregate == b.aggregate && a.certified == b.certified && a.pass == b.pass &&
           a.findings == b.findings && a.config == b.config && a.error == b.error;
}

namespace {

std::string json_num(double v) {
    if (std::isfinite(v)) return format_double(v);
    if (std::isnan(v)) return "\"nan\"";
    return v > 0 ? "\"inf\"" : "\"-inf\"";
}

void append_escaped(std::ostringstream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        switch (c) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            case '\t': out << "\\t"; break;
            case '\r': out << "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out << buf;
                } else {
                    out << c;
                }
        }
    }
    out << '"';
}

void append_report(std::ostringstream& out, const VerificationReport& r) {
    out << "{\"inequality\":";
    append_escaped(out, r.inequality);
    out << ",\"regime\":{\"p_phi\":" << json_num(r.regime.p_phi)
        << ",\"q_phi\":" << json_num(r.regime.q_phi) << ",\"gate\":";
    append_escaped(out, r.regime.gate);
    out << "},\"samples\":[";
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        if (i) out << ",";
        const auto& s = r.samples[i];
        out << "{\"index\":" << s.index << ",\"lhs\":" << json_num(s.lhs)
            << ",\"rhs\":" << json_num(s.rhs) << ",\"ratio\":" << json_num(s.ratio)
            << "}";
    }
    out << "],\"aggregate\":{\"min_ratio\":" << json_num(r.aggregate.min_ratio)
        << ",\"median_ratio\":" << json_num(r.aggregate.median_ratio)
        << ",\"max_ratio\":" << json_num(r.aggregate.max_ratio)
        << ",\"empirical_constant\":" << json_num(r.aggregate.empirical_constant)
        << ",\"skipped\":" << r.aggregate.skipped << "}";
    out << ",\"certified\":";
    if (r.certified) out << json_num(*r.certified);
    else out << "null";
    out << ",\"pass\":";
    if (r.pass) out << (*r.pass ? "true" : "false");
    else out << "null";
    out << ",\"findings\":[";
    for (std::size_t i = 0; i < r.findings.size(); ++i) {
        if (i) out << ",";
        append_escaped(out, r.findings[i]);
    }
    out << "],\"config\":{";
    for (std::size_t i = 0; i < r.config.size(); ++i) {
        if (i) out << ",";
        append_escaped(out, r.config[i].first);
        out << ":";
        append_escaped(out, r.config[i].second);
    }
    out << "}";
    out << ",\"error\":";
    if (r.error) append_escaped(out, *r.error);
    else out << "null";
    out << "}";
}

double num_from(const nlohmann::json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

VerificationReport report_from(const nlohmann::json& j) {
    VerificationReport r;
    r.inequality = j.at("inequality").get<std::string>();
    const auto& reg = j.at("regime");
    r.regime.p_phi = num_from(reg.at("p_phi"));
    r.regime.q_phi = num_from(reg.at("q_phi"));
    r.regime.gate = reg.at("gate").get<std::string>();
    for (const auto& s : j.at("samples")) {
        SampleRow row;
        row.index = s.at("index").get<long>();
        row.lhs = num_from(s.at("lhs"));
        row.rhs = num_from(s.at("rhs"));
        row.ratio = num_from(s.at("ratio"));
        r.samples.push_back(row);
    }
    const auto& agg = j.at("aggregate");
    r.aggregate.min_ratio = num_from(agg.at("min_ratio"));
    r.aggregate.median_ratio = num_from(agg.at("median_ratio"));
    r.aggregate.max_ratio = num_from(agg.at("max_ratio"));
    r.aggregate.empirical_constant = num_from(agg.at("empirical_constant"));
    r.aggregate.skipped = agg.at("skipped").get<long>();
    if (j.contains("certified") && !j.at("certified").is_null())
        r.certified = num_from(j.at("certified"));
    if (j.contains("pass") && !j.at("pass").is_null()) r.pass = j.at("pass").get<bool>();
    for (const auto& f : j.at("findings")) r.findings.push_back(f.get<std::string>());
    for (const auto& [key, value] : j.at("config").items())
        r.config.emplace_back(key, value.get<std::string>());
    if (j.contains("error") && !j.at("error").is_null())
        r.error = j.at("error").get<std::string>();
    return r;
}

}  // namespace

std::string report_to_json(const VerificationReport& r) {
    std::ostringstream out;
    append_report(out, r);
    return out.str();
}

std::string reports_to_json(const std::vector<VerificationReport>& rs) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i) out << ",";
        append_report(out, rs[i]);
    }
    out << "]";
    return out.str();
}

VerificationReport report_from_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidParameter(std::string("report JSON: parse failure: ") + e.what());
    }
    return report_from(j);
}

std::vector<VerificationReport> reports_from_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidParameter(std::string("report JSON: parse failure: ") + e.what());
    }
    if (!j.is_array()) throw InvalidParameter("report JSON: expected an array of reports");
    std::vector<VerificationReport> rs;
    for (const auto& item : j) rs.push_back(report_from(item));
    return rs;
}

std::string reports_to_csv(const std::vector<VerificationReport>& rs) {
    std::ostringstream out;
    out << "inequality,index,lhs,rhs,ratio\n";
    for (const auto& r : rs)
        for (const auto& s : r.samples)
            out << r.inequality << "," << s.index << "," << json_num(s.lhs) << ","
                << json_num(s.rhs) << "," << json_num(s.ratio) << "\n";
    return out.str();
}

}  // namespace ncorlicz
