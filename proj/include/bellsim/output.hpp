#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

namespace bellsim {

// Flat result record emitted by every CLI command; serialized as one JSON
// object per line or one CSV row. Doubles are printed with 17 significant
// digits so repeated runs are byte-comparable.
struct OutputRecord {
    std::string scenario;  // command name
    std::string label;     // what was measured
    std::string protocol;  // empty when not applicable
    std::uint64_t seed{0};
    std::uint64_t n{0};
    double value{0.0};
    std::optional<double> stderror;
    std::optional<double> oracle;
    std::optional<double> tolerance;
    std::optional<double> z;
    std::optional<bool> pass;
    std::optional<double> wall_time_s;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

inline void write_json_line(std::ostream& os, const OutputRecord& r) {
    using detail::fmt_double;
    using detail::json_escape;
    os << "{\"scenario\":\"" << json_escape(r.scenario) << "\""
       << ",\"label\":\"" << json_escape(r.label) << "\"";
    if (!r.protocol.empty()) os << ",\"protocol\":\"" << json_escape(r.protocol) << "\"";
    os << ",\"seed\":" << r.seed << ",\"n\":" << r.n
       << ",\"value\":" << fmt_double(r.value);
    if (r.stderror) os << ",\"stderr\":" << fmt_double(*r.stderror);
    if (r.oracle) os << ",\"oracle\":" << fmt_double(*r.oracle);
    if (r.tolerance) os << ",\"tolerance\":" << fmt_double(*r.tolerance);
    if (r.z) os << ",\"z\":" << fmt_double(*r.z);
    if (r.pass) os << ",\"pass\":" << (*r.pass ? "true" : "false");
    if (r.wall_time_s) os << ",\"wall_time_s\":" << fmt_double(*r.wall_time_s);
    os << "}\n";
}

inline void write_csv_header(std::ostream& os) {
    os << "scenario,label,protocol,seed,n,value,stderr,oracle,tolerance,z,pass,wall_time_s\n";
}

inline void write_csv_line(std::ostream& os, const OutputRecord& r) {
    using detail::fmt_double;
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            out += c;
            if (c == '"') out += '"';
        }
        return out + "\"";
    };
    os << quote(r.scenario) << ',' << quote(r.label) << ',' << quote(r.protocol) << ','
       << r.seed << ',' << r.n << ',' << fmt_double(r.value) << ',';
    if (r.stderror) os << fmt_double(*r.stderror);
    os << ',';
    if (r.oracle) os << fmt_double(*r.oracle);
    os << ',';
    if (r.tolerance) os << fmt_double(*r.tolerance);
    os << ',';
    if (r.z) os << fmt_double(*r.z);
    os << ',';
    if (r.pass) os << (*r.pass ? "true" : "false");
    os << ',';
    if (r.wall_time_s) os << fmt_double(*r.wall_time_s);
    os << '\n';
}

}  // namespace bellsim
