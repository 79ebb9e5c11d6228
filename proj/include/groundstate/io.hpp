#pragma once

// Text I/O: 17-significant-digit float formatting (lossless round-trip),
// CSV writers for sweep rows and profiles, and min:max:count range parsing.

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "groundstate/nonlinearity.hpp"
#include "groundstate/shooting.hpp"

namespace groundstate {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct SweepRow {
    double p, q, omega_crit, eta_crit, gap;
};

inline constexpr const char* sweep_csv_header = "p,q,omega_crit,eta_crit,gap";

inline void write_sweep_row_csv(std::ostream& os, const SweepRow& row) {
    os << fmt17(row.p) << ',' << fmt17(row.q) << ',' << fmt17(row.omega_crit) << ','
       << fmt17(row.eta_crit) << ',' << fmt17(row.gap) << '\n';
}

inline void write_sweep_row_json(std::ostream& os, const SweepRow& row) {
    os << "{\"p\":" << fmt17(row.p) << ",\"q\":" << fmt17(row.q)
       << ",\"omega_crit\":" << fmt17(row.omega_crit)
       << ",\"eta_crit\":" << fmt17(row.eta_crit) << ",\"gap\":" << fmt17(row.gap)
       << "}\n";
}

inline void write_profile_csv(std::ostream& os, const std::vector<StateVector>& profile) {
    os << "r,u,du\n";
    for (const auto& s : profile)
        os << fmt17(s.r) << ',' << fmt17(s.u) << ',' << fmt17(s.du) << '\n';
}

namespace detail {

inline double parse_double(const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    require(end == begin + tok.size() && !tok.empty(), "malformed number");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

}  // namespace detail

// Inclusive-endpoint range "min:max:count". count=1 collapses to {min}.
struct Range {
    double min = 0.0;
    double max = 0.0;
    int count = 0;

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(count);
        if (count == 1) {
            v.push_back(min);
        } else {
            for (int i = 0; i < count; ++i)
                v.push_back(min + (max - min) * i / (count - 1.0));
        }
        return v;
    }
};

inline Range parse_range(const std::string& spec) {
    const auto parts = detail::split(spec, ':');
    detail::require(parts.size() == 3, "range must be min:max:count");
    Range r;
    r.min = detail::parse_double(parts[0]);
    r.max = detail::parse_double(parts[1]);
    const double cnt = detail::parse_double(parts[2]);
    r.count = static_cast<int>(cnt);
    detail::require(cnt == r.count && r.count >= 1, "range count must be an integer >= 1");
    detail::require(r.min <= r.max, "descending range");
    return r;
}

inline std::vector<SweepRow> parse_sweep_csv(std::istream& is) {
    std::string line;
    detail::require(static_cast<bool>(std::getline(is, line)) && line == sweep_csv_header,
                    "bad sweep CSV header");
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto parts = detail::split(line, ',');
        detail::require(parts.size() == 5, "bad sweep CSV row");
        rows.push_back({detail::parse_double(parts[0]), detail::parse_double(parts[1]),
                        detail::parse_double(parts[2]), detail::parse_double(parts[3]),
                        detail::parse_double(parts[4])});
    }
    return rows;
}

}  // namespace groundstate
