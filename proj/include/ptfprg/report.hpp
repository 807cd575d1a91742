#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ptfprg {

/// One CSV row: an experiment's parameters, its estimate and 95% half-width,
/// and experiment-specific auxiliary values.
struct ExperimentReport {
    std::string experiment;
    std::size_t n = 0;
    int d = 0;
    std::optional<double> lambda;
    std::optional<double> eps;
    std::optional<double> delta;
    std::optional<int> L;
    std::optional<double> R;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double ci_radius = 0.0;
    std::vector<std::pair<std::string, double>> aux;

    /// Looks up an auxiliary value by name.
    std::optional<double> aux_value(const std::string &name) const
    {
        for (const auto &[k, v] : aux) {
            if (k == name) {
                return v;
            }
        }
        return std::nullopt;
    }
};

/// 17 significant digits, so the text round-trips to the same double.
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

inline std::string optional_field(const std::optional<double> &v)
{
    return v ? format_double(*v) : std::string();
}

inline std::string optional_field(const std::optional<int> &v)
{
    return v ? std::to_string(*v) : std::string();
}

} // namespace detail

/// Header: experiment,n,d,lambda,eps,delta,L,R,trials,seed,estimate,ci_radius,
/// then aux<i>_name,aux<i>_value for as many aux pairs as the widest row.
/// Missing parameters are empty fields.
inline void write_csv(std::ostream &out, const std::vector<ExperimentReport> &rows)
{
    std::size_t width = 0;
    for (const auto &r : rows) {
        width = std::max(width, r.aux.size());
    }
    out << "experiment,n,d,lambda,eps,delta,L,R,trials,seed,estimate,ci_radius";
    for (std::size_t i = 1; i <= width; ++i) {
        out << ",aux" << i << "_name,aux" << i << "_value";
    }
    out << '\n';
    for (const auto &r : rows) {
        out << detail::csv_field(r.experiment) << ',' << r.n << ',' << r.d << ','
            << detail::optional_field(r.lambda) << ',' << detail::optional_field(r.eps) << ','
            << detail::optional_field(r.delta) << ',' << detail::optional_field(r.L) << ','
            << detail::optional_field(r.R) << ',' << r.trials << ',' << r.seed << ','
            << format_double(r.estimate) << ',' << format_double(r.ci_radius);
        for (std::size_t i = 0; i < width; ++i) {
            if (i < r.aux.size()) {
                out << ',' << detail::csv_field(r.aux[i].first) << ','
                    << format_double(r.aux[i].second);
            } else {
                out << ",,";
            }
        }
        out << '\n';
    }
}

inline std::string to_csv(const std::vector<ExperimentReport> &rows)
{
    std::ostringstream ss;
    write_csv(ss, rows);
    return ss.str();
}

} // namespace ptfprg
