#pragma once

// JSON and CSV report emission. Output is byte-stable: keys sorted, reals
// printed as %.16e.

#include <minig/suite.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace minig {

inline std::string format_real(double v)
{
    if (!(v == v)) return "\"nan\"";
    if (v == std::numeric_limits<double>::infinity()) return "\"inf\"";
    if (v == -std::numeric_limits<double>::infinity()) return "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace detail {
inline void write_json(std::ostream& out, nlohmann::json const& j, int indent)
{
    std::string const pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out << ",\n";
            first = false;
            out << pad << nlohmann::json(it.key()).dump() << ": ";
            write_json(out, it.value(), indent + 2);
        }
        out << "\n" << close << "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        bool const flat = std::all_of(j.begin(), j.end(), [](auto const& e) { return e.is_primitive(); });
        if (flat) {
            out << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ", ";
                write_json(out, j[i], indent);
            }
            out << "]";
            return;
        }
        out << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out << ",\n";
            out << pad;
            write_json(out, j[i], indent + 2);
        }
        out << "\n" << close << "]";
        return;
    }
    case nlohmann::json::value_t::number_float: out << format_real(j.get<double>()); return;
    default: out << j.dump(); return;
    }
}

inline nlohmann::json real_or_null(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }
}  // namespace detail

inline nlohmann::json config_json(RunConfig const& c)
{
    nlohmann::json j;
    j["manifold"] = c.manifold;
    nlohmann::json params = nlohmann::json::object();
    if (c.params.n) params["n"] = *c.params.n;
    if (c.params.c) params["c"] = *c.params.c;
    if (c.params.f) params["f"] = *c.params.f;
    j["params"] = params;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["tolerances"] = {{"pass", c.tolerances.pass}, {"fail", c.tolerances.fail}};
    j["conditions"] = c.conditions;
    j["format"] = c.format;
    return j;
}

inline nlohmann::json report_json(SuiteReport const& r, bool with_points = true)
{
    nlohmann::json results = nlohmann::json::object();
    for (auto const& c : r.results) {
        nlohmann::json e;
        e["max"] = detail::real_or_null(c.max);
        e["mean"] = detail::real_or_null(c.mean);
        e["verdict"] = to_string(c.verdict);
        e["worst_point"] = c.worst_index >= 0 ? nlohmann::json(c.points[static_cast<std::size_t>(c.worst_index)].point) : nlohmann::json(nullptr);
        if (with_points) {
            nlohmann::json pts = nlohmann::json::array();
            for (std::size_t i = 0; i < c.points.size(); ++i) {
                PointResult const& p = c.points[i];
                nlohmann::json pj{{"index", i}, {"point", p.point}, {"verdict", to_string(p.verdict)}};
                pj["value"] = p.verdict == Verdict::error ? nlohmann::json(nullptr) : nlohmann::json(p.value);
                if (!p.error.empty()) pj["error"] = p.error;
                pts.push_back(std::move(pj));
            }
            e["points"] = std::move(pts);
        }
        results[c.name] = std::move(e);
    }
    nlohmann::json j;
    j["config"] = config_json(r.config);
    j["manifold"] = {{"name", r.manifold_name}, {"dim", r.dim}};
    j["results"] = std::move(results);
    j["seed"] = r.config.seed;
    j["version"] = std::string("minig ") + kVersion;
    j["exit_code"] = r.exit_code();
    return j;
}

inline void write_report_json(std::ostream& out, SuiteReport const& r)
{
    detail::write_json(out, report_json(r), 0);
    out << "\n";
}

namespace detail {
inline std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}
}  // namespace detail

/// One row per (condition, point).
inline void write_report_csv(std::ostream& out, SuiteReport const& r)
{
    out << "condition,index,value,verdict,error";
    for (int i = 1; i <= r.dim; ++i) out << ",x" << i;
    out << "\n";
    for (auto const& c : r.results)
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            PointResult const& p = c.points[i];
            out << c.name << "," << i << "," << (p.verdict == Verdict::error ? std::string() : format_real(p.value)) << ","
                << to_string(p.verdict) << "," << detail::csv_field(p.error);
            for (double x : p.point) out << "," << format_real(x);
            out << "\n";
        }
}

inline void emit_report(SuiteReport const& r, std::string const& format, std::ostream& out)
{
    if (format == "csv") write_report_csv(out, r);
    else write_report_json(out, r);
    if (!out) throw std::runtime_error("failed writing report");
}

inline void emit_report(SuiteReport const& r, std::string const& format, std::string const& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    emit_report(r, format, out);
}

}  // namespace minig
