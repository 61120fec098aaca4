#pragma once

// Plain-text run configuration and custom manifold files.
//
// Both use the same line format: `key = value`, `# comment`, and `[section]`
// headers opening one level of nesting. Run files know the sections
// [params] and [tolerances]; manifold files know [params], [metric],
// [structure] and [domain]. See README.md for the full schema.

#include <minig/expr.hpp>
#include <minig/manifolds.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace minig {

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Key-value documents
// ---------------------------------------------------------------------------

struct KeyValue
{
    std::string value;
    int line = 0;
};

/// section -> key -> value; the unnamed top-level section is "".
struct KeyValueDocument
{
    std::string source;
    std::map<std::string, std::map<std::string, KeyValue>> sections;

    KeyValue const* find(std::string const& section, std::string const& key) const
    {
        auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    [[noreturn]] void fail(int line, std::string const& what) const
    {
        throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
    }
};

namespace detail {
inline std::string trim(std::string const& s)
{
    auto const b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto const e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
}  // namespace detail

inline KeyValueDocument parse_key_values(std::string const& text, std::string const& source,
                                         std::set<std::string> const& allowed_sections)
{
    KeyValueDocument doc;
    doc.source = source;
    doc.sections[""];
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto const hash = raw.find('#');
        std::string const s = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') doc.fail(line, "malformed section header");
            section = detail::trim(s.substr(1, s.size() - 2));
            if (allowed_sections.count(section) == 0) doc.fail(line, "unknown section [" + section + "]");
            doc.sections[section];
            continue;
        }
        auto const eq = s.find('=');
        if (eq == std::string::npos) doc.fail(line, "expected 'key = value'");
        std::string const key = detail::trim(s.substr(0, eq));
        std::string value = detail::trim(s.substr(eq + 1));
        if (key.empty()) doc.fail(line, "empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        auto& sec = doc.sections[section];
        if (sec.count(key) != 0) doc.fail(line, "duplicate key '" + key + "'");
        sec[key] = {value, line};
    }
    return doc;
}

inline std::string read_file(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {
inline double parse_real(KeyValueDocument const& doc, KeyValue const& kv, std::string const& key)
{
    char* end = nullptr;
    errno = 0;
    double const v = std::strtod(kv.value.c_str(), &end);
    if (kv.value.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        doc.fail(kv.line, "'" + key + "' must be a real number, got '" + kv.value + "'");
    return v;
}
inline long long parse_integer(KeyValueDocument const& doc, KeyValue const& kv, std::string const& key)
{
    char* end = nullptr;
    errno = 0;
    long long const v = std::strtoll(kv.value.c_str(), &end, 10);
    if (kv.value.empty() || *end != '\0' || errno == ERANGE) doc.fail(kv.line, "'" + key + "' must be an integer, got '" + kv.value + "'");
    return v;
}
inline std::vector<std::string> split_list(std::string const& s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

inline std::vector<std::string> const& condition_names()
{
    static std::vector<std::string> const names{"harmonic", "harmonic_map", "minimal", "lck4",
                                                "lck2",     "kenmotsu",     "c4product", "structure"};
    return names;
}

struct Tolerances
{
    double pass = 1e-7;
    double fail = 1e-4;
};

struct RunConfig
{
    std::string manifold = "hyperbolic";
    CatalogParams params;
    int samples = 64;
    std::uint64_t seed = 42;
    Tolerances tolerances;
    std::vector<std::string> conditions;  // empty: all applicable
    std::string output;                   // empty: stdout
    std::string format = "json";
    int threads = 0;                      // 0: hardware concurrency
};

inline void validate(RunConfig const& c)
{
    if (!(c.tolerances.pass > 0.0) || !(c.tolerances.pass < c.tolerances.fail))
        throw ConfigError("tolerances: pass (" + std::to_string(c.tolerances.pass) + ") must be positive and below fail (" +
                          std::to_string(c.tolerances.fail) + ")");
    if (c.samples < 1) throw ConfigError("samples must be >= 1");
    if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
    for (auto const& name : c.conditions)
        if (std::find(condition_names().begin(), condition_names().end(), name) == condition_names().end())
            throw ConfigError("unknown condition '" + name + "'");
}

/// Catalog name or a path to an existing manifold file.
inline bool names_manifold_file(std::string const& manifold)
{
    std::error_code ec;
    return std::filesystem::is_regular_file(manifold, ec);
}

inline RunConfig parse_run_config(std::string const& text, std::string const& source = "<config>")
{
    KeyValueDocument const doc = parse_key_values(text, source, {"params", "tolerances"});
    RunConfig c;
    for (auto const& [key, kv] : doc.sections.at("")) {
        if (key == "manifold") c.manifold = kv.value;
        else if (key == "samples") {
            long long const v = detail::parse_integer(doc, kv, key);
            if (v < 1 || v > 1000000) doc.fail(kv.line, "samples must be in 1..1000000");
            c.samples = static_cast<int>(v);
        } else if (key == "seed") {
            long long const v = detail::parse_integer(doc, kv, key);
            if (v < 0) doc.fail(kv.line, "seed must be non-negative");
            c.seed = static_cast<std::uint64_t>(v);
        } else if (key == "conditions") c.conditions = detail::split_list(kv.value);
        else if (key == "output") c.output = kv.value;
        else if (key == "format") c.format = kv.value;
        else if (key == "threads") c.threads = static_cast<int>(detail::parse_integer(doc, kv, key));
        else doc.fail(kv.line, "unknown key '" + key + "'");
    }
    if (auto s = doc.sections.find("params"); s != doc.sections.end()) {
        for (auto const& [key, kv] : s->second) {
            if (key == "n") c.params.n = static_cast<int>(detail::parse_integer(doc, kv, key));
            else if (key == "c") c.params.c = detail::parse_real(doc, kv, key);
            else if (key == "f") c.params.f = kv.value;
            else doc.fail(kv.line, "unknown parameter '" + key + "'");
        }
    }
    if (auto s = doc.sections.find("tolerances"); s != doc.sections.end()) {
        for (auto const& [key, kv] : s->second) {
            if (key == "pass") c.tolerances.pass = detail::parse_real(doc, kv, key);
            else if (key == "fail") c.tolerances.fail = detail::parse_real(doc, kv, key);
            else doc.fail(kv.line, "unknown tolerance '" + key + "'");
        }
    }
    if (!names_manifold_file(c.manifold)) {
        bool known = false;
        for (auto const& e : catalog()) known = known || e.name == c.manifold;
        if (!known) {
            std::string names;
            for (auto const& e : catalog()) names += (names.empty() ? "" : ", ") + e.name;
            throw ConfigError("unknown manifold \"" + c.manifold + "\" (catalog: " + names + ")");
        }
    }
    validate(c);
    return c;
}

inline RunConfig load_config(std::string const& path) { return parse_run_config(read_file(path), path); }

// ---------------------------------------------------------------------------
// Custom manifolds
// ---------------------------------------------------------------------------

/// Builds a ManifoldSpec from a manifold file. Indices in keys are 1-based:
/// g12, J21 (row 2, column 1 of J, i.e. the ∂₂ component of J∂₁), phi11,
/// zeta1, theta3; `alpha` is a single expression.
inline ManifoldSpec parse_manifold(std::string const& text, std::string const& source = "<manifold>")
{
    KeyValueDocument const doc = parse_key_values(text, source, {"params", "metric", "structure", "domain"});
    auto const& top = doc.sections.at("");
    auto require = [&](std::string const& key) -> KeyValue const& {
        auto it = top.find(key);
        if (it == top.end()) doc.fail(0, "missing key '" + key + "'");
        return it->second;
    };

    ManifoldSpec m;
    KeyValue const& dim_kv = require("dim");
    long long const dim = detail::parse_integer(doc, dim_kv, "dim");
    if (dim < 2 || dim > kMaxDim) doc.fail(dim_kv.line, "dim must be in 2.." + std::to_string(kMaxDim));
    int const n = static_cast<int>(dim);
    m.dim = n;
    m.name = top.count("name") ? top.at("name").value : std::filesystem::path(source).stem().string();
    m.description = "custom manifold from " + source;
    KeyValue const& kind = require("structure");
    if (kind.value != "hermitian" && kind.value != "contact") doc.fail(kind.line, "structure must be hermitian or contact");
    for (auto const& [key, kv] : top)
        if (key != "dim" && key != "name" && key != "structure" && key != "class") doc.fail(kv.line, "unknown key '" + key + "'");

    if (auto s = doc.sections.find("params"); s != doc.sections.end())
        for (auto const& [key, kv] : s->second) m.params[key] = detail::parse_real(doc, kv, key);

    auto expr = [&](KeyValue const& kv) {
        try {
            return parse_expr(kv.value, n, m.params);
        } catch (ParseError const& e) {
            doc.fail(kv.line, e.what());
        }
    };
    // "<prefix><i><j>" or "<prefix><i>" with 1-based single-digit or comma-free indices.
    auto indices = [&](std::string const& key, std::string const& prefix, int count, int line) {
        std::string const rest = key.substr(prefix.size());
        std::vector<int> idx;
        if (count == 1) {
            if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) doc.fail(line, "bad index in '" + key + "'");
            idx.push_back(std::stoi(rest) - 1);
        } else {
            auto const sep = rest.find('_');
            if (sep != std::string::npos) {
                idx.push_back(std::atoi(rest.substr(0, sep).c_str()) - 1);
                idx.push_back(std::atoi(rest.substr(sep + 1).c_str()) - 1);
            } else if (rest.size() == 2 && std::isdigit(static_cast<unsigned char>(rest[0])) && std::isdigit(static_cast<unsigned char>(rest[1]))) {
                idx.push_back(rest[0] - '1');
                idx.push_back(rest[1] - '1');
            } else doc.fail(line, "bad index in '" + key + "' (use g12 or g10_11)");
        }
        for (int i : idx)
            if (i < 0 || i >= n) doc.fail(line, "index out of range in '" + key + "'");
        return idx;
    };

    m.metric = MetricField(n);
    auto ms = doc.sections.find("metric");
    if (ms == doc.sections.end()) doc.fail(0, "missing [metric] section");
    for (auto const& [key, kv] : ms->second) {
        if (key.rfind("g", 0) != 0) doc.fail(kv.line, "metric keys are gIJ");
        auto const ij = indices(key, "g", 2, kv.line);
        m.metric.set(ij[0], ij[1], expr(kv));
    }

    auto ss = doc.sections.find("structure");
    std::map<std::string, KeyValue> const empty;
    auto const& st = ss == doc.sections.end() ? empty : ss->second;
    if (kind.value == "hermitian") {
        if (n % 2 != 0) doc.fail(dim_kv.line, "hermitian structures need an even dimension");
        HermitianStructure h{std::vector<ScalarExpr>(static_cast<std::size_t>(n * n)), std::vector<ScalarExpr>(static_cast<std::size_t>(n))};
        for (auto const& [key, kv] : st) {
            if (key.rfind("J", 0) == 0) {
                auto const ij = indices(key, "J", 2, kv.line);
                h.j[static_cast<std::size_t>(ij[0] * n + ij[1])] = expr(kv);
            } else if (key.rfind("theta", 0) == 0) {
                h.theta[static_cast<std::size_t>(indices(key, "theta", 1, kv.line)[0])] = expr(kv);
            } else doc.fail(kv.line, "hermitian structure keys are JIJ and thetaI");
        }
        m.hermitian = std::move(h);
    } else {
        ContactStructure c;
        c.phi.assign(static_cast<std::size_t>(n * n), ScalarExpr{});
        c.zeta.assign(static_cast<std::size_t>(n), ScalarExpr{});
        for (auto const& [key, kv] : st) {
            if (key == "alpha") c.alpha = expr(kv);
            else if (key.rfind("phi", 0) == 0) {
                auto const ij = indices(key, "phi", 2, kv.line);
                c.phi[static_cast<std::size_t>(ij[0] * n + ij[1])] = expr(kv);
            } else if (key.rfind("zeta", 0) == 0) {
                c.zeta[static_cast<std::size_t>(indices(key, "zeta", 1, kv.line)[0])] = expr(kv);
            } else doc.fail(kv.line, "contact structure keys are phiIJ, zetaI and alpha");
        }
        m.contact = std::move(c);
    }

    if (auto it = top.find("class"); it != top.end()) {
        static std::map<std::string, TorsionClass> const classes{{"Kaehler", TorsionClass::kaehler}, {"W4", TorsionClass::w4},
                                                                 {"cosymplectic", TorsionClass::cosymplectic}, {"C4", TorsionClass::c4},
                                                                 {"C5", TorsionClass::c5}};
        auto c = classes.find(it->second.value);
        if (c == classes.end()) doc.fail(it->second.line, "class must be one of Kaehler, W4, cosymplectic, C4, C5");
        m.declared_class = c->second;
    }

    m.domain.box.assign(static_cast<std::size_t>(n), {-1.0, 1.0});
    if (auto ds = doc.sections.find("domain"); ds != doc.sections.end()) {
        for (auto const& [key, kv] : ds->second) {
            auto const parts = detail::split_list(kv.value);
            if (parts.size() != 2) doc.fail(kv.line, "domain entries are 'lo, hi'");
            KeyValue lo{parts[0], kv.line}, hi{parts[1], kv.line};
            double const a = detail::parse_real(doc, lo, key), b = detail::parse_real(doc, hi, key);
            if (!(a < b)) doc.fail(kv.line, "domain interval must have lo < hi");
            if (key == "radius") {
                m.domain.radial_dims = n;
                m.domain.r_min = a;
                m.domain.r_max = b;
            } else if (key.rfind("x", 0) == 0) {
                m.domain.box[static_cast<std::size_t>(indices(key, "x", 1, kv.line)[0])] = {a, b};
            } else doc.fail(kv.line, "domain keys are xI and radius");
        }
    }
    return m;
}

inline ManifoldSpec load_manifold(std::string const& path) { return parse_manifold(read_file(path), path); }

/// Catalog lookup or file load, with config errors for both.
inline ManifoldSpec resolve_manifold(RunConfig const& c)
{
    if (names_manifold_file(c.manifold)) return load_manifold(c.manifold);
    try {
        return build_catalog(c.manifold, c.params);
    } catch (ParseError const& e) {
        throw ConfigError(std::string("f: ") + e.what());
    } catch (CatalogError const& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace minig
