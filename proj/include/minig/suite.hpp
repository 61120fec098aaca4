#pragma once

// Runs a set of named conditions over the sample points of one manifold.

#include <minig/conditions.hpp>
#include <minig/config.hpp>

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace minig {

inline constexpr char kVersion[] = "1.0.0";

enum class Verdict { pass, inconclusive, fail, error };

inline char const* to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::fail: return "fail";
    case Verdict::error: return "error";
    }
    return "?";
}

inline Verdict classify(double value, Tolerances const& t)
{
    if (!(value == value)) return Verdict::error;
    if (value < t.pass) return Verdict::pass;
    if (value > t.fail) return Verdict::fail;
    return Verdict::inconclusive;
}

struct PointResult
{
    std::vector<double> point;
    double value = 0.0;
    Verdict verdict = Verdict::pass;
    std::string error;
};

struct ConditionReport
{
    std::string name;
    std::vector<PointResult> points;
    std::optional<double> max;
    std::optional<double> mean;
    int worst_index = -1;
    Verdict verdict = Verdict::pass;
};

struct SuiteReport
{
    RunConfig config;
    std::string manifold_name;
    int dim = 0;
    std::vector<ConditionReport> results;

    /// 0 all pass, 1 any fail or error, 2 inconclusive only.
    int exit_code() const
    {
        bool inconclusive = false;
        for (auto const& r : results) {
            if (r.verdict == Verdict::fail || r.verdict == Verdict::error) return 1;
            inconclusive = inconclusive || r.verdict == Verdict::inconclusive;
        }
        return inconclusive ? 2 : 0;
    }
};

inline bool condition_applies(std::string const& name, ManifoldSpec const& spec)
{
    if (name == "lck4" || name == "lck2") return spec.hermitian.has_value();
    if (name == "kenmotsu") return spec.contact.has_value() && spec.contact->alpha.has_value();
    if (name == "c4product") return spec.base != nullptr;
    return true;
}

inline std::vector<std::string> applicable_conditions(ManifoldSpec const& spec)
{
    std::vector<std::string> out;
    for (auto const& name : condition_names())
        if (condition_applies(name, spec)) out.push_back(name);
    return out;
}

/// One condition at one prepared point.
inline double evaluate_condition(std::string const& name, ManifoldSpec const& spec, GStructureFrame const& f)
{
    if (name == "harmonic") return harmonic_residual(f);
    if (name == "harmonic_map") return harmonic_map_residual(f);
    if (name == "minimal") return minimal_residual(f);
    if (name == "lck4") return lck_reduced_max(f).lck4;
    if (name == "lck2") return lck_reduced_max(f).lck2;
    if (name == "kenmotsu") return kenmotsu_residual(f);
    if (name == "c4product") return c4_product_check(spec, f).max();
    if (name == "structure") return structure_report(spec, f).max();
    throw std::invalid_argument("unknown condition '" + name + "'");
}

inline void aggregate(ConditionReport& r)
{
    double sum = 0.0;
    int count = 0;
    bool any_fail = false, any_inconclusive = false;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        PointResult const& p = r.points[i];
        if (p.verdict == Verdict::error) {
            any_fail = true;
            continue;
        }
        sum += p.value;
        ++count;
        if (!r.max || p.value > *r.max) {
            r.max = p.value;
            r.worst_index = static_cast<int>(i);
        }
        any_fail = any_fail || p.verdict == Verdict::fail;
        any_inconclusive = any_inconclusive || p.verdict == Verdict::inconclusive;
    }
    if (count > 0) r.mean = sum / count;
    if (count == 0) r.verdict = Verdict::error;
    else if (any_fail) r.verdict = Verdict::fail;
    else if (any_inconclusive) r.verdict = Verdict::inconclusive;
    else r.verdict = Verdict::pass;
}

/// Throws ConfigError for conditions that do not apply to the manifold.
inline SuiteReport run_suite(RunConfig const& config, ManifoldSpec const& spec)
{
    validate(config);
    std::vector<std::string> names = config.conditions.empty() ? applicable_conditions(spec) : config.conditions;
    for (auto const& name : names)
        if (!condition_applies(name, spec))
            throw ConfigError("condition '" + name + "' does not apply to manifold \"" + spec.name + "\"");

    std::vector<std::vector<double>> const points = sample_points(spec, config.samples, config.seed);
    std::size_t const np = points.size(), nc = names.size();
    std::vector<PointResult> table(np * nc);

    auto work = [&](std::size_t i) {
        for (std::size_t c = 0; c < nc; ++c) table[c * np + i].point = points[i];
        std::optional<GStructureFrame> frame;
        try {
            frame = build_frame(spec, points[i]);
        } catch (std::exception const& e) {
            for (std::size_t c = 0; c < nc; ++c) {
                table[c * np + i].verdict = Verdict::error;
                table[c * np + i].error = e.what();
            }
            return;
        }
        for (std::size_t c = 0; c < nc; ++c) {
            PointResult& r = table[c * np + i];
            try {
                r.value = evaluate_condition(names[c], spec, *frame);
                r.verdict = classify(r.value, config.tolerances);
                if (r.verdict == Verdict::error) r.error = "non-finite residual";
            } catch (std::exception const& e) {
                r.verdict = Verdict::error;
                r.error = e.what();
            }
        }
    };

    unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, np));
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i = next++; i < np; i = next++) work(i);
    };
    if (threads <= 1) loop();
    else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(loop);
        for (auto& t : pool) t.join();
    }

    SuiteReport report;
    report.config = config;
    report.config.conditions = names;
    report.manifold_name = spec.name;
    report.dim = spec.dim;
    for (std::size_t c = 0; c < nc; ++c) {
        ConditionReport r;
        r.name = names[c];
        r.points.assign(table.begin() + static_cast<std::ptrdiff_t>(c * np), table.begin() + static_cast<std::ptrdiff_t>((c + 1) * np));
        aggregate(r);
        report.results.push_back(std::move(r));
    }
    return report;
}

inline SuiteReport run_suite(RunConfig const& config) { return run_suite(config, resolve_manifold(config)); }

}  // namespace minig
