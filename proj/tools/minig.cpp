// minig: command-line front end for the verification suite.

#include <minig/report.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct VerifyOptions
{
    std::optional<std::string> config_path, manifold, f, report, format, conditions;
    std::optional<int> n, samples, threads;
    std::optional<double> c, pass_tol, fail_tol;
    std::optional<std::uint64_t> seed;
};

int run_verify(VerifyOptions const& o)
{
    using namespace minig;
    RunConfig cfg;
    if (o.config_path) cfg = load_config(*o.config_path);
    if (o.manifold) cfg.manifold = *o.manifold;
    if (o.n) cfg.params.n = *o.n;
    if (o.c) cfg.params.c = *o.c;
    if (o.f) cfg.params.f = *o.f;
    if (o.samples) cfg.samples = *o.samples;
    if (o.seed) cfg.seed = *o.seed;
    if (o.threads) cfg.threads = *o.threads;
    if (o.pass_tol) cfg.tolerances.pass = *o.pass_tol;
    if (o.fail_tol) cfg.tolerances.fail = *o.fail_tol;
    if (o.conditions) cfg.conditions = detail::split_list(*o.conditions);
    if (o.report) cfg.output = *o.report;
    if (o.format) cfg.format = *o.format;
    validate(cfg);

    ManifoldSpec const spec = resolve_manifold(cfg);
    SuiteReport const report = run_suite(cfg, spec);
    if (cfg.output.empty()) emit_report(report, cfg.format, std::cout);
    else emit_report(report, cfg.format, cfg.output);

    for (auto const& r : report.results)
        std::cerr << r.name << ": " << to_string(r.verdict) << " (max " << (r.max ? format_real(*r.max) : std::string("n/a")) << ")\n";
    return report.exit_code();
}

int run_catalog()
{
    for (auto const& e : minig::catalog()) std::cout << e.name << "\t" << e.summary << "\t" << e.anchor << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical checks of harmonic and minimal U(n) and U(n)x1 structures"};
    app.require_subcommand(1);
    VerifyOptions o;
    auto* verify = app.add_subcommand("verify", "run condition residuals over sampled points");
    verify->add_option("--config", o.config_path, "run configuration file");
    verify->add_option("--manifold", o.manifold, "catalog name or manifold file");
    verify->add_option("--n", o.n, "dimension");
    verify->add_option("--c", o.c, "hyperbolic curvature parameter");
    verify->add_option("--f", o.f, "conformal potential f(x1..xn)");
    verify->add_option("--samples", o.samples, "number of sample points");
    verify->add_option("--seed", o.seed, "sampling seed");
    verify->add_option("--conditions", o.conditions, "comma-separated list of conditions");
    verify->add_option("--pass-tol", o.pass_tol, "pass tolerance");
    verify->add_option("--fail-tol", o.fail_tol, "fail tolerance");
    verify->add_option("--report", o.report, "output path (default stdout)");
    verify->add_option("--format", o.format, "json or csv");
    verify->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    app.add_subcommand("catalog", "list built-in manifolds");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (verify->parsed()) return run_verify(o);
        return run_catalog();
    } catch (minig::ConfigError const& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (minig::ParseError const& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (minig::CatalogError const& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
