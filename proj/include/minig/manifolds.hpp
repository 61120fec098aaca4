#pragma once

// Catalog of example manifolds with their G-structures, and point sampling.

#include <minig/diffgeo.hpp>
#include <minig/expr.hpp>
#include <minig/gstruct.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace minig {

enum class TorsionClass { kaehler, w4, cosymplectic, c4, c5, unspecified };

inline char const* to_string(TorsionClass c)
{
    switch (c) {
    case TorsionClass::kaehler: return "Kaehler";
    case TorsionClass::w4: return "W4";
    case TorsionClass::cosymplectic: return "cosymplectic";
    case TorsionClass::c4: return "C4";
    case TorsionClass::c5: return "C5";
    case TorsionClass::unspecified: return "unspecified";
    }
    return "unspecified";
}

/// Coordinate box, optionally intersected with a shell r_min < |x| < r_max in
/// the first `radial_dims` coordinates.
struct SamplingDomain
{
    std::vector<std::pair<double, double>> box;
    int radial_dims = 0;
    double r_min = 0.0;
    double r_max = std::numeric_limits<double>::infinity();

    bool contains(std::span<double const> p) const
    {
        if (p.size() != box.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] < box[i].first || p[i] > box[i].second) return false;
        if (radial_dims > 0) {
            double r2 = 0.0;
            for (int i = 0; i < radial_dims; ++i) r2 += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
            double const r = std::sqrt(r2);
            if (!(r > r_min && r < r_max)) return false;
        }
        return true;
    }
};

struct ManifoldSpec
{
    std::string name;
    std::string description;
    int dim = 0;
    MetricField metric;
    std::optional<HermitianStructure> hermitian;
    std::optional<ContactStructure> contact;
    TorsionClass declared_class = TorsionClass::unspecified;
    SamplingDomain domain;
    ParamMap params;
    std::shared_ptr<ManifoldSpec const> base;  // set for products M×ℝ

    bool is_hermitian() const { return hermitian.has_value(); }
    bool is_contact() const { return contact.has_value(); }
};

class CatalogError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::vector<ScalarExpr> standard_complex_structure(int n, int offset, int total)
{
    // J∂_{2i} = ∂_{2i+1}, J∂_{2i+1} = -∂_{2i} on coordinates offset, offset+1, ...
    std::vector<ScalarExpr> j(static_cast<std::size_t>(total * total), ScalarExpr::constant(0.0));
    for (int i = 0; i + 1 < n; i += 2) {
        int const a = offset + i, b = offset + i + 1;
        j[static_cast<std::size_t>(b * total + a)] = ScalarExpr::constant(1.0);
        j[static_cast<std::size_t>(a * total + b)] = ScalarExpr::constant(-1.0);
    }
    return j;
}

inline std::vector<ScalarExpr> scaled_gradient(ScalarExpr const& f, int n, double scale)
{
    std::vector<ScalarExpr> out;
    for (int i = 0; i < n; ++i) {
        ScalarExpr const d = differentiate(f, i);
        if (d.is_constant_zero()) out.push_back(d);
        else {
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::mul;
            node->lhs = ScalarExpr::constant(scale).root_ptr();
            node->rhs = d.root_ptr();
            out.push_back(ScalarExpr(std::move(node)));
        }
    }
    return out;
}

}  // namespace detail

/// ℝⁿ with the flat metric and the standard complex structure.
inline ManifoldSpec build_flat_kaehler(int n = 4)
{
    if (n < 2 || n % 2 != 0) throw CatalogError("flat-kahler needs an even dimension >= 2");
    ManifoldSpec m;
    m.name = "flat-kahler";
    m.description = "Euclidean space with the canonical complex structure";
    m.dim = n;
    m.metric = MetricField::diagonal(n, ScalarExpr::constant(1.0));
    m.hermitian = HermitianStructure{detail::standard_complex_structure(n, 0, n),
                                     std::vector<ScalarExpr>(static_cast<std::size_t>(n), ScalarExpr::constant(0.0))};
    m.declared_class = TorsionClass::kaehler;
    m.domain.box.assign(static_cast<std::size_t>(n), {-1.0, 1.0});
    return m;
}

/// g₀ = e^{-2f} δ on ℝⁿ with the standard J. dΩ₀ = θ∧Ω₀ holds for θ = -2 df.
inline ManifoldSpec build_conformal_euclidean(int n, std::string const& f_text)
{
    if (n < 4 || n % 2 != 0) throw CatalogError("conformal-euclidean needs an even dimension >= 4");
    ScalarExpr const f = parse_expr(f_text, n);
    ScalarExpr const factor = parse_expr("exp(-2*(" + f.to_string() + "))", n);
    ManifoldSpec m;
    m.name = "conformal-euclidean";
    m.description = "conformal deformation exp(-2f) of flat space, f = " + f_text;
    m.dim = n;
    m.metric = MetricField::diagonal(n, factor);
    m.hermitian = HermitianStructure{detail::standard_complex_structure(n, 0, n), detail::scaled_gradient(f, n, -2.0)};
    m.declared_class = TorsionClass::w4;
    m.domain.box.assign(static_cast<std::size_t>(n), {-1.0, 1.0});
    return m;
}

/// ℂ^{n/2}∖{0} with δ/r², the universal cover of a Hopf manifold; θ = -2 d log r.
inline ManifoldSpec build_hopf_cover(int n = 4)
{
    if (n < 4 || n % 2 != 0) throw CatalogError("hopf needs an even dimension >= 4");
    std::string r2;
    for (int i = 1; i <= n; ++i) r2 += (i > 1 ? " + x" : "x") + std::to_string(i) + "^2";
    ManifoldSpec m;
    m.name = "hopf";
    m.description = "cover of a Hopf manifold, metric |x|^-2 delta";
    m.dim = n;
    m.metric = MetricField::diagonal(n, parse_expr("1/(" + r2 + ")", n));
    std::vector<ScalarExpr> theta;
    for (int i = 1; i <= n; ++i) theta.push_back(parse_expr("-2*x" + std::to_string(i) + "/(" + r2 + ")", n));
    m.hermitian = HermitianStructure{detail::standard_complex_structure(n, 0, n), std::move(theta)};
    m.declared_class = TorsionClass::w4;
    m.domain.box.assign(static_cast<std::size_t>(n), {-2.0, 2.0});
    m.domain.radial_dims = n;
    m.domain.r_min = 0.5;
    m.domain.r_max = 2.0;
    return m;
}

/// Upper half space x1 > 0 with δ/(c²x1²): ζ = c x1 ∂₁, α = -c, φ the
/// standard complex structure on x2..xn.
inline ManifoldSpec build_hyperbolic_kenmotsu(int n = 5, double c = 1.0)
{
    if (n < 3 || n % 2 != 1) throw CatalogError("hyperbolic needs an odd dimension >= 3");
    if (c == 0.0 || !std::isfinite(c)) throw CatalogError("hyperbolic needs a finite non-zero c");
    ManifoldSpec m;
    m.name = "hyperbolic";
    m.description = "hyperbolic space as an alpha-Kenmotsu manifold";
    m.dim = n;
    m.params = {{"c", c}};
    m.metric = MetricField::diagonal(n, parse_expr("1/(c^2*x1^2)", n, m.params));
    ContactStructure s;
    s.phi = detail::standard_complex_structure(n - 1, 1, n);
    s.zeta.assign(static_cast<std::size_t>(n), ScalarExpr::constant(0.0));
    s.zeta[0] = parse_expr("c*x1", n, m.params);
    s.alpha = parse_expr("-c", n, m.params);
    m.contact = std::move(s);
    m.declared_class = TorsionClass::c5;
    m.domain.box.assign(static_cast<std::size_t>(n), {-1.0, 1.0});
    m.domain.box[0] = {0.5, 2.0};
    return m;
}

/// dx1² + e^{2 x1 x2}(dx2² + dx3²) with ζ = ∂₁; α = x2 is not constant on
/// the contact distribution.
inline ManifoldSpec build_warped_kenmotsu()
{
    int const n = 3;
    ManifoldSpec m;
    m.name = "warped-kenmotsu";
    m.description = "three-dimensional warped product with alpha = x2";
    m.dim = n;
    m.metric = MetricField(n);
    ScalarExpr const w = parse_expr("exp(2*x1*x2)", n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.metric.set(i, j, ScalarExpr::constant(0.0));
    m.metric.set(0, 0, ScalarExpr::constant(1.0));
    m.metric.set(1, 1, w);
    m.metric.set(2, 2, w);
    ContactStructure s;
    s.phi = detail::standard_complex_structure(2, 1, n);
    s.zeta = {ScalarExpr::constant(1.0), ScalarExpr::constant(0.0), ScalarExpr::constant(0.0)};
    s.alpha = parse_expr("x2", n);
    m.contact = std::move(s);
    m.declared_class = TorsionClass::c5;
    m.domain.box.assign(static_cast<std::size_t>(n), {-1.0, 1.0});
    return m;
}

/// M × ℝ with ḡ = g + dt², φ = J ⊕ 0, ζ = ∂_t.
inline ManifoldSpec product_with_line(ManifoldSpec const& base)
{
    if (!base.is_hermitian()) throw CatalogError("product_with_line needs a Hermitian base");
    int const n = base.dim, n1 = base.dim + 1;
    ManifoldSpec m;
    m.name = base.name + "-x-line";
    m.description = "product of " + base.name + " with a line";
    m.dim = n1;
    m.params = base.params;
    m.metric = MetricField(n1);
    for (int i = 0; i < n1; ++i)
        for (int j = i; j < n1; ++j)
            m.metric.set(i, j, i < n && j < n ? base.metric.component(i, j) : ScalarExpr::constant(i == j ? 1.0 : 0.0));
    ContactStructure s;
    s.phi.assign(static_cast<std::size_t>(n1 * n1), ScalarExpr::constant(0.0));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            s.phi[static_cast<std::size_t>(k * n1 + j)] = base.hermitian->j[static_cast<std::size_t>(k * n + j)];
    s.zeta.assign(static_cast<std::size_t>(n1), ScalarExpr::constant(0.0));
    s.zeta[static_cast<std::size_t>(n)] = ScalarExpr::constant(1.0);
    m.contact = std::move(s);
    m.declared_class = base.declared_class == TorsionClass::kaehler ? TorsionClass::cosymplectic
                       : base.declared_class == TorsionClass::w4   ? TorsionClass::c4
                                                                   : TorsionClass::unspecified;
    m.domain = base.domain;
    m.domain.box.push_back({-1.0, 1.0});
    m.base = std::make_shared<ManifoldSpec const>(base);
    return m;
}

struct CatalogEntry
{
    std::string name;
    std::string summary;
    std::string anchor;
};

inline std::vector<CatalogEntry> catalog()
{
    return {
        {"flat-kahler", "flat R^n, standard J (n even, default 4)", "Kaehler reference case: all torsion vanishes"},
        {"conformal-euclidean", "exp(-2f) times flat metric on R^n, standard J (n even, default 4; f default x1^2+x2)",
         "globally conformally Kaehler example, Lee form -2 df"},
        {"hopf", "R^n minus 0 with metric |x|^-2 delta, annulus 0.5<|x|<2 (n even, default 4)",
         "Hopf manifolds: LcK with parallel Lee form, minimal U(n)-structure"},
        {"hyperbolic", "upper half space, metric (c x1)^-2 delta (n odd, default 5; c default 1)",
         "alpha-Kenmotsu with alpha=-c, minimal U(n)x1-structure"},
        {"hopf-x-line", "product of the Hopf cover with a line (dimension n+1)",
         "C4 structure on M x R, minimal when M is Hopf"},
        {"warped-kenmotsu", "dx1^2 + exp(2 x1 x2)(dx2^2+dx3^2), alpha = x2", "C5 structure that is not minimal"},
    };
}

struct CatalogParams
{
    std::optional<int> n;
    std::optional<double> c;
    std::optional<std::string> f;
};

inline ManifoldSpec build_catalog(std::string const& name, CatalogParams const& p = {})
{
    if (name == "flat-kahler") return build_flat_kaehler(p.n.value_or(4));
    if (name == "conformal-euclidean") return build_conformal_euclidean(p.n.value_or(4), p.f.value_or("x1^2 + x2"));
    if (name == "hopf") return build_hopf_cover(p.n.value_or(4));
    if (name == "hyperbolic") return build_hyperbolic_kenmotsu(p.n.value_or(5), p.c.value_or(1.0));
    if (name == "hopf-x-line") return product_with_line(build_hopf_cover(p.n.value_or(4)));
    if (name == "warped-kenmotsu") return build_warped_kenmotsu();
    std::string names;
    for (auto const& e : catalog()) names += (names.empty() ? "" : ", ") + e.name;
    throw CatalogError("unknown manifold \"" + name + "\" (catalog: " + names + ")");
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// `count` points drawn uniformly from the domain by rejection; points where
/// the metric is not positive definite are also rejected.
inline std::vector<std::vector<double>> sample_points(ManifoldSpec const& spec, int count, std::uint64_t seed)
{
    if (count < 1) throw std::invalid_argument("sample count must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> out;
    std::size_t attempts = 0;
    std::size_t const limit = 10000 * static_cast<std::size_t>(count) + 100000;
    while (out.size() < static_cast<std::size_t>(count)) {
        if (++attempts > limit) throw std::runtime_error("sample_points: domain rejection rate too high");
        std::vector<double> p(static_cast<std::size_t>(spec.dim));
        for (int i = 0; i < spec.dim; ++i) {
            auto const [lo, hi] = spec.domain.box[static_cast<std::size_t>(i)];
            p[static_cast<std::size_t>(i)] = lo + (hi - lo) * unit_uniform(rng);
        }
        if (!spec.domain.contains(p)) continue;
        try {
            (void)spec.metric.evaluate(p, spec.params);
        } catch (std::exception const&) {
            continue;
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace minig
