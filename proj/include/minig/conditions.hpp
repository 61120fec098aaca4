#pragma once

// Harmonicity, harmonic-map and minimality residuals of a G-structure at a
// point, the specialised LcK and α-Kenmotsu conditions, and the difference
// tensor S = ∇̃ - ∇ of the deformed metric.

#include <minig/diffgeo.hpp>
#include <minig/gstruct.hpp>
#include <minig/manifolds.hpp>
#include <minig/tensor.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace minig {

/// Everything derived at one sample point.
struct GStructureFrame
{
    std::vector<double> point;
    ConnectionPoint conn;
    CurvaturePoint curv;
    Tensor<double> g, g_inv;
    FrameBasis e;  // g-orthonormal

    bool hermitian = false;
    Tensor<Jet2> j2, theta2;
    Tensor<double> j, theta, theta_sharp, j_theta_sharp;
    double theta_norm2 = 0.0;

    Tensor<Jet2> phi2, zeta2, eta2;
    Tensor<double> phi, zeta, eta;
    std::optional<Jet2> alpha;

    TorsionPoint xi;          // general route
    Tensor<double> nabla_xi;  // (b, k, a, j) = (∇_b ξ)^k_{aj}
    DeformedMetricPoint tilde;

    int dim() const { return g.dim(); }
};

inline GStructureFrame build_frame(ManifoldSpec const& spec, std::span<double const> point)
{
    if (static_cast<int>(point.size()) != spec.dim) throw std::invalid_argument("point has the wrong dimension");
    GStructureFrame f;
    f.point.assign(point.begin(), point.end());
    Tensor<Jet2> const g2 = spec.metric.evaluate(point, spec.params);
    f.conn = christoffel(g2);
    f.curv = curvature(f.conn);
    f.g = f.conn.g();
    f.g_inv = f.conn.g_inv();
    f.e = coordinate_frame(f.g, InnerProductRole::metric);

    std::vector<Tensor<double>> seeds;
    if (spec.is_hermitian()) {
        f.hermitian = true;
        f.j2 = spec.hermitian->eval_j(point, spec.params);
        f.theta2 = spec.hermitian->eval_theta(point, spec.params);
        f.j = values(f.j2);
        f.theta = values(f.theta2);
        f.theta_sharp = sharp_with(f.theta, f.g_inv);
        f.j_theta_sharp = apply(f.j, f.theta_sharp);
        f.theta_norm2 = evaluate(f.theta, f.theta_sharp);
        f.xi = torsion_unitary_general(f.j2, f.conn);
        seeds = {f.theta_sharp, f.j_theta_sharp};
    } else if (spec.is_contact()) {
        f.phi2 = spec.contact->eval_phi(point, spec.params);
        f.zeta2 = spec.contact->eval_zeta(point, spec.params);
        f.eta2 = eta_from_zeta(f.zeta2, g2);
        f.phi = values(f.phi2);
        f.zeta = values(f.zeta2);
        f.eta = values(f.eta2);
        if (spec.contact->alpha) f.alpha = eval_jet2(*spec.contact->alpha, point, spec.params);
        f.xi = torsion_contact_general(f.phi2, f.eta2, f.zeta2, f.conn);
        seeds = {f.zeta};
    } else {
        throw std::invalid_argument("manifold has no structure");
    }
    f.nabla_xi = covariant_derivative(f.xi.xi, f.conn);
    f.tilde = deformed_metric(f.xi, f.g, f.e, seeds);
    return f;
}

// ---------------------------------------------------------------------------
// Norms in a g-orthonormal frame
// ---------------------------------------------------------------------------

/// max_{i,j} |g(T e_j, e_i)|
inline double frame_norm_endomorphism(Tensor<double> const& t, GStructureFrame const& f)
{
    double m = 0.0;
    for (auto const& ej : f.e.vectors) {
        Tensor<double> const tej = apply(t, ej);
        for (auto const& ei : f.e.vectors) m = std::max(m, std::abs(pair(f.g, tej, ei)));
    }
    return m;
}

/// max_i |g(v, e_i)|
inline double frame_norm_vector(Tensor<double> const& v, GStructureFrame const& f)
{
    double m = 0.0;
    for (auto const& ei : f.e.vectors) m = std::max(m, std::abs(pair(f.g, v, ei)));
    return m;
}

// ---------------------------------------------------------------------------
// Traces over a frame
// ---------------------------------------------------------------------------

/// Σ_i (∇_{b_i} ξ)_{b_i} for the vectors of `basis`.
inline Tensor<double> torsion_divergence(GStructureFrame const& f, FrameBasis const& basis)
{
    int const n = f.dim();
    Tensor<double> out = Tensor<double>::endomorphism(n);
    for (auto const& v : basis.vectors)
        for (int b = 0; b < n; ++b) {
            if (v(b) == 0.0) continue;
            for (int a = 0; a < n; ++a) {
                double const w = v(b) * v(a);
                if (w == 0.0) continue;
                for (int k = 0; k < n; ++k)
                    for (int j = 0; j < n; ++j) out(k, j) += w * f.nabla_xi(b, k, a, j);
            }
        }
    return out;
}

/// Σ_i R_{ξ_{b_i}}(b_i), with R_T(X) = Σ_j R(e_j, T e_j)X over the g-orthonormal frame.
inline Tensor<double> curvature_torsion_sum(GStructureFrame const& f, FrameBasis const& basis)
{
    Tensor<double> out = Tensor<double>::vector(f.dim());
    for (auto const& v : basis.vectors) out += r_endomorphism(f.xi.along(v), f.curv, f.e, v);
    return out;
}

/// Σ_j (∇_{ẽ_j}ξ)_{ẽ_j} + ξ_V with V = Σ_j R_{ξ_{ẽ_j}}(ẽ_j).
inline Tensor<double> minimality_tensor(GStructureFrame const& f, FrameBasis const& tilde_basis)
{
    return torsion_divergence(f, tilde_basis) + f.xi.along(curvature_torsion_sum(f, tilde_basis));
}

inline double harmonic_residual(GStructureFrame const& f) { return frame_norm_endomorphism(torsion_divergence(f, f.e), f); }

inline double harmonic_map_residual(GStructureFrame const& f) { return frame_norm_vector(curvature_torsion_sum(f, f.e), f); }

inline double minimal_residual(GStructureFrame const& f)
{
    return frame_norm_endomorphism(minimality_tensor(f, f.tilde.adapted_basis), f);
}

// ---------------------------------------------------------------------------
// LcK (W₄) conditions
// ---------------------------------------------------------------------------

namespace detail {
inline void require_hermitian_frame(GStructureFrame const& f)
{
    if (!f.hermitian) throw std::invalid_argument("condition needs a Hermitian structure");
}
}  // namespace detail

/// 1/(1 + ¼|θ♯|²)
inline double lck_factor(GStructureFrame const& f) { return 1.0 / (1.0 + 0.25 * f.theta_norm2); }

/// (∇θ)(a, j) = (∇_{∂_a} θ)(∂_j)
inline Tensor<double> nabla_theta(GStructureFrame const& f) { return values(covariant_derivative(f.theta2, f.conn)); }

/// 𝓡 = Ric(θ♯) - Ric*(Jθ♯)
inline Tensor<double> script_r(GStructureFrame const& f)
{
    detail::require_hermitian_frame(f);
    return script_r(f.curv, f.j, f.theta_sharp, f.e);
}

/// Right-hand side of the full LcK minimality condition for vectors Y, Z.
inline double lck_minimal_full(GStructureFrame const& f, Tensor<double> const& y, Tensor<double> const& z)
{
    detail::require_hermitian_frame(f);
    Tensor<double> const nt = nabla_theta(f);
    auto dth = [&](Tensor<double> const& x, Tensor<double> const& w) {
        double acc = 0.0;
        for (int a = 0; a < f.dim(); ++a)
            for (int b = 0; b < f.dim(); ++b) acc += x(a) * w(b) * nt(a, b);
        return acc;
    };
    Tensor<double> const yp = prime_map(y, f.tilde), zp = prime_map(z, f.tilde);
    Tensor<double> const jy = apply(f.j, y), jz = apply(f.j, z);
    Tensor<double> const r = script_r(f);
    auto omega = [&](Tensor<double> const& a, Tensor<double> const& b) { return pair(f.g, a, apply(f.j, b)); };

    double const lhs = dth(zp, y) - dth(yp, z) - dth(apply(f.j, zp), jy) + dth(apply(f.j, yp), jz);
    double const rterm = evaluate(f.theta, y) * pair(f.g, r, z) - evaluate(f.theta, z) * pair(f.g, r, y) -
                         evaluate(f.theta, jy) * omega(r, z) + evaluate(f.theta, jz) * omega(r, y);
    return lhs - 0.5 * lck_factor(f) * rterm;
}

/// Orthogonal projection onto D^⊥ = span(θ♯, Jθ♯)^⊥ to first order, applied
/// to the constant-coefficient field Σ c^i ∂_i.
inline Tensor<Jet1> project_d_perp_field(GStructureFrame const& f, Tensor<double> const& coeff)
{
    int const n = f.dim();
    Tensor<Jet1> const theta = value_jets(f.theta2);
    Tensor<Jet1> const jj = value_jets(f.j2);
    Tensor<Jet1> const sharp = sharp_with(theta, f.conn.metric_inv);
    Tensor<Jet1> const jsharp = apply(jj, sharp);
    Jet1 const norm2 = evaluate(theta, sharp);
    Jet1 th_c, thj_c;  // θ(c), θ(Jc)
    for (int m = 0; m < n; ++m) {
        th_c += theta(m) * coeff(m);
        for (int l = 0; l < n; ++l) thj_c += theta(m) * jj(m, l) * coeff(l);
    }
    Tensor<Jet1> out = Tensor<Jet1>::vector(n);
    for (int k = 0; k < n; ++k) out(k) = Jet1{coeff(k)} - (th_c * sharp(k) - thj_c * jsharp(k)) / norm2;
    return out;
}

inline Tensor<double> project_d_perp(GStructureFrame const& f, Tensor<double> const& v)
{
    return values(project_d_perp_field(f, v));
}

/// θ([Y,Z]) - θ([JY,JZ]) for the projected fields generated by coefficient vectors y, z.
inline double lck_reduced_4(GStructureFrame const& f, Tensor<double> const& y, Tensor<double> const& z)
{
    detail::require_hermitian_frame(f);
    if (f.theta_norm2 == 0.0) return 0.0;
    Tensor<Jet1> const jj = value_jets(f.j2);
    Tensor<Jet1> const yf = project_d_perp_field(f, y), zf = project_d_perp_field(f, z);
    Tensor<double> const b1 = lie_bracket(yf, zf);
    Tensor<double> const b2 = lie_bracket(apply(jj, yf), apply(jj, zf));
    return evaluate(f.theta, b1) - evaluate(f.theta, b2);
}

/// (1+¼|θ♯|²) θ(∇_{Jθ♯}JY - ∇_{θ♯}Y) - ½Y|θ♯|² - θ(∇_{JY}Jθ♯) + ½|θ♯|² g(𝓡, Y)
/// for the projected field generated by y.
inline double lck_reduced_2(GStructureFrame const& f, Tensor<double> const& y)
{
    detail::require_hermitian_frame(f);
    if (f.theta_norm2 == 0.0) return 0.0;
    int const n = f.dim();
    Tensor<Jet1> const theta = value_jets(f.theta2);
    Tensor<Jet1> const jj = value_jets(f.j2);
    Tensor<Jet1> const jsharp = apply(jj, sharp_with(theta, f.conn.metric_inv));
    Jet1 const norm2 = evaluate(theta, sharp_with(theta, f.conn.metric_inv));
    Tensor<Jet1> const yf = project_d_perp_field(f, y);
    Tensor<Jet1> const jyf = apply(jj, yf);
    Tensor<double> const yv = values(yf), jyv = values(jyf);

    auto along = [&](Tensor<Jet1> const& field, Tensor<double> const& x) {
        return derivative_along(covariant_derivative(field, f.conn), x);
    };
    double y_norm2 = 0.0;
    for (int a = 0; a < n; ++a) y_norm2 += yv(a) * norm2.grad[static_cast<std::size_t>(a)];

    double const lhs = (1.0 + 0.25 * f.theta_norm2) *
                       evaluate(f.theta, along(jyf, f.j_theta_sharp) - along(yf, f.theta_sharp));
    double const rhs = 0.5 * y_norm2 + evaluate(f.theta, along(jsharp, jyv)) -
                       0.5 * f.theta_norm2 * pair(f.g, script_r(f), yv);
    return lhs - rhs;
}

struct ReducedLck
{
    double lck4 = 0.0;
    double lck2 = 0.0;
};

/// Max of |lck_reduced_4| over all pairs and |lck_reduced_2| over all
/// projected coordinate fields.
inline ReducedLck lck_reduced_max(GStructureFrame const& f)
{
    ReducedLck r;
    int const n = f.dim();
    for (int i = 0; i < n; ++i) {
        r.lck2 = std::max(r.lck2, std::abs(lck_reduced_2(f, basis_vector(n, i))));
        for (int k = i + 1; k < n; ++k)
            r.lck4 = std::max(r.lck4, std::abs(lck_reduced_4(f, basis_vector(n, i), basis_vector(n, k))));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Contact conditions
// ---------------------------------------------------------------------------

/// max over Y = pr ∂_i of |Yα - 2α² Ric(ζ, Y)|.
inline double kenmotsu_residual(GStructureFrame const& f)
{
    if (!f.alpha) throw std::invalid_argument("kenmotsu condition needs a C5 structure with alpha");
    int const n = f.dim();
    double const a = f.alpha->value();
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
        Tensor<double> y = basis_vector(n, i) - f.eta(i) * f.zeta;
        double ya = 0.0;
        for (int k = 0; k < n; ++k) ya += y(k) * f.alpha->grad(k);
        m = std::max(m, std::abs(ya - 2.0 * a * a * f.curv.ricci_form(f.zeta, y)));
    }
    return m;
}

struct ProductCheck
{
    double torsion_on_base = 0.0;  // |ξ̄_{(X,0)}(Y,0) - (ξ_X Y, 0)|
    double torsion_other = 0.0;    // ξ̄ on slots involving d/dt
    double deformed_on_base = 0.0; // |g̃̄|_M - g̃|
    double max() const { return std::max({torsion_on_base, torsion_other, deformed_on_base}); }
};

inline ProductCheck c4_product_check(ManifoldSpec const& product, GStructureFrame const& f)
{
    if (!product.base) throw std::invalid_argument("c4_product_check needs a product manifold");
    int const n = product.base->dim, n1 = f.dim();
    GStructureFrame const b = build_frame(*product.base, std::span<double const>(f.point.data(), static_cast<std::size_t>(n)));
    Tensor<double> const xb = f.xi.value(), x = b.xi.value();
    ProductCheck r;
    for (int k = 0; k < n1; ++k)
        for (int a = 0; a < n1; ++a)
            for (int j = 0; j < n1; ++j) {
                if (k < n && a < n && j < n) r.torsion_on_base = std::max(r.torsion_on_base, std::abs(xb(k, a, j) - x(k, a, j)));
                else r.torsion_other = std::max(r.torsion_other, std::abs(xb(k, a, j)));
            }
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            r.deformed_on_base = std::max(r.deformed_on_base, std::abs(f.tilde.g_tilde(a, c) - b.tilde.g_tilde(a, c)));
    return r;
}

// ---------------------------------------------------------------------------
// Difference tensor
// ---------------------------------------------------------------------------

/// S^k_{ij} = Γ̃^k_{ij} - Γ^k_{ij}, with g̃ assembled to first order from ξ.
inline Tensor<double> difference_tensor(GStructureFrame const& f)
{
    Tensor<Jet1> const gt = deformed_metric_jet(f.xi, f.conn.metric, f.conn.metric_inv);
    return christoffel_of(gt) - f.conn.christoffel();
}

/// S_X Y
inline Tensor<double> apply_difference(Tensor<double> const& s, Tensor<double> const& x, Tensor<double> const& y)
{
    int const n = s.dim();
    Tensor<double> out = Tensor<double>::vector(n);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) out(k) += s(k, a, b) * x(a) * y(b);
    return out;
}

struct HarmonicMapIdentities
{
    double torsion_part = 0.0;    // |Σ(∇_{ẽ_j}ξ)_{ẽ_j} - Σ ξ_{S_{ẽ_j}ẽ_j}|
    double curvature_part = 0.0;  // |Σ R_{ξ_{ẽ_j}}(ẽ_j) + Σ S_{ẽ_j}ẽ_j|
};

inline HarmonicMapIdentities harmonic_map_identities(GStructureFrame const& f)
{
    Tensor<double> const s = difference_tensor(f);
    Tensor<double> trace_s = Tensor<double>::vector(f.dim());
    for (auto const& v : f.tilde.adapted_basis.vectors) trace_s += apply_difference(s, v, v);
    FrameBasis const& tb = f.tilde.adapted_basis;
    HarmonicMapIdentities r;
    r.torsion_part = frame_norm_endomorphism(torsion_divergence(f, tb) - f.xi.along(trace_s), f);
    r.curvature_part = frame_norm_vector(curvature_torsion_sum(f, tb) + trace_s, f);
    return r;
}

// ---------------------------------------------------------------------------
// Structure certification
// ---------------------------------------------------------------------------

struct StructureReport
{
    double compatibility = 0.0;   // J/φ algebraic identities
    double membership = 0.0;      // ξ_X skew and in 𝔪
    double two_route = 0.0;       // general vs closed-form torsion (W₄ / C₅ only)
    double lee_form = 0.0;        // dΩ - θ∧Ω (Hermitian only)
    double max() const { return std::max({compatibility, membership, two_route, lee_form}); }
};

inline StructureReport structure_report(ManifoldSpec const& spec, GStructureFrame const& f)
{
    StructureReport r;
    if (f.hermitian) {
        r.compatibility = hermitian_compatibility(f.j, f.g);
        r.membership = torsion_membership_unitary(f.xi, f.j, f.g);
        if (spec.declared_class == TorsionClass::w4 || spec.declared_class == TorsionClass::kaehler) {
            TorsionPoint const closed = torsion_w4_closed(value_jets(f.theta2), value_jets(f.j2), f.conn.metric, f.conn.metric_inv);
            r.two_route = torsion_difference(f.xi, closed);
            r.lee_form = verify_lee_form(kaehler_form(f.conn.metric, value_jets(f.j2)), f.theta).residual;
        }
    } else {
        r.compatibility = contact_compatibility(f.phi, f.zeta, f.eta, f.g);
        r.membership = torsion_membership_contact(f.xi, f.phi, f.eta, f.zeta, f.g);
        if (spec.declared_class == TorsionClass::c5 && f.alpha) {
            TorsionPoint const closed = torsion_c5_closed(f.alpha->value_jet(), value_jets(f.eta2), value_jets(f.zeta2), f.conn.metric);
            r.two_route = torsion_difference(f.xi, closed);
        }
    }
    return r;
}

}  // namespace minig
