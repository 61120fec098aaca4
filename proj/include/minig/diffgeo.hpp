#pragma once

// Pointwise Riemannian geometry from jet-valued metric components.
//
// Conventions:
//   ∇_{∂_i} ∂_j = Γ^k_{ij} ∂_k, stored as gamma(k, i, j)
//   R(X,Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_{[X,Y]}, R(∂_i,∂_j)∂_k = R^l_{ijk} ∂_l, stored as riemann(l, i, j, k)
//   Ric(Y,Z) = tr(X ↦ R(X,Y)Z), Ricci operator Ric(Y) = Σ_j R(Y,e_j)e_j
// With these, round spheres have positive and hyperbolic space negative
// sectional curvature.

#include <minig/expr.hpp>
#include <minig/jet.hpp>
#include <minig/tensor.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace minig {

// ---------------------------------------------------------------------------
// Metric fields
// ---------------------------------------------------------------------------

/// Symmetric metric given by expressions for its upper triangle.
class MetricField
{
  public:
    MetricField() = default;
    explicit MetricField(int n) : n_(n), upper_(static_cast<std::size_t>(n * (n + 1) / 2)) {}

    static MetricField diagonal(int n, ScalarExpr const& factor)
    {
        MetricField g(n);
        for (int i = 0; i < n; ++i) g.set(i, i, factor);
        return g;
    }

    int dim() const { return n_; }
    void set(int i, int j, ScalarExpr e) { upper_[slot(i, j)] = std::move(e); }
    ScalarExpr const& component(int i, int j) const { return upper_[slot(i, j)]; }

    /// Components with first and second partials; throws if not positive
    /// definite at the point.
    Tensor<Jet2> evaluate(std::span<double const> point, ParamMap const& params) const
    {
        Tensor<Jet2> g = Tensor<Jet2>::bilinear(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                Jet2 v = eval_jet2(component(i, j), point, params);
                g(i, j) = v;
                if (i != j) g(j, i) = std::move(v);
            }
        require_positive_definite(values(g), "metric");
        return g;
    }

  private:
    std::size_t slot(int i, int j) const
    {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
    }

    int n_ = 0;
    std::vector<ScalarExpr> upper_;
};

// ---------------------------------------------------------------------------
// Connection
// ---------------------------------------------------------------------------

/// Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij}), generic over the scalar type.
template <class S>
Tensor<S> christoffel_symbols(Tensor<S> const& g_inv, std::vector<Tensor<S>> const& dg)
{
    int const n = g_inv.dim();
    Tensor<S> gamma(n, {Variance::up, Variance::down, Variance::down});
    // First-kind symbols Γ_{lij} = ½(∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij}).
    Tensor<S> first(n, {Variance::down, Variance::down, Variance::down});
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                S v = (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l)) -
                      dg[static_cast<std::size_t>(l)](i, j);
                v *= 0.5;
                first(l, i, j) = v;
                first(l, j, i) = v;
            }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                S acc{};
                for (int l = 0; l < n; ++l) acc += g_inv(k, l) * first(l, i, j);
                gamma(k, i, j) = acc;
                gamma(k, j, i) = acc;
            }
    return gamma;
}

/// Levi-Civita connection at a point, with exact first partials of Γ.
struct ConnectionPoint
{
    Tensor<Jet1> metric;      // g_ij with ∂g
    Tensor<Jet1> metric_inv;  // g^ij with ∂(g⁻¹)
    Tensor<Jet1> gamma;       // Γ^k_ij with ∂_l Γ^k_ij

    int dim() const { return gamma.dim(); }
    Tensor<double> g() const { return values(metric); }
    Tensor<double> g_inv() const { return values(metric_inv); }
    Tensor<double> christoffel() const { return values(gamma); }
    /// ∂_l Γ^k_ij stored as (l, k, i, j).
    Tensor<double> christoffel_partials() const
    {
        int const n = dim();
        Tensor<double> out(n, {Variance::down, Variance::up, Variance::down, Variance::down});
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) out(l, k, i, j) = gamma(k, i, j).grad[static_cast<std::size_t>(l)];
        return out;
    }
};

inline ConnectionPoint christoffel(Tensor<Jet2> const& g)
{
    int const n = g.dim();
    ConnectionPoint c;
    c.metric = value_jets(g);
    c.metric_inv = inverse_metric(c.metric);
    std::vector<Tensor<Jet1>> dg;
    for (int a = 0; a < n; ++a) dg.push_back(partial_jets(g, a));
    c.gamma = christoffel_symbols(c.metric_inv, dg);
    return c;
}

inline ConnectionPoint christoffel(MetricField const& metric, std::span<double const> point, ParamMap const& params)
{
    return christoffel(metric.evaluate(point, params));
}

/// Christoffel symbols of a metric known only to first order (values + ∂).
inline Tensor<double> christoffel_of(Tensor<Jet1> const& metric)
{
    int const n = metric.dim();
    Tensor<double> const inv = inverse_metric(values(metric));
    std::vector<Tensor<double>> dg;
    for (int a = 0; a < n; ++a) dg.push_back(partials(metric, a));
    return christoffel_symbols(inv, dg);
}

// ---------------------------------------------------------------------------
// Curvature
// ---------------------------------------------------------------------------

struct CurvaturePoint
{
    Tensor<double> riemann;  // R^l_ijk at (l, i, j, k)
    Tensor<double> ricci;    // Ric_jk
    double scalar = 0.0;
    Tensor<double> g;
    Tensor<double> g_inv;

    int dim() const { return g.dim(); }

    /// R(X,Y)Z
    Tensor<double> apply(Tensor<double> const& x, Tensor<double> const& y, Tensor<double> const& z) const
    {
        int const n = dim();
        Tensor<double> out = Tensor<double>::vector(n);
        for (int i = 0; i < n; ++i) {
            if (x(i) == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                double const xy = x(i) * y(j);
                if (xy == 0.0) continue;
                for (int k = 0; k < n; ++k) {
                    double const w = xy * z(k);
                    if (w == 0.0) continue;
                    for (int l = 0; l < n; ++l) out(l) += w * riemann(l, i, j, k);
                }
            }
        }
        return out;
    }

    /// Rm_ijkl = g(R(∂_i,∂_j)∂_k, ∂_l)
    Tensor<double> lowered() const
    {
        int const n = dim();
        Tensor<double> out(n, {Variance::down, Variance::down, Variance::down, Variance::down});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double acc = 0.0;
                        for (int m = 0; m < n; ++m) acc += g(l, m) * riemann(m, i, j, k);
                        out(i, j, k, l) = acc;
                    }
        return out;
    }

    /// Ricci operator: g(Ric(Y), Z) = Ric(Y, Z).
    Tensor<double> ricci_operator(Tensor<double> const& y) const
    {
        int const n = dim();
        Tensor<double> out = Tensor<double>::vector(n);
        for (int a = 0; a < n; ++a) {
            double acc = 0.0;
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) acc += g_inv(a, b) * ricci(c, b) * y(c);
            out(a) = acc;
        }
        return out;
    }

    double ricci_form(Tensor<double> const& y, Tensor<double> const& z) const { return pair(ricci, y, z); }

    double sectional(Tensor<double> const& x, Tensor<double> const& y) const
    {
        double const num = pair(g, apply(x, y, y), x);
        double const den = pair(g, x, x) * pair(g, y, y) - pair(g, x, y) * pair(g, x, y);
        return num / den;
    }
};

inline CurvaturePoint curvature(ConnectionPoint const& conn)
{
    int const n = conn.dim();
    CurvaturePoint c;
    c.g = conn.g();
    c.g_inv = conn.g_inv();
    c.riemann = Tensor<double>(n, {Variance::up, Variance::down, Variance::down, Variance::down});
    Tensor<double> const gamma = conn.christoffel();
    Tensor<double> const dgamma = conn.christoffel_partials();
    // ΓΓ(l, i, j, k) = Γ^l_{im} Γ^m_{jk}
    Tensor<double> gg(n, {Variance::up, Variance::down, Variance::down, Variance::down});
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double acc = 0.0;
                    for (int m = 0; m < n; ++m) acc += gamma(l, i, m) * gamma(m, j, k);
                    gg(l, i, j, k) = acc;
                }
    // Grouped so that swapping i and j negates the result exactly.
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    c.riemann(l, i, j, k) = (dgamma(i, l, j, k) - dgamma(j, l, i, k)) + (gg(l, i, j, k) - gg(l, j, i, k));

    c.ricci = contract(c.riemann, 0, 1);
    double s = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += c.g_inv(a, b) * c.ricci(a, b);
    c.scalar = s;
    return c;
}

// ---------------------------------------------------------------------------
// Covariant derivatives and brackets
// ---------------------------------------------------------------------------

/// (∇T) with the derivative direction prepended as slot 0:
///   ∇_a T = ∂_a T + Σ_up Γ^k_{am} T^{..m..} - Σ_down Γ^m_{ai} T_{..m..}
/// `field_partials[a]` holds ∂_a of the field components.
template <class S>
Tensor<S> covariant_derivative(Tensor<S> const& field, std::vector<Tensor<S>> const& field_partials, Tensor<S> const& gamma)
{
    int const n = field.dim();
    std::size_t const r = field.rank();
    std::vector<Variance> var{Variance::down};
    var.insert(var.end(), field.variance().begin(), field.variance().end());
    Tensor<S> out(n, var);
    std::vector<int> idx(r, 0);
    std::size_t const block = field.size();
    for (int a = 0; a < n; ++a) {
        for (std::size_t flat = 0; flat < block; ++flat) {
            std::size_t rem = flat;
            for (std::size_t s = r; s-- > 0;) {
                idx[s] = static_cast<int>(rem % static_cast<std::size_t>(n));
                rem /= static_cast<std::size_t>(n);
            }
            S acc = field_partials[static_cast<std::size_t>(a)][flat];
            for (std::size_t s = 0; s < r; ++s) {
                int const keep = idx[s];
                for (int m = 0; m < n; ++m) {
                    idx[s] = m;
                    if (field.variance()[s] == Variance::up) acc += gamma(keep, a, m) * field.at(idx);
                    else acc -= gamma(m, a, keep) * field.at(idx);
                }
                idx[s] = keep;
            }
            out[static_cast<std::size_t>(a) * block + flat] = acc;
        }
    }
    return out;
}

/// ∇ of a field known to first order, evaluated at the point.
inline Tensor<double> covariant_derivative(Tensor<Jet1> const& field, ConnectionPoint const& conn)
{
    std::vector<Tensor<double>> dpart;
    for (int a = 0; a < field.dim(); ++a) dpart.push_back(partials(field, a));
    return covariant_derivative(values(field), dpart, conn.christoffel());
}

/// ∇ of a field known to second order, keeping its first partials.
inline Tensor<Jet1> covariant_derivative(Tensor<Jet2> const& field, ConnectionPoint const& conn)
{
    std::vector<Tensor<Jet1>> dpart;
    for (int a = 0; a < field.dim(); ++a) dpart.push_back(partial_jets(field, a));
    return covariant_derivative(value_jets(field), dpart, conn.gamma);
}

/// ∇_X of a field whose full covariant derivative (slot 0 = direction) is known.
template <class S>
Tensor<S> derivative_along(Tensor<S> const& nabla, Tensor<S> const& x)
{
    int const n = nabla.dim();
    std::vector<Variance> var(nabla.variance().begin() + 1, nabla.variance().end());
    Tensor<S> out = var.empty() ? Tensor<S>::scalar(S{}) : Tensor<S>(n, var);
    std::size_t const block = out.size();
    for (int a = 0; a < n; ++a)
        for (std::size_t f = 0; f < block; ++f) out[f] += x(a) * nabla[static_cast<std::size_t>(a) * block + f];
    return out;
}

/// [X,Y]^k = X^j ∂_j Y^k - Y^j ∂_j X^k
inline Tensor<double> lie_bracket(Tensor<Jet1> const& x, Tensor<Jet1> const& y)
{
    int const n = x.dim();
    Tensor<double> out = Tensor<double>::vector(n);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc += x(j).value * y(k).grad[static_cast<std::size_t>(j)] - y(j).value * x(k).grad[static_cast<std::size_t>(j)];
        out(k) = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exterior calculus (cyclic-sum convention, no 1/k! factors)
// ---------------------------------------------------------------------------

/// dω for a 1-form ((dω)_ij = ∂_i ω_j - ∂_j ω_i) or a 2-form
/// ((dΩ)_ijk = ∂_i Ω_jk + ∂_j Ω_ki + ∂_k Ω_ij).
inline Tensor<double> exterior_derivative(Tensor<Jet1> const& form)
{
    int const n = form.dim();
    auto d = [](Jet1 const& c, int i) { return c.grad[static_cast<std::size_t>(i)]; };
    if (form.rank() == 1) {
        Tensor<double> out = Tensor<double>::bilinear(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) = d(form(j), i) - d(form(i), j);
        return out;
    }
    if (form.rank() == 2) {
        Tensor<double> out(n, {Variance::down, Variance::down, Variance::down});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) out(i, j, k) = d(form(j, k), i) + d(form(k, i), j) + d(form(i, j), k);
        return out;
    }
    throw TensorError("exterior_derivative supports 1- and 2-forms only");
}

/// (θ∧Ω)_ijk = θ_i Ω_jk + θ_j Ω_ki + θ_k Ω_ij
inline Tensor<double> wedge_1_2(Tensor<double> const& theta, Tensor<double> const& omega)
{
    int const n = theta.dim();
    Tensor<double> out(n, {Variance::down, Variance::down, Variance::down});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out(i, j, k) = theta(i) * omega(j, k) + theta(j) * omega(k, i) + theta(k) * omega(i, j);
    return out;
}

// ---------------------------------------------------------------------------
// Curvature endomorphisms
// ---------------------------------------------------------------------------

/// R_T(X) = Σ_j R(e_j, T e_j) X over a g-orthonormal basis.
inline Tensor<double> r_endomorphism(Tensor<double> const& t, CurvaturePoint const& curv, FrameBasis const& basis,
                                     Tensor<double> const& x)
{
    FrameBasis check{basis.vectors, curv.g, basis.role};
    if (basis.size() != static_cast<std::size_t>(curv.dim()) || check.orthonormality_defect() > 1e-8)
        throw TensorError("r_endomorphism: basis is not orthonormal for the curvature's metric");
    Tensor<double> out = Tensor<double>::vector(curv.dim());
    for (auto const& e : basis.vectors) out += curv.apply(e, apply(t, e), x);
    return out;
}

/// L(X,Y) = (D_X df)Y + df(X)df(Y) with D the flat connection of the chart.
inline Tensor<double> l_tensor(Jet2 const& f)
{
    int const n = f.dim();
    Tensor<double> out = Tensor<double>::bilinear(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = f.hess(i, j) + f.grad(i) * f.grad(j);
    return out;
}

inline Tensor<double> l_tensor(ScalarExpr const& f, std::span<double const> point, ParamMap const& params = {})
{
    return l_tensor(eval_jet2(f, point, params));
}

}  // namespace minig
