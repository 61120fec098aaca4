#pragma once

// Almost Hermitian (U(n)) and almost contact metric (U(n)×1) structures at a
// point: Lie-algebra projections, intrinsic torsion, the Lee form, the
// deformed metric g̃ and its adapted frame.
//
// Intrinsic torsion is stored as xi(k, a, j) = (ξ_{∂_a} ∂_j)^k, i.e.
// ξ_X = ∇^G_X - ∇_X with ∇^G the minimal G-connection.

#include <minig/diffgeo.hpp>
#include <minig/expr.hpp>
#include <minig/tensor.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace minig {

class StructureError : public std::runtime_error
{
  public:
    StructureError(std::string const& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual)
    {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

inline constexpr double kStructureTolerance = 1e-10;

// ---------------------------------------------------------------------------
// Structure specifications
// ---------------------------------------------------------------------------

/// J as an n×n expression matrix (row k, column j holds J^k_j) and the Lee form θ.
struct HermitianStructure
{
    std::vector<ScalarExpr> j;
    std::vector<ScalarExpr> theta;

    Tensor<Jet2> eval_j(std::span<double const> p, ParamMap const& params) const
    {
        int const n = static_cast<int>(p.size());
        Tensor<Jet2> out = Tensor<Jet2>::endomorphism(n);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_jet2(j[i], p, params);
        return out;
    }
    Tensor<Jet2> eval_theta(std::span<double const> p, ParamMap const& params) const
    {
        int const n = static_cast<int>(p.size());
        Tensor<Jet2> out = Tensor<Jet2>::covector(n);
        for (int i = 0; i < n; ++i) out(i) = eval_jet2(theta[static_cast<std::size_t>(i)], p, params);
        return out;
    }
};

/// φ, the Reeb field ζ and (for C₅) the function α; η is always ζ♭.
struct ContactStructure
{
    std::vector<ScalarExpr> phi;
    std::vector<ScalarExpr> zeta;
    std::optional<ScalarExpr> alpha;

    Tensor<Jet2> eval_phi(std::span<double const> p, ParamMap const& params) const
    {
        int const n = static_cast<int>(p.size());
        Tensor<Jet2> out = Tensor<Jet2>::endomorphism(n);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_jet2(phi[i], p, params);
        return out;
    }
    Tensor<Jet2> eval_zeta(std::span<double const> p, ParamMap const& params) const
    {
        int const n = static_cast<int>(p.size());
        Tensor<Jet2> out = Tensor<Jet2>::vector(n);
        for (int i = 0; i < n; ++i) out(i) = eval_jet2(zeta[static_cast<std::size_t>(i)], p, params);
        return out;
    }
};

/// η = ζ♭, kept to second order.
inline Tensor<Jet2> eta_from_zeta(Tensor<Jet2> const& zeta, Tensor<Jet2> const& g)
{
    int const n = g.dim();
    Tensor<Jet2> eta = Tensor<Jet2>::covector(n);
    for (int i = 0; i < n; ++i) {
        Jet2 acc(n, 0.0);
        for (int k = 0; k < n; ++k) acc += g(i, k) * zeta(k);
        eta(i) = std::move(acc);
    }
    return eta;
}

// ---------------------------------------------------------------------------
// Compatibility residuals
// ---------------------------------------------------------------------------

/// max of |J² + Id| and |g(J·,J·) - g|.
inline double hermitian_compatibility(Tensor<double> const& j, Tensor<double> const& g)
{
    int const n = g.dim();
    Tensor<double> j2 = compose(j, j);
    double r = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            r = std::max(r, std::abs(j2(a, b) + (a == b ? 1.0 : 0.0)));
            double gjj = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) gjj += g(k, l) * j(k, a) * j(l, b);
            r = std::max(r, std::abs(gjj - g(a, b)));
        }
    return r;
}

/// max of |φ² + Id - η⊗ζ|, |g(φ·,φ·) - g + η⊗η|, ||ζ|² - 1|, |η(ζ) - 1|.
inline double contact_compatibility(Tensor<double> const& phi, Tensor<double> const& zeta, Tensor<double> const& eta,
                                    Tensor<double> const& g)
{
    int const n = g.dim();
    Tensor<double> p2 = compose(phi, phi);
    double r = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            r = std::max(r, std::abs(p2(a, b) + (a == b ? 1.0 : 0.0) - zeta(a) * eta(b)));
            double gpp = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) gpp += g(k, l) * phi(k, a) * phi(l, b);
            r = std::max(r, std::abs(gpp - g(a, b) + eta(a) * eta(b)));
        }
    r = std::max(r, std::abs(pair(g, zeta, zeta) - 1.0));
    r = std::max(r, std::abs(evaluate(eta, zeta) - 1.0));
    return r;
}

/// max |g(AX,Y) + g(X,AY)| over coordinate vectors.
inline double skewness_defect(Tensor<double> const& a, Tensor<double> const& g)
{
    int const n = g.dim();
    double r = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += g(k, y) * a(k, x) + g(x, k) * a(k, y);
            r = std::max(r, std::abs(s));
        }
    return r;
}

// ---------------------------------------------------------------------------
// Lie-algebra projections
// ---------------------------------------------------------------------------

namespace detail {
inline void require_skew(Tensor<double> const& a, Tensor<double> const& g)
{
    double const scale = std::max(1.0, max_abs(a) * max_abs(g));
    double const d = skewness_defect(a, g);
    if (d > 1e-9 * scale) throw StructureError("endomorphism is not skew-adjoint", d);
}
}  // namespace detail

/// Projection of so(TM) onto 𝔪 = u(n)^⊥: ½(A + JAJ).
inline Tensor<double> proj_m_unitary(Tensor<double> const& a, Tensor<double> const& j, Tensor<double> const& g)
{
    detail::require_skew(a, g);
    return 0.5 * (a + compose(compose(j, a), j));
}

inline Tensor<double> proj_g_unitary(Tensor<double> const& a, Tensor<double> const& j, Tensor<double> const& g)
{
    return a - proj_m_unitary(a, j, g);
}

/// Projection onto 𝔪 for U(n)×1: ½(A + φAφ + (η∘A)⊗ζ + η⊗Aζ).
inline Tensor<double> proj_m_contact(Tensor<double> const& a, Tensor<double> const& phi, Tensor<double> const& eta,
                                     Tensor<double> const& zeta, Tensor<double> const& g)
{
    detail::require_skew(a, g);
    int const n = g.dim();
    Tensor<double> out = a + compose(compose(phi, a), phi);
    Tensor<double> const az = apply(a, zeta);
    for (int k = 0; k < n; ++k)
        for (int x = 0; x < n; ++x) {
            double eta_a = 0.0;
            for (int m = 0; m < n; ++m) eta_a += eta(m) * a(m, x);
            out(k, x) += zeta(k) * eta_a + az(k) * eta(x);
        }
    return 0.5 * out;
}

inline Tensor<double> proj_g_contact(Tensor<double> const& a, Tensor<double> const& phi, Tensor<double> const& eta,
                                     Tensor<double> const& zeta, Tensor<double> const& g)
{
    return a - proj_m_contact(a, phi, eta, zeta, g);
}

// ---------------------------------------------------------------------------
// Intrinsic torsion
// ---------------------------------------------------------------------------

struct TorsionPoint
{
    Tensor<Jet1> xi;  // (k, a, j) with first partials

    int dim() const { return xi.dim(); }
    Tensor<double> value() const { return values(xi); }

    /// The endomorphism ξ_X.
    Tensor<double> along(Tensor<double> const& x) const
    {
        int const n = dim();
        Tensor<double> out = Tensor<double>::endomorphism(n);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int a = 0; a < n; ++a) acc += x(a) * xi(k, a, j).value;
                out(k, j) = acc;
            }
        return out;
    }

    /// ξ_X Y
    Tensor<double> apply(Tensor<double> const& x, Tensor<double> const& y) const { return minig::apply(along(x), y); }
};

inline double torsion_difference(TorsionPoint const& a, TorsionPoint const& b)
{
    return max_abs_difference(a.value(), b.value());
}

namespace detail {
inline void require_hermitian(Tensor<double> const& j, Tensor<double> const& g)
{
    double const r = hermitian_compatibility(j, g);
    if (r > kStructureTolerance * std::max(1.0, max_abs(g))) throw StructureError("J is not a g-orthogonal complex structure", r);
}
inline void require_contact(Tensor<double> const& phi, Tensor<double> const& zeta, Tensor<double> const& eta, Tensor<double> const& g)
{
    double const r = contact_compatibility(phi, zeta, eta, g);
    if (r > kStructureTolerance * std::max(1.0, max_abs(g))) throw StructureError("(φ, ζ, η) is not an almost contact metric structure", r);
}
}  // namespace detail

/// ξ_X = -½ J(∇_X J), valid for any almost Hermitian structure.
inline TorsionPoint torsion_unitary_general(Tensor<Jet2> const& j, ConnectionPoint const& conn)
{
    detail::require_hermitian(values(j), conn.g());
    int const n = conn.dim();
    Tensor<Jet1> const nabla_j = covariant_derivative(j, conn);  // (a, k, m)
    Tensor<Jet1> const jv = value_jets(j);
    TorsionPoint t{Tensor<Jet1>(n, {Variance::up, Variance::down, Variance::down})};
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                Jet1 acc;
                for (int m = 0; m < n; ++m) acc += jv(k, m) * nabla_j(a, m, c);
                t.xi(k, a, c) = -0.5 * acc;
            }
    return t;
}

/// Closed form for Lee-form (W₄) structures:
/// ξ_X Y = -¼(θ(Y)X + θ(JY)JX - g(X,Y)θ♯ - g(X,JY)Jθ♯).
template <class S>
Tensor<S> torsion_w4_components(Tensor<S> const& theta, Tensor<S> const& j, Tensor<S> const& g, Tensor<S> const& g_inv)
{
    int const n = g.dim();
    Tensor<S> const th_sharp = sharp_with(theta, g_inv);
    Tensor<S> const j_th_sharp = apply(j, th_sharp);
    Tensor<S> theta_j = Tensor<S>::covector(n);
    Tensor<S> g_j = Tensor<S>::bilinear(n);
    for (int c = 0; c < n; ++c) {
        S acc{};
        for (int m = 0; m < n; ++m) acc += theta(m) * j(m, c);
        theta_j(c) = acc;
        for (int a = 0; a < n; ++a) {
            S gj{};
            for (int m = 0; m < n; ++m) gj += g(a, m) * j(m, c);
            g_j(a, c) = gj;
        }
    }
    Tensor<S> xi(n, {Variance::up, Variance::down, Variance::down});
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                S v = theta_j(c) * j(k, a) - g(a, c) * th_sharp(k) - g_j(a, c) * j_th_sharp(k);
                if (k == a) v += theta(c);
                xi(k, a, c) = -0.25 * v;
            }
    return xi;
}

inline TorsionPoint torsion_w4_closed(Tensor<Jet1> const& theta, Tensor<Jet1> const& j, Tensor<Jet1> const& g,
                                      Tensor<Jet1> const& g_inv)
{
    return TorsionPoint{torsion_w4_components(theta, j, g, g_inv)};
}

/// ξ_X Y = ½(∇_Xφ)φY + ½(∇_Xη)(Y) ζ - η(Y)∇_Xζ.
inline TorsionPoint torsion_contact_general(Tensor<Jet2> const& phi, Tensor<Jet2> const& eta, Tensor<Jet2> const& zeta,
                                            ConnectionPoint const& conn)
{
    detail::require_contact(values(phi), values(zeta), values(eta), conn.g());
    int const n = conn.dim();
    Tensor<Jet1> const nphi = covariant_derivative(phi, conn);    // (a, k, m)
    Tensor<Jet1> const neta = covariant_derivative(eta, conn);    // (a, j)
    Tensor<Jet1> const nzeta = covariant_derivative(zeta, conn);  // (a, k)
    Tensor<Jet1> const pv = value_jets(phi), ev = value_jets(eta), zv = value_jets(zeta);
    TorsionPoint t{Tensor<Jet1>(n, {Variance::up, Variance::down, Variance::down})};
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                Jet1 acc;
                for (int m = 0; m < n; ++m) acc += nphi(a, k, m) * pv(m, c);
                acc += neta(a, c) * zv(k);
                acc *= 0.5;
                acc -= ev(c) * nzeta(a, k);
                t.xi(k, a, c) = acc;
            }
    return t;
}

/// Closed form for α-Kenmotsu (C₅) structures: ξ_X Y = α(g(X,Y)ζ - η(Y)X).
template <class S>
Tensor<S> torsion_c5_components(S const& alpha, Tensor<S> const& eta, Tensor<S> const& zeta, Tensor<S> const& g)
{
    int const n = g.dim();
    Tensor<S> xi(n, {Variance::up, Variance::down, Variance::down});
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                S v = g(a, c) * zeta(k);
                if (k == a) v -= eta(c);
                xi(k, a, c) = alpha * v;
            }
    return xi;
}

inline TorsionPoint torsion_c5_closed(Jet1 const& alpha, Tensor<Jet1> const& eta, Tensor<Jet1> const& zeta,
                                      Tensor<Jet1> const& g)
{
    return TorsionPoint{torsion_c5_components(alpha, eta, zeta, g)};
}

/// max over X of the skewness and 𝔪-membership defects of ξ_X (U(n) case).
inline double torsion_membership_unitary(TorsionPoint const& t, Tensor<double> const& j, Tensor<double> const& g)
{
    double r = 0.0;
    for (int a = 0; a < t.dim(); ++a) {
        Tensor<double> const xa = t.along(basis_vector(t.dim(), a));
        r = std::max(r, skewness_defect(xa, g));
        r = std::max(r, max_abs_difference(0.5 * (xa + compose(compose(j, xa), j)), xa));
    }
    return r;
}

inline double torsion_membership_contact(TorsionPoint const& t, Tensor<double> const& phi, Tensor<double> const& eta,
                                         Tensor<double> const& zeta, Tensor<double> const& g)
{
    double r = 0.0;
    for (int a = 0; a < t.dim(); ++a) {
        Tensor<double> const xa = t.along(basis_vector(t.dim(), a));
        r = std::max(r, skewness_defect(xa, g));
        r = std::max(r, max_abs_difference(proj_m_contact(xa, phi, eta, zeta, g), xa));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Lee form
// ---------------------------------------------------------------------------

/// Ω(X,Y) = g(X,JY), to first order.
inline Tensor<Jet1> kaehler_form(Tensor<Jet1> const& g, Tensor<Jet1> const& j)
{
    int const n = g.dim();
    Tensor<Jet1> omega = Tensor<Jet1>::bilinear(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Jet1 acc;
            for (int m = 0; m < n; ++m) acc += g(a, m) * j(m, b);
            omega(a, b) = acc;
        }
    return omega;
}

inline Tensor<double> kaehler_form(Tensor<double> const& g, Tensor<double> const& j)
{
    return values(kaehler_form(lift(g), lift(j)));
}

struct LeeFormCheck
{
    double residual = 0.0;  // max |dΩ - θ∧Ω|
    bool pins_theta = true;  // false for n = 4, where dΩ = θ∧Ω does not determine θ uniquely from a 3-form count
};

inline LeeFormCheck verify_lee_form(Tensor<Jet1> const& omega, Tensor<double> const& theta)
{
    Tensor<double> const d_omega = exterior_derivative(omega);
    Tensor<double> const rhs = wedge_1_2(theta, values(omega));
    return {max_abs_difference(d_omega, rhs), omega.dim() >= 6};
}

// ---------------------------------------------------------------------------
// Deformed metric
// ---------------------------------------------------------------------------

struct DeformedMetricPoint
{
    Tensor<double> g_tilde;
    FrameBasis adapted_basis;  // g̃-orthonormal
    double prime_factor = 1.0;
    Tensor<double> g;
};

/// g̃(X,Y) = g(X,Y) + Σ_j g(ξ_X e_j, ξ_Y e_j) over a g-orthonormal basis.
inline Tensor<double> deformed_metric_values(TorsionPoint const& t, Tensor<double> const& g, FrameBasis const& basis)
{
    int const n = g.dim();
    std::vector<Tensor<double>> xi_e;  // ξ_{∂_a} e_j for all a, j
    for (int a = 0; a < n; ++a) {
        Tensor<double> const xa = t.along(basis_vector(n, a));
        for (auto const& e : basis.vectors) xi_e.push_back(apply(xa, e));
    }
    Tensor<double> gt = g;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double acc = 0.0;
            for (std::size_t j = 0; j < basis.size(); ++j)
                acc += pair(g, xi_e[static_cast<std::size_t>(a) * basis.size() + j], xi_e[static_cast<std::size_t>(b) * basis.size() + j]);
            gt(a, b) += acc;
            if (a != b) gt(b, a) += acc;
        }
    return gt;
}

/// The same sum written with g⁻¹, carried to first order so that g̃ has Christoffel symbols.
inline Tensor<Jet1> deformed_metric_jet(TorsionPoint const& t, Tensor<Jet1> const& g, Tensor<Jet1> const& g_inv)
{
    int const n = g.dim();
    // h(k, a, n') = g_{kl} ξ^l_{a n'}
    Tensor<Jet1> low(n, {Variance::down, Variance::down, Variance::down});
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                Jet1 acc;
                for (int l = 0; l < n; ++l) acc += g(k, l) * t.xi(l, a, c);
                low(k, a, c) = acc;
            }
    Tensor<Jet1> gt = g;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Jet1 acc;
            for (int m = 0; m < n; ++m)
                for (int c = 0; c < n; ++c) {
                    Jet1 inner;
                    for (int k = 0; k < n; ++k) inner += t.xi(k, a, m) * low(k, b, c);
                    acc += g_inv(m, c) * inner;
                }
            gt(a, b) += acc;
            if (a != b) gt(b, a) += acc;
        }
    return gt;
}

/// (1 + ¼|θ♯|²) g - ¼(θ⊗θ + (θ∘J)⊗(θ∘J))
template <class S>
Tensor<S> deformed_metric_w4(Tensor<S> const& theta, Tensor<S> const& j, Tensor<S> const& g, Tensor<S> const& g_inv)
{
    int const n = g.dim();
    Tensor<S> const th = sharp_with(theta, g_inv);
    S const norm2 = evaluate(theta, th);
    Tensor<S> theta_j = Tensor<S>::covector(n);
    for (int c = 0; c < n; ++c) {
        S acc{};
        for (int m = 0; m < n; ++m) acc += theta(m) * j(m, c);
        theta_j(c) = acc;
    }
    Tensor<S> out = Tensor<S>::bilinear(n);
    S const factor = 1.0 + 0.25 * norm2;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out(a, b) = factor * g(a, b) - 0.25 * (theta(a) * theta(b) + theta_j(a) * theta_j(b));
    return out;
}

/// (1 + 2α²) g - 2α² η⊗η
template <class S>
Tensor<S> deformed_metric_c5(S const& alpha, Tensor<S> const& eta, Tensor<S> const& g)
{
    int const n = g.dim();
    S const a2 = alpha * alpha;
    S const factor = 1.0 + 2.0 * a2;
    Tensor<S> out = Tensor<S>::bilinear(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out(a, b) = factor * g(a, b) - 2.0 * a2 * (eta(a) * eta(b));
    return out;
}

/// Builds g̃ from ξ and a g-orthonormal basis; the adapted g̃-orthonormal frame
/// is obtained by Gram–Schmidt on `preferred` followed by the coordinate vectors.
inline DeformedMetricPoint deformed_metric(TorsionPoint const& t, Tensor<double> const& g, FrameBasis const& basis,
                                           std::vector<Tensor<double>> preferred = {})
{
    if (FrameBasis{basis.vectors, g, basis.role}.orthonormality_defect() > 1e-8)
        throw TensorError("deformed_metric: basis is not g-orthonormal");
    DeformedMetricPoint d;
    d.g = g;
    d.g_tilde = deformed_metric_values(t, g, basis);
    for (int i = 0; i < g.dim(); ++i) preferred.push_back(basis_vector(g.dim(), i));
    d.adapted_basis = gram_schmidt_greedy(preferred, d.g_tilde, InnerProductRole::deformed_metric);

    // Largest eigenvalue of g⁻¹g̃, i.e. the stretch factor on D^⊥ (resp. E).
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(d.g_tilde), to_eigen(g), Eigen::EigenvaluesOnly);
    d.prime_factor = 1.0 / es.eigenvalues().maxCoeff();
    return d;
}

/// X' = Σ_j g(X, ẽ_j) ẽ_j
inline Tensor<double> prime_map(Tensor<double> const& x, DeformedMetricPoint const& d)
{
    Tensor<double> out = Tensor<double>::vector(x.dim());
    for (auto const& e : d.adapted_basis.vectors) out += pair(d.g, x, e) * e;
    return out;
}

// ---------------------------------------------------------------------------
// Ricci-type contractions
// ---------------------------------------------------------------------------

/// Ric(X) = Σ_j R(X, e_j) e_j over a g-orthonormal basis.
inline Tensor<double> ricci_via_basis(CurvaturePoint const& curv, FrameBasis const& basis, Tensor<double> const& x)
{
    Tensor<double> out = Tensor<double>::vector(curv.dim());
    for (auto const& e : basis.vectors) out += curv.apply(x, e, e);
    return out;
}

/// Ric*(X) = Σ_j R(X, J e_j) e_j
inline Tensor<double> ric_star(CurvaturePoint const& curv, Tensor<double> const& j, FrameBasis const& basis,
                               Tensor<double> const& x)
{
    Tensor<double> out = Tensor<double>::vector(curv.dim());
    for (auto const& e : basis.vectors) out += curv.apply(x, apply(j, e), e);
    return out;
}

/// 𝓡 = Ric(θ♯) - Ric*(Jθ♯)
inline Tensor<double> script_r(CurvaturePoint const& curv, Tensor<double> const& j, Tensor<double> const& theta_sharp,
                               FrameBasis const& basis)
{
    return ricci_via_basis(curv, basis, theta_sharp) - ric_star(curv, j, basis, apply(j, theta_sharp));
}

}  // namespace minig
