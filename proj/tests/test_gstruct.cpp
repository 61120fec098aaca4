#include "oracles.hpp"

#include <minig/conditions.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace minig;

namespace {

struct Sampled
{
    ManifoldSpec spec;
    std::vector<GStructureFrame> frames;
};

Sampled sampled(ManifoldSpec spec, int count = 4, std::uint64_t seed = 11)
{
    Sampled s{std::move(spec), {}};
    for (auto const& p : sample_points(s.spec, count, seed)) s.frames.push_back(build_frame(s.spec, p));
    return s;
}

std::vector<ManifoldSpec> hermitian_examples()
{
    return {build_flat_kaehler(4), build_conformal_euclidean(4, "x1^2 + x2"), build_conformal_euclidean(6, "x1*x3"),
            build_conformal_euclidean(4, "sin(x1) + x2*x4"), build_hopf_cover(4), build_hopf_cover(6)};
}

std::vector<ManifoldSpec> c5_examples()
{
    return {build_hyperbolic_kenmotsu(5, 1.0), build_hyperbolic_kenmotsu(3, 2.0), build_hyperbolic_kenmotsu(7, 0.5),
            build_warped_kenmotsu()};
}

std::vector<ManifoldSpec> all_examples()
{
    std::vector<ManifoldSpec> out = hermitian_examples();
    for (auto& m : c5_examples()) out.push_back(std::move(m));
    out.push_back(product_with_line(build_hopf_cover(4)));
    return out;
}

Tensor<double> random_vector(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> normal;
    Tensor<double> v = Tensor<double>::vector(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

Tensor<double> random_skew(std::mt19937_64& rng, Tensor<double> const& g)
{
    // A = B g with B antisymmetric is g-skew
    int const n = g.dim();
    std::normal_distribution<double> normal;
    Tensor<double> b = Tensor<double>::endomorphism(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            b(i, j) = normal(rng);
            b(j, i) = -b(i, j);
        }
    Tensor<double> a = Tensor<double>::endomorphism(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) a(i, j) += b(i, m) * g(m, j);
    return a;
}

double trace_pairing(Tensor<double> const& a, Tensor<double> const& b)
{
    double acc = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) acc += a(i, j) * b(j, i);
    return acc;
}

Tensor<Jet2> fundamental_form(Tensor<Jet2> const& g, Tensor<Jet2> const& phi)
{
    // Φ(X,Y) = g(X, φY)
    int const n = g.dim();
    Tensor<Jet2> out(n, {Variance::down, Variance::down});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Jet2 acc(n);
            for (int c = 0; c < n; ++c) acc = acc + g(a, c) * phi(c, b);
            out(a, b) = acc;
        }
    return out;
}

double pair2(Tensor<double> const& form, Tensor<double> const& x, Tensor<double> const& y) { return pair(form, x, y); }

}  // namespace

TEST(Projections, UnitaryDecomposition)
{
    std::mt19937_64 rng(1);
    for (auto const& s : {sampled(build_hopf_cover(6)), sampled(build_conformal_euclidean(4, "x1^2 + x2"))}) {
        for (auto const& f : s.frames) {
            Tensor<double> const a = random_skew(rng, f.g), b = random_skew(rng, f.g);
            Tensor<double> const pm = proj_m_unitary(a, f.j, f.g), pg = proj_g_unitary(a, f.j, f.g);
            double const scale = max_abs(a);
            EXPECT_LT(max_abs_difference(pm + pg, a), 1e-14 * scale);
            // 𝔪 anticommutes with J, u(n) commutes
            EXPECT_LT(max_abs(compose(pm, f.j) + compose(f.j, pm)), 1e-12 * scale);
            EXPECT_LT(max_abs(compose(pg, f.j) - compose(f.j, pg)), 1e-12 * scale);
            EXPECT_LT(max_abs_difference(proj_m_unitary(pm, f.j, f.g), pm), 1e-12 * scale);
            // orthogonal for the Killing-type pairing tr(AB)
            Tensor<double> const qg = proj_g_unitary(b, f.j, f.g);
            EXPECT_NEAR(trace_pairing(pm, qg), 0.0, 1e-10 * scale * max_abs(b));
        }
    }
}

TEST(Projections, ContactDecomposition)
{
    std::mt19937_64 rng(2);
    for (auto const& m : c5_examples()) {
        for (auto const& f : sampled(m).frames) {
            Tensor<double> const a = random_skew(rng, f.g);
            Tensor<double> const pm = proj_m_contact(a, f.phi, f.eta, f.zeta, f.g);
            Tensor<double> const pg = proj_g_contact(a, f.phi, f.eta, f.zeta, f.g);
            double const scale = max_abs(a) * std::max(1.0, max_abs(f.g));
            EXPECT_LT(max_abs_difference(pm + pg, a), 1e-14 * scale);
            // u(n)×1 commutes with φ and annihilates ζ
            EXPECT_LT(max_abs(compose(pg, f.phi) - compose(f.phi, pg)), 1e-10 * scale) << m.name;
            EXPECT_LT(max_abs(apply(pg, f.zeta)), 1e-10 * scale) << m.name;
            EXPECT_LT(max_abs_difference(proj_m_contact(pm, f.phi, f.eta, f.zeta, f.g), pm), 1e-10 * scale) << m.name;
            EXPECT_LT(max_abs(proj_m_contact(pg, f.phi, f.eta, f.zeta, f.g)), 1e-10 * scale) << m.name;
        }
    }
}

TEST(Projections, RejectNonSkewInput)
{
    auto const s = sampled(build_hopf_cover(4), 1);
    auto const& f = s.frames[0];
    EXPECT_THROW(proj_m_unitary(Tensor<double>::identity(4), f.j, f.g), StructureError);
}

TEST(Torsion, LiesInComplementAndMatchesDifferences)
{
    for (auto const& m : all_examples()) {
        for (auto const& f : sampled(m, 3).frames) {
            StructureReport const r = structure_report(m, f);
            EXPECT_LT(r.compatibility, 1e-12) << m.name;
            EXPECT_LT(r.membership, 1e-10) << m.name;
            std::vector<oracle::Mat> const fd = oracle::torsion(m, f.point);
            Tensor<double> const xi = f.xi.value();
            double const scale = std::max(1.0, max_abs(xi));
            for (int a = 0; a < m.dim; ++a)
                for (int k = 0; k < m.dim; ++k)
                    for (int j = 0; j < m.dim; ++j)
                        EXPECT_NEAR(xi(k, a, j), fd[static_cast<std::size_t>(a)](k, j), 1e-7 * scale) << m.name;
        }
    }
}

TEST(Torsion, TwoRoutesAgree)
{
    for (auto const& m : all_examples()) {
        if (m.declared_class == TorsionClass::c4) continue;
        for (auto const& f : sampled(m, 3).frames) {
            StructureReport const r = structure_report(m, f);
            EXPECT_LT(r.two_route, 1e-10 * std::max(1.0, max_abs(f.xi.value()))) << m.name;
            if (f.hermitian) EXPECT_LT(r.lee_form, 1e-10) << m.name;
        }
    }
}

TEST(Torsion, KaehlerTorsionVanishes)
{
    for (auto const& f : sampled(build_flat_kaehler(6)).frames) EXPECT_EQ(max_abs(f.xi.value()), 0.0);
    for (auto const& f : sampled(build_conformal_euclidean(4, "0")).frames) EXPECT_EQ(max_abs(f.xi.value()), 0.0);
}

// (∇_X J)Y = ½(θ(JY)X - θ(Y)JX - g(X,JY)θ♯ + g(X,Y)Jθ♯)
TEST(Hermitian, CovariantDerivativeOfJ)
{
    std::mt19937_64 rng(3);
    for (auto const& m : hermitian_examples()) {
        for (auto const& f : sampled(m).frames) {
            int const n = f.dim();
            Tensor<double> const nj = values(covariant_derivative(f.j2, f.conn));
            Tensor<double> const x = random_vector(rng, n), y = random_vector(rng, n);
            Tensor<double> const lhs = apply(derivative_along(nj, x), y);
            Tensor<double> const jx = apply(f.j, x), jy = apply(f.j, y);
            Tensor<double> const rhs = 0.5 * (evaluate(f.theta, jy) * x - evaluate(f.theta, y) * jx -
                                              pair(f.g, x, jy) * f.theta_sharp + pair(f.g, x, y) * f.j_theta_sharp);
            EXPECT_LT(max_abs_difference(lhs, rhs), 1e-10 * std::max(1.0, max_abs(rhs))) << m.name;
        }
    }
}

TEST(Hermitian, LeeFormOfConformalFlatIsMinusTwoDf)
{
    std::string const text = "x1^2 + x2*sin(x3)";
    ManifoldSpec const m = build_conformal_euclidean(4, text);
    for (auto const& f : sampled(m).frames) {
        Jet2 const fj = eval_jet2(parse_expr(text, 4), f.point);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(f.theta(i), -2.0 * fj.grad(i), 1e-14);
    }
}

TEST(Hermitian, HopfLeeFormIsParallelWithNormFour)
{
    for (int n : {4, 6}) {
        for (auto const& f : sampled(build_hopf_cover(n)).frames) {
            EXPECT_LT(max_abs(nabla_theta(f)), 1e-12);
            EXPECT_NEAR(f.theta_norm2, 4.0, 1e-12);
        }
    }
}

TEST(DeformedMetric, MatchesClosedForms)
{
    for (auto const& m : all_examples()) {
        for (auto const& f : sampled(m, 3).frames) {
            Tensor<double> closed;
            if (f.hermitian) closed = deformed_metric_w4(f.theta, f.j, f.g, f.g_inv);
            else if (f.alpha) closed = deformed_metric_c5(f.alpha->value(), f.eta, f.g);
            else continue;
            EXPECT_LT(max_abs_difference(f.tilde.g_tilde, closed), 1e-10 * std::max(1.0, max_abs(closed))) << m.name;
        }
    }
}

TEST(DeformedMetric, IndependentOfOrthonormalBasis)
{
    std::mt19937_64 rng(4);
    for (auto const& m : all_examples()) {
        for (auto const& f : sampled(m, 2).frames) {
            std::vector<Tensor<double>> seeds;
            for (int i = 0; i < f.dim(); ++i) seeds.push_back(random_vector(rng, f.dim()));
            FrameBasis const other = gram_schmidt(seeds, f.g);
            Tensor<double> const gt = deformed_metric_values(f.xi, f.g, other);
            EXPECT_LT(max_abs_difference(gt, f.tilde.g_tilde), 1e-10 * std::max(1.0, max_abs(gt))) << m.name;
        }
    }
}

TEST(DeformedMetric, JetAgreesWithValues)
{
    for (auto const& m : all_examples()) {
        for (auto const& f : sampled(m, 2).frames) {
            Tensor<double> const gt = values(deformed_metric_jet(f.xi, f.conn.metric, f.conn.metric_inv));
            EXPECT_LT(max_abs_difference(gt, f.tilde.g_tilde), 1e-10 * std::max(1.0, max_abs(gt))) << m.name;
        }
    }
}

TEST(DeformedMetric, AdaptedBasisIsOrthonormal)
{
    for (auto const& m : all_examples())
        for (auto const& f : sampled(m, 2).frames) {
            EXPECT_EQ(f.tilde.adapted_basis.size(), static_cast<std::size_t>(f.dim()));
            EXPECT_LT(f.tilde.adapted_basis.orthonormality_defect(), 1e-10) << m.name;
        }
}

TEST(PrimeMap, HermitianProperties)
{
    std::mt19937_64 rng(5);
    for (auto const& m : hermitian_examples()) {
        for (auto const& f : sampled(m).frames) {
            int const n = f.dim();
            double const k = 1.0 / (1.0 + 0.25 * f.theta_norm2);
            Tensor<double> const x = random_vector(rng, n), y = random_vector(rng, n);
            Tensor<double> const xp = prime_map(x, f.tilde);
            Tensor<double> const expected =
                k * (x + 0.25 * (pair(f.g, x, f.theta_sharp) * f.theta_sharp + pair(f.g, x, f.j_theta_sharp) * f.j_theta_sharp));
            double const scale = std::max(1.0, max_abs(x));
            EXPECT_LT(max_abs_difference(xp, expected), 1e-10 * scale) << m.name;
            EXPECT_LT(max_abs_difference(prime_map(apply(f.j, x), f.tilde), apply(f.j, xp)), 1e-10 * scale) << m.name;
            EXPECT_NEAR(evaluate(f.theta, xp), evaluate(f.theta, x), 1e-10 * scale * std::max(1.0, max_abs(f.theta)));
            EXPECT_NEAR(pair(f.g, xp, y), pair(f.g, x, prime_map(y, f.tilde)), 1e-10 * scale * max_abs(y));
            // g̃(X', Y) = g(X, Y)
            EXPECT_NEAR(pair(f.tilde.g_tilde, xp, y), pair(f.g, x, y), 1e-10 * scale * max_abs(y) * std::max(1.0, max_abs(f.g)));
            // on D the map is the identity
            EXPECT_LT(max_abs_difference(prime_map(f.theta_sharp, f.tilde), f.theta_sharp), 1e-10 * std::max(1.0, max_abs(f.theta_sharp)));
        }
    }
}

TEST(PrimeMap, ContactFormula)
{
    std::mt19937_64 rng(6);
    for (auto const& m : c5_examples()) {
        for (auto const& f : sampled(m).frames) {
            double const a2 = f.alpha->value() * f.alpha->value();
            Tensor<double> const x = random_vector(rng, f.dim());
            Tensor<double> const expected = (1.0 / (1.0 + 2 * a2)) * x + (2 * a2 / (1.0 + 2 * a2)) * evaluate(f.eta, x) * f.zeta;
            EXPECT_LT(max_abs_difference(prime_map(x, f.tilde), expected), 1e-10 * std::max(1.0, max_abs(x))) << m.name;
            EXPECT_LT(max_abs_difference(prime_map(f.zeta, f.tilde), f.zeta), 1e-10 * std::max(1.0, max_abs(f.zeta)));
        }
    }
}

TEST(PrimeMap, ScaleFactorIsSmallestStretch)
{
    for (auto const& f : sampled(build_hopf_cover(4)).frames) EXPECT_NEAR(f.tilde.prime_factor, 0.5, 1e-12);
    for (auto const& f : sampled(build_hyperbolic_kenmotsu(5, 1.0)).frames) EXPECT_NEAR(f.tilde.prime_factor, 1.0 / 3.0, 1e-12);
}

// Σ_j R_{ξ_{ẽ_j}}(ẽ_j) = -½ (1+¼|θ♯|²)⁻¹ (Ric(θ♯) - Ric*(Jθ♯)) for LcK structures
TEST(CurvatureTorsion, LckSumOverDeformedBasis)
{
    for (auto const& m : hermitian_examples()) {
        for (auto const& f : sampled(m).frames) {
            Tensor<double> const lhs = curvature_torsion_sum(f, f.tilde.adapted_basis);
            Tensor<double> const rhs = (-0.5 * lck_factor(f)) * script_r(f);
            EXPECT_LT(frame_norm_vector(lhs - rhs, f), 1e-8 * std::max(1.0, frame_norm_vector(rhs, f))) << m.name;
        }
    }
}

// With ξ_X Y = α(g(X,Y)ζ - η(Y)X), R_{ξ_X}X = αR(X,ζ)X - αR(ζ,X)X = -2αR(ζ,X)X,
// so the sum over the g̃-basis is -2α/(1+2α²) Ric(ζ).
TEST(CurvatureTorsion, AlphaKenmotsuSumOverDeformedBasis)
{
    for (auto const& m : c5_examples()) {
        for (auto const& f : sampled(m).frames) {
            double const a = f.alpha->value();
            Tensor<double> const lhs = curvature_torsion_sum(f, f.tilde.adapted_basis);
            Tensor<double> const rhs = (-2 * a / (1 + 2 * a * a)) * f.curv.ricci_operator(f.zeta);
            EXPECT_LT(frame_norm_vector(lhs - rhs, f), 1e-9 * std::max(1.0, frame_norm_vector(rhs, f))) << m.name;
        }
    }
}

TEST(CurvatureTorsion, HyperbolicValues)
{
    // Ric(ζ) = -(n-1)c²ζ; over the g-basis the sum is -2αRic(ζ) = -2(n-1)c³ζ
    for (double c : {0.5, 1.0, 2.0}) {
        for (auto const& f : sampled(build_hyperbolic_kenmotsu(5, c)).frames) {
            Tensor<double> const ric = f.curv.ricci_operator(f.zeta);
            EXPECT_LT(max_abs_difference(ric, (-4.0 * c * c) * f.zeta), 1e-10 * c * c * max_abs(f.zeta));
            EXPECT_NEAR(harmonic_map_residual(f), 8.0 * c * c * c, 1e-9 * c * c * c);
            Tensor<double> const tilde = curvature_torsion_sum(f, f.tilde.adapted_basis);
            EXPECT_NEAR(frame_norm_vector(tilde, f), 8.0 * c * c * c / (1 + 2 * c * c), 1e-9 * c * c * c);
        }
    }
}

// (∇_Xφ)Y = -α(Φ(X,Y)ζ + η(Y)φX), ∇_Xζ = α pr X, (∇_Xη)Y = α(g(X,Y) - η(X)η(Y))
TEST(Contact, AlphaKenmotsuDerivatives)
{
    std::mt19937_64 rng(7);
    for (auto const& m : c5_examples()) {
        for (auto const& f : sampled(m).frames) {
            int const n = f.dim();
            double const a = f.alpha->value();
            Tensor<double> const phi_form = values(fundamental_form(m.metric.evaluate(f.point, m.params), f.phi2));
            Tensor<double> const nphi = values(covariant_derivative(f.phi2, f.conn));
            Tensor<double> const nzeta = values(covariant_derivative(f.zeta2, f.conn));
            Tensor<double> const neta = values(covariant_derivative(f.eta2, f.conn));
            Tensor<double> const x = random_vector(rng, n), y = random_vector(rng, n);
            double const scale = std::max(1.0, max_abs(x) * max_abs(y) * max_abs(f.g));

            Tensor<double> const lhs_phi = apply(derivative_along(nphi, x), y);
            Tensor<double> const rhs_phi = -a * (pair2(phi_form, x, y) * f.zeta + evaluate(f.eta, y) * apply(f.phi, x));
            EXPECT_LT(max_abs_difference(lhs_phi, rhs_phi), 1e-10 * scale) << m.name;

            Tensor<double> const prx = x - evaluate(f.eta, x) * f.zeta;
            EXPECT_LT(max_abs_difference(derivative_along(nzeta, x), a * prx), 1e-10 * scale) << m.name;

            double const rhs_eta = a * (pair(f.g, x, y) - evaluate(f.eta, x) * evaluate(f.eta, y));
            EXPECT_NEAR(evaluate(derivative_along(neta, x), y), rhs_eta, 1e-10 * scale) << m.name;
        }
    }
}

// (∇_XΦ)(Y,Z) = -α(Φ(X,Z)η(Y) - Φ(X,Y)η(Z)), together with the general identities
// (∇_Xη)Y = g(Y,∇_Xζ) = (∇_XΦ)(ζ,φY) and (∇_XΦ)(Y,Z) = g(Y,(∇_Xφ)Z).
TEST(Contact, FundamentalFormIdentities)
{
    std::mt19937_64 rng(8);
    for (auto const& m : c5_examples()) {
        for (auto const& f : sampled(m).frames) {
            int const n = f.dim();
            double const a = f.alpha->value();
            Tensor<Jet2> const form2 = fundamental_form(m.metric.evaluate(f.point, m.params), f.phi2);
            Tensor<double> const form = values(form2);
            Tensor<double> const nform = values(covariant_derivative(form2, f.conn));
            Tensor<double> const nphi = values(covariant_derivative(f.phi2, f.conn));
            Tensor<double> const nzeta = values(covariant_derivative(f.zeta2, f.conn));
            Tensor<double> const neta = values(covariant_derivative(f.eta2, f.conn));
            Tensor<double> const x = random_vector(rng, n), y = random_vector(rng, n), z = random_vector(rng, n);
            double const scale = std::max(1.0, max_abs(x) * max_abs(y) * max_abs(z) * max_abs(f.g));

            Tensor<double> const nx = derivative_along(nform, x);
            EXPECT_NEAR(pair(nx, y, z), -a * (pair(form, x, z) * evaluate(f.eta, y) - pair(form, x, y) * evaluate(f.eta, z)),
                        1e-10 * scale) << m.name;
            EXPECT_NEAR(pair(nx, y, z), pair(f.g, y, apply(derivative_along(nphi, x), z)), 1e-10 * scale) << m.name;
            double const ney = evaluate(derivative_along(neta, x), y);
            EXPECT_NEAR(ney, pair(f.g, y, derivative_along(nzeta, x)), 1e-10 * scale) << m.name;
            EXPECT_NEAR(ney, pair(nx, f.zeta, apply(f.phi, y)), 1e-10 * scale) << m.name;
        }
    }
}

TEST(Contact, C5TorsionFormula)
{
    std::mt19937_64 rng(9);
    for (auto const& m : c5_examples()) {
        for (auto const& f : sampled(m).frames) {
            double const a = f.alpha->value();
            Tensor<double> const x = random_vector(rng, f.dim()), y = random_vector(rng, f.dim());
            Tensor<double> const expected = a * (pair(f.g, x, y) * f.zeta - evaluate(f.eta, y) * x);
            EXPECT_LT(max_abs_difference(f.xi.apply(x, y), expected), 1e-10 * std::max(1.0, max_abs(expected))) << m.name;
            EXPECT_LT(max_abs(f.xi.along(f.zeta)), 1e-12 * std::max(1.0, std::abs(a)));
            Tensor<double> const prx = x - evaluate(f.eta, x) * f.zeta;
            EXPECT_LT(max_abs_difference(f.xi.apply(x, f.zeta), -a * prx), 1e-10 * std::max(1.0, max_abs(x))) << m.name;
        }
    }
}

// div'J = Σ_j (∇_{ẽ_j}J)ẽ_j = (2n-2)/(2(1+¼|θ♯|²)) Jθ♯ in real dimension 2n
TEST(Hermitian, DeformedDivergenceOfJ)
{
    for (auto const& m : hermitian_examples()) {
        for (auto const& f : sampled(m).frames) {
            int const n = f.dim();
            Tensor<double> const nj = values(covariant_derivative(f.j2, f.conn));
            Tensor<double> div = Tensor<double>::vector(n);
            for (auto const& v : f.tilde.adapted_basis.vectors) div += apply(derivative_along(nj, v), v);
            Tensor<double> const expected = ((n - 2) / 2.0 * lck_factor(f)) * f.j_theta_sharp;
            EXPECT_LT(max_abs_difference(div, expected), 1e-10 * std::max(1.0, max_abs(expected))) << m.name;
        }
    }
}

// The tension of the section into SO(M) is normal to the fibres:
//   g(τ_h, X) = -tr(τ_v ∘ ξ_X)   for all X,
// where τ_v = ξ_{ΣS_{ẽ}ẽ} - Σ(∇_{ẽ}ξ)_{ẽ} and τ_h = -(ΣS_{ẽ}ẽ + ΣR_{ξ_{ẽ}}ẽ).
// This holds only for the curvature sign R(X,Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_{[X,Y]}.
TEST(Tension, HorizontalPartIsFixedByVerticalPart)
{
    for (auto const& m : all_examples()) {
        for (auto const& f : sampled(m, 3).frames) {
            int const n = f.dim();
            Tensor<double> const s = difference_tensor(f);
            FrameBasis const& tb = f.tilde.adapted_basis;
            Tensor<double> trace_s = Tensor<double>::vector(n);
            for (auto const& v : tb.vectors) trace_s += apply_difference(s, v, v);
            Tensor<double> const tv = f.xi.along(trace_s) - torsion_divergence(f, tb);
            Tensor<double> const th = -1.0 * (trace_s + curvature_torsion_sum(f, tb));
            double worst = 0.0, scale = 1.0;
            for (auto const& x : f.e.vectors) {
                double const rhs = -trace_pairing(tv, f.xi.along(x));
                worst = std::max(worst, std::abs(pair(f.g, th, x) - rhs));
                scale = std::max(scale, std::abs(rhs));
            }
            EXPECT_LT(worst, 1e-9 * scale) << m.name;
        }
    }
}

// Both parts of the harmonic-map system for σ:(M,g̃)→N vanish exactly on the
// minimal examples and not elsewhere.
TEST(Tension, HarmonicMapSystemHoldsIffMinimal)
{
    std::vector<ManifoldSpec> minimal{build_hopf_cover(4), build_hyperbolic_kenmotsu(5, 1.0), product_with_line(build_hopf_cover(4)),
                                      build_conformal_euclidean(4, "x1^2 + x2"), build_conformal_euclidean(4, "sin(x1) + x2*x4")};
    for (auto const& m : minimal)
        for (auto const& f : sampled(m, 3).frames) {
            HarmonicMapIdentities const h = harmonic_map_identities(f);
            EXPECT_LT(h.torsion_part, 1e-10) << m.name;
            EXPECT_LT(h.curvature_part, 1e-10) << m.name;
        }
    for (auto const& m : {build_conformal_euclidean(6, "x1*x3"), build_warped_kenmotsu()})
        for (auto const& f : sampled(m, 3).frames) {
            HarmonicMapIdentities const h = harmonic_map_identities(f);
            EXPECT_GT(h.torsion_part, 1e-2) << m.name;
            EXPECT_GT(h.curvature_part, 1e-2) << m.name;
        }
}
