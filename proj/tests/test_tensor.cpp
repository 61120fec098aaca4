#include <minig/gstruct.hpp>
#include <minig/tensor.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace minig;

namespace {

Tensor<double> euclid(int n)
{
    Tensor<double> g = Tensor<double>::bilinear(n);
    for (int i = 0; i < n; ++i) g(i, i) = 1.0;
    return g;
}

Tensor<double> random_spd(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    Eigen::MatrixXd const s = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    Tensor<double> g = Tensor<double>::bilinear(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = s(i, j);
    return g;
}

Tensor<double> random_vector(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> normal;
    Tensor<double> v = Tensor<double>::vector(n);
    for (int i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

}  // namespace

TEST(Contract, IdentityTraceIsDimension)
{
    Tensor<double> const t = contract(Tensor<double>::identity(4), 0, 1);
    ASSERT_EQ(t.rank(), 0u);
    EXPECT_EQ(t[0], 4.0);
}

TEST(Contract, MetricWithInverseGivesIdentity)
{
    std::mt19937_64 rng(1);
    Tensor<double> const g = random_spd(rng, 5);
    Tensor<double> const gi = inverse_metric(g);
    Tensor<double> gu(5, {Variance::up, Variance::up});
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) gu(i, j) = gi(i, j);
    // (g ⊗ g⁻¹)_{ab}^{cd}, contract b with c
    Tensor<double> const id = contract(tensor_product(g, gu), 2, 1);
    EXPECT_LT(max_abs_difference(id, Tensor<double>::identity(5)), 1e-12);
    EXPECT_EQ(id.variance(), (std::vector<Variance>{Variance::down, Variance::up}));
}

TEST(Contract, SlotEvaluationOfThreeTensor)
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal;
    int const n = 4;
    Tensor<double> xi(n, {Variance::up, Variance::down, Variance::down});
    for (std::size_t i = 0; i < xi.size(); ++i) xi.data()[i] = normal(rng);
    Tensor<double> const x = random_vector(rng, n);
    Tensor<double> const c = contract(tensor_product(xi, x), 3, 1);
    TorsionPoint const tp{lift(xi)};
    EXPECT_LT(max_abs_difference(c, tp.along(x)), 1e-14);
}

TEST(Contract, RejectsBadSlots)
{
    Tensor<double> const g = Tensor<double>::bilinear(3);
    EXPECT_THROW(contract(g, 0, 1), TensorError);
    EXPECT_THROW(contract(Tensor<double>::identity(3), 0, 2), TensorError);
    EXPECT_THROW(contract(Tensor<double>::identity(3), 0, 0), TensorError);
}

TEST(RaiseLower, EuclideanIsIdentityOnComponents)
{
    std::mt19937_64 rng(3);
    Tensor<double> const v = random_vector(rng, 6);
    Tensor<double> const d = flat(v, euclid(6));
    for (int i = 0; i < 6; ++i) EXPECT_EQ(d(i), v(i));
}

TEST(RaiseLower, HyperbolicFlatOfFirstCoordinateField)
{
    // g = δ/(c² x1²) with c = 1 at x1 = 2
    Tensor<double> g = Tensor<double>::bilinear(3);
    for (int i = 0; i < 3; ++i) g(i, i) = 1.0 / (1.0 * 2.0 * 2.0);
    Tensor<double> const d = flat(basis_vector(3, 0), g);
    EXPECT_EQ(d.variance()[0], Variance::down);
    EXPECT_DOUBLE_EQ(d(0), 0.25);
    EXPECT_EQ(d(1), 0.0);
    EXPECT_EQ(d(2), 0.0);
}

TEST(RaiseLower, RoundTripOnRandomMetrics)
{
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        int const n = 2 + trial % 6;
        Tensor<double> const g = random_spd(rng, n);
        Tensor<double> const v = random_vector(rng, n);
        Tensor<double> const back = raise_lower(raise_lower(v, 0, g, Direction::down), 0, g, Direction::up);
        worst = std::max(worst, max_abs_difference(back, v));
        // slot 1 of an endomorphism, down then up
        std::normal_distribution<double> normal;
        Tensor<double> a = Tensor<double>::endomorphism(n);
        for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
        Tensor<double> const a2 = raise_lower(raise_lower(a, 1, g, Direction::up), 1, g, Direction::down);
        worst = std::max(worst, max_abs_difference(a2, a));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(RaiseLower, SingularMetricRejected)
{
    Tensor<double> g = Tensor<double>::bilinear(2);
    g(0, 0) = 1.0;
    g(1, 1) = 1e-14;
    EXPECT_THROW(raise_lower(basis_vector(2, 0), 0, g, Direction::down), TensorError);
}

TEST(GramSchmidt, StandardBasisUnderEuclideanIsItself)
{
    Tensor<double> const g = euclid(4);
    FrameBasis const b = coordinate_frame(g, InnerProductRole::metric);
    for (int j = 0; j < 4; ++j) EXPECT_EQ(max_abs_difference(b[static_cast<std::size_t>(j)], basis_vector(4, j)), 0.0);
}

TEST(GramSchmidt, OrthonormalForRandomInnerProducts)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int const n = 2 + trial % 8;
        Tensor<double> const g = random_spd(rng, n);
        std::vector<Tensor<double>> seeds;
        for (int i = 0; i < n; ++i) seeds.push_back(random_vector(rng, n));
        FrameBasis const b = gram_schmidt(seeds, g);
        EXPECT_LT(b.orthonormality_defect(), 1e-10);
        // span preserved: the k-th output lies in the span of the first k+1 seeds
        for (int k = 0; k < n; ++k) {
            Eigen::MatrixXd s(n, k + 1);
            for (int i = 0; i <= k; ++i)
                for (int r = 0; r < n; ++r) s(r, i) = seeds[static_cast<std::size_t>(i)](r);
            Eigen::VectorXd v(n);
            for (int r = 0; r < n; ++r) v(r) = b[static_cast<std::size_t>(k)](r);
            Eigen::VectorXd const coeff = s.colPivHouseholderQr().solve(v);
            EXPECT_LT((s * coeff - v).norm(), 1e-9 * v.norm());
        }
    }
}

TEST(GramSchmidt, RankDeficiencyRejected)
{
    Tensor<double> const g = euclid(3);
    std::vector<Tensor<double>> seeds{basis_vector(3, 0), basis_vector(3, 0), basis_vector(3, 2)};
    EXPECT_THROW(gram_schmidt(seeds, g), TensorError);
}

TEST(GramSchmidt, IndefiniteInnerProductRejected)
{
    Tensor<double> g = euclid(2);
    g(1, 1) = -1.0;
    std::vector<Tensor<double>> seeds{basis_vector(2, 0), basis_vector(2, 1)};
    EXPECT_THROW(gram_schmidt(seeds, g), TensorError);
}

// The deformed metric of the hyperbolic example, (1+2α²)g - 2α²η⊗η, seeded
// with ζ first, gives ẽ_1 = ζ and ẽ_j = e_j/√(1+2α²) on E.
TEST(GramSchmidt, AdaptedBasisOfHyperbolicDeformedMetric)
{
    int const n = 5;
    double const c = 1.0, x1 = 1.3, alpha = -c;
    double const s = 1.0 / (c * c * x1 * x1);
    Tensor<double> g = Tensor<double>::bilinear(n);
    for (int i = 0; i < n; ++i) g(i, i) = s;
    Tensor<double> eta = Tensor<double>::covector(n);
    eta(0) = 1.0 / (c * x1);
    Tensor<double> const gt = deformed_metric_c5(alpha, eta, g);
    Tensor<double> zeta = Tensor<double>::vector(n);
    zeta(0) = c * x1;
    std::vector<Tensor<double>> seeds{zeta};
    for (int i = 0; i < n; ++i) seeds.push_back(basis_vector(n, i));
    FrameBasis const b = gram_schmidt_greedy(seeds, gt);
    ASSERT_EQ(b.size(), 5u);
    EXPECT_LT(b.orthonormality_defect(), 1e-12);
    EXPECT_LT(max_abs_difference(b[0], zeta), 1e-14);
    for (int j = 1; j < n; ++j) {
        Tensor<double> expected = basis_vector(n, j) * (c * x1 / std::sqrt(1.0 + 2.0 * alpha * alpha));
        EXPECT_LT(max_abs_difference(b[static_cast<std::size_t>(j)], expected), 1e-14);
    }
}

TEST(TensorShape, ComponentCountAndVariance)
{
    Tensor<double> const t(3, {Variance::up, Variance::down, Variance::down, Variance::down});
    EXPECT_EQ(t.size(), 81u);
    EXPECT_THROW(Tensor<double>::vector(3) + Tensor<double>::covector(3), TensorError);
    EXPECT_THROW(Tensor<double>::vector(3) + Tensor<double>::vector(4), TensorError);
}
