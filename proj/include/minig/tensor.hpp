#pragma once

// Dense pointwise tensors in a coordinate basis.
//
// Components are stored row-major; slot 0 varies slowest. A (1,1)-tensor
// T(k, j) is the endomorphism with T(∂_j) = T^k_j ∂_k.

#include <minig/jet.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

namespace minig {

enum class Variance : std::uint8_t { up, down };

class TensorError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

template <class S = double>
class Tensor
{
  public:
    using scalar_type = S;

    Tensor() = default;
    Tensor(int dim, std::vector<Variance> variance) : dim_(dim), variance_(std::move(variance))
    {
        if (dim < 1 || dim > kMaxDim) throw TensorError("tensor dimension out of range: " + std::to_string(dim));
        std::size_t size = 1;
        for (std::size_t i = 0; i < variance_.size(); ++i) size *= static_cast<std::size_t>(dim);
        data_.assign(size, S{});
    }

    static Tensor scalar(S v)
    {
        Tensor t(1, {});
        t.data_[0] = std::move(v);
        return t;
    }
    static Tensor vector(int n) { return Tensor(n, {Variance::up}); }
    static Tensor covector(int n) { return Tensor(n, {Variance::down}); }
    static Tensor endomorphism(int n) { return Tensor(n, {Variance::up, Variance::down}); }
    static Tensor bilinear(int n) { return Tensor(n, {Variance::down, Variance::down}); }
    static Tensor identity(int n)
    {
        Tensor t = endomorphism(n);
        for (int i = 0; i < n; ++i) t(i, i) = S{1.0};
        return t;
    }

    int dim() const { return dim_; }
    std::size_t rank() const { return variance_.size(); }
    std::vector<Variance> const& variance() const { return variance_; }
    std::size_t size() const { return data_.size(); }

    std::vector<S>& data() { return data_; }
    std::vector<S> const& data() const { return data_; }
    S& operator[](std::size_t flat) { return data_[flat]; }
    S const& operator[](std::size_t flat) const { return data_[flat]; }

    template <class... I>
    S& operator()(I... idx)
    {
        return data_[offset(idx...)];
    }
    template <class... I>
    S const& operator()(I... idx) const
    {
        return data_[offset(idx...)];
    }

    S& at(std::span<int const> idx) { return data_[offset_span(idx)]; }
    S const& at(std::span<int const> idx) const { return data_[offset_span(idx)]; }

    Tensor& operator+=(Tensor const& o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Tensor& operator-=(Tensor const& o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Tensor& operator*=(double s)
    {
        for (auto& c : data_) c *= s;
        return *this;
    }
    friend Tensor operator+(Tensor a, Tensor const& b) { return a += b; }
    friend Tensor operator-(Tensor a, Tensor const& b) { return a -= b; }
    friend Tensor operator*(Tensor a, double s) { return a *= s; }
    friend Tensor operator*(double s, Tensor a) { return a *= s; }

  private:
    template <class... I>
    std::size_t offset(I... idx) const
    {
        std::size_t off = 0;
        ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
        return off;
    }
    std::size_t offset_span(std::span<int const> idx) const
    {
        std::size_t off = 0;
        for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return off;
    }
    void check_same_shape(Tensor const& o) const
    {
        if (o.dim_ != dim_ || o.variance_ != variance_) throw TensorError("tensor shape mismatch");
    }

    int dim_ = 1;
    std::vector<Variance> variance_;
    std::vector<S> data_{S{}};
};

// ---------------------------------------------------------------------------
// Component-wise helpers
// ---------------------------------------------------------------------------

template <class To, class From, class F>
Tensor<To> map_components(Tensor<From> const& t, F&& f)
{
    Tensor<To> out(t.dim(), t.variance());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = f(t[i]);
    return out;
}

/// Primal values of a jet-valued tensor.
template <class S>
Tensor<double> values(Tensor<S> const& t)
{
    return map_components<double>(t, [](S const& s) { return value_of(s); });
}

inline Tensor<Jet1> value_jets(Tensor<Jet2> const& t)
{
    return map_components<Jet1>(t, [](Jet2 const& s) { return s.value_jet(); });
}

/// ∂_a of every component, keeping one further derivative order.
inline Tensor<Jet1> partial_jets(Tensor<Jet2> const& t, int a)
{
    return map_components<Jet1>(t, [a](Jet2 const& s) { return s.partial_jet(a); });
}

inline Tensor<double> partials(Tensor<Jet1> const& t, int a)
{
    return map_components<double>(t, [a](Jet1 const& s) { return s.grad[static_cast<std::size_t>(a)]; });
}

inline Tensor<Jet1> lift(Tensor<double> const& t)
{
    return map_components<Jet1>(t, [](double s) { return Jet1{s}; });
}

template <class S>
double max_abs(Tensor<S> const& t)
{
    double m = 0.0;
    for (auto const& c : t.data()) m = std::max(m, std::abs(value_of(c)));
    return m;
}

inline double max_abs_difference(Tensor<double> const& a, Tensor<double> const& b)
{
    if (a.size() != b.size()) throw TensorError("tensor shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

/// Trace over an (up, down) slot pair.
template <class S>
Tensor<S> contract(Tensor<S> const& t, std::size_t slot_up, std::size_t slot_down)
{
    std::size_t const r = t.rank();
    if (slot_up >= r || slot_down >= r || slot_up == slot_down) throw TensorError("contraction slot out of range");
    if (t.variance()[slot_up] != Variance::up || t.variance()[slot_down] != Variance::down)
        throw TensorError("contraction requires one up and one down slot");

    std::vector<Variance> var;
    for (std::size_t s = 0; s < r; ++s)
        if (s != slot_up && s != slot_down) var.push_back(t.variance()[s]);

    int const n = t.dim();
    Tensor<S> out = var.empty() ? Tensor<S>::scalar(S{}) : Tensor<S>(n, var);
    std::vector<int> idx(r, 0), oidx(var.size(), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t rem = flat;
        for (std::size_t s = oidx.size(); s-- > 0;) {
            oidx[s] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        for (std::size_t s = 0, o = 0; s < r; ++s)
            if (s != slot_up && s != slot_down) idx[s] = oidx[o++];
        S acc{};
        for (int k = 0; k < n; ++k) {
            idx[slot_up] = k;
            idx[slot_down] = k;
            acc += t.at(idx);
        }
        out[flat] = acc;
    }
    return out;
}

template <class S>
Tensor<S> tensor_product(Tensor<S> const& a, Tensor<S> const& b)
{
    if (a.dim() != b.dim()) throw TensorError("tensor product of different dimensions");
    std::vector<Variance> var = a.variance();
    var.insert(var.end(), b.variance().begin(), b.variance().end());
    Tensor<S> out(a.dim(), var);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    return out;
}

/// A(v) for an endomorphism A and vector v.
template <class S>
Tensor<S> apply(Tensor<S> const& endo, Tensor<S> const& v)
{
    int const n = endo.dim();
    Tensor<S> out = Tensor<S>::vector(n);
    for (int k = 0; k < n; ++k) {
        S acc{};
        for (int j = 0; j < n; ++j) acc += endo(k, j) * v(j);
        out(k) = acc;
    }
    return out;
}

/// Composition A∘B of endomorphisms.
template <class S>
Tensor<S> compose(Tensor<S> const& a, Tensor<S> const& b)
{
    int const n = a.dim();
    Tensor<S> out = Tensor<S>::endomorphism(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S acc{};
            for (int m = 0; m < n; ++m) acc += a(i, m) * b(m, j);
            out(i, j) = acc;
        }
    return out;
}

/// B(u, v) for a bilinear form B.
template <class S>
S pair(Tensor<S> const& form, Tensor<S> const& u, Tensor<S> const& v)
{
    int const n = form.dim();
    S acc{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += form(i, j) * u(i) * v(j);
    return acc;
}

/// ω(v) for a covector ω.
template <class S>
S evaluate(Tensor<S> const& covector, Tensor<S> const& v)
{
    S acc{};
    for (int i = 0; i < v.dim(); ++i) acc += covector(i) * v(i);
    return acc;
}

inline Tensor<double> basis_vector(int n, int i)
{
    Tensor<double> e = Tensor<double>::vector(n);
    e(i) = 1.0;
    return e;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

inline Eigen::MatrixXd to_eigen(Tensor<double> const& m)
{
    int const n = m.dim();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m(i, j);
    return out;
}

/// Throws unless the symmetric form is positive definite: every LDLᵀ pivot
/// must exceed 1e-12.
inline void require_positive_definite(Tensor<double> const& form, char const* what = "inner product")
{
    Eigen::LDLT<Eigen::MatrixXd> ldlt(to_eigen(form));
    if (ldlt.info() != Eigen::Success) throw TensorError(std::string(what) + " is not positive definite");
    auto const d = ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (!(d[i] >= 1e-12)) throw TensorError(std::string(what) + " is not positive definite (pivot " + std::to_string(d[i]) + ")");
}

inline double condition_number(Tensor<double> const& sym)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(sym), Eigen::EigenvaluesOnly);
    auto const& ev = es.eigenvalues();
    double const lo = ev.cwiseAbs().minCoeff(), hi = ev.cwiseAbs().maxCoeff();
    return lo == 0.0 ? INFINITY : hi / lo;
}

/// Inverse of a symmetric (0,2) metric as a (2,0) tensor.
inline Tensor<double> inverse_metric(Tensor<double> const& g)
{
    if (condition_number(g) > 1e12) throw TensorError("singular metric (condition number > 1e12)");
    Eigen::MatrixXd const inv = to_eigen(g).ldlt().solve(Eigen::MatrixXd::Identity(g.dim(), g.dim()));
    Tensor<double> out(g.dim(), {Variance::up, Variance::up});
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) out(i, j) = 0.5 * (inv(i, j) + inv(j, i));
    return out;
}

/// Inverse metric with first derivatives: ∂(g⁻¹) = -g⁻¹ (∂g) g⁻¹.
inline Tensor<Jet1> inverse_metric(Tensor<Jet1> const& g)
{
    int const n = g.dim();
    Tensor<double> const inv = inverse_metric(values(g));
    Tensor<Jet1> out(n, {Variance::up, Variance::up});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = Jet1{inv(i, j)};
    for (int a = 0; a < n; ++a) {
        Tensor<double> const dg = partials(g, a);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) acc += inv(i, k) * dg(k, l) * inv(l, j);
                out(i, j).grad[static_cast<std::size_t>(a)] = -acc;
            }
    }
    return out;
}

enum class Direction { up, down };

/// Flips the variance of one slot with the musical isomorphism of `metric`.
template <class S>
Tensor<S> raise_lower(Tensor<S> const& t, std::size_t slot, Tensor<S> const& metric, Direction direction)
{
    if (slot >= t.rank()) throw TensorError("slot out of range");
    Variance const from = direction == Direction::down ? Variance::up : Variance::down;
    if (t.variance()[slot] != from) throw TensorError("slot already has the requested variance");
    if (metric.rank() != 2 || metric.variance()[0] != Variance::down || metric.variance()[1] != Variance::down)
        throw TensorError("metric must be a (0,2) tensor");
    if constexpr (std::is_same_v<S, double>)
        if (condition_number(metric) > 1e12) throw TensorError("singular metric (condition number > 1e12)");

    int const n = t.dim();
    Tensor<S> const m = direction == Direction::down ? metric : inverse_metric(metric);
    std::vector<Variance> var = t.variance();
    var[slot] = direction == Direction::down ? Variance::down : Variance::up;
    Tensor<S> out(n, var);
    std::vector<int> idx(t.rank(), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t rem = flat;
        for (std::size_t s = t.rank(); s-- > 0;) {
            idx[s] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
        }
        int const target = idx[slot];
        S acc{};
        for (int k = 0; k < n; ++k) {
            idx[slot] = k;
            acc += m(target, k) * t.at(idx);
        }
        out[flat] = acc;
    }
    return out;
}

/// Vector v♭ = g(v, ·).
template <class S>
Tensor<S> flat(Tensor<S> const& v, Tensor<S> const& g)
{
    return raise_lower(v, 0, g, Direction::down);
}

/// Covector ω♯ = g⁻¹ω, with g⁻¹ supplied.
template <class S>
Tensor<S> sharp_with(Tensor<S> const& omega, Tensor<S> const& g_inv)
{
    int const n = omega.dim();
    Tensor<S> out = Tensor<S>::vector(n);
    for (int i = 0; i < n; ++i) {
        S acc{};
        for (int j = 0; j < n; ++j) acc += g_inv(i, j) * omega(j);
        out(i) = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orthonormal frames
// ---------------------------------------------------------------------------

enum class InnerProductRole { metric, deformed_metric, other };

struct FrameBasis
{
    std::vector<Tensor<double>> vectors;
    Tensor<double> inner_product;
    InnerProductRole role = InnerProductRole::other;

    std::size_t size() const { return vectors.size(); }
    Tensor<double> const& operator[](std::size_t j) const { return vectors[j]; }

    /// max |inner(v_i, v_j) - δ_ij|
    double orthonormality_defect() const
    {
        double m = 0.0;
        for (std::size_t i = 0; i < vectors.size(); ++i)
            for (std::size_t j = 0; j < vectors.size(); ++j)
                m = std::max(m, std::abs(pair(inner_product, vectors[i], vectors[j]) - (i == j ? 1.0 : 0.0)));
        return m;
    }
};

namespace detail {

// Two passes of classical Gram–Schmidt against the accepted vectors.
inline Tensor<double> orthogonalize(Tensor<double> v, std::vector<Tensor<double>> const& accepted, Tensor<double> const& inner)
{
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> coeff;
        coeff.reserve(accepted.size());
        for (auto const& e : accepted) coeff.push_back(pair(inner, e, v));
        for (std::size_t k = 0; k < accepted.size(); ++k)
            for (int i = 0; i < v.dim(); ++i) v(i) -= coeff[k] * accepted[k](i);
    }
    return v;
}

}  // namespace detail

/// Orthonormalises n independent seed vectors against `inner`.
inline FrameBasis gram_schmidt(std::span<Tensor<double> const> seeds, Tensor<double> const& inner,
                               InnerProductRole role = InnerProductRole::other)
{
    int const n = inner.dim();
    if (seeds.size() != static_cast<std::size_t>(n)) throw TensorError("gram_schmidt needs exactly n seed vectors");
    require_positive_definite(inner);
    FrameBasis out{{}, inner, role};
    for (auto const& s : seeds) {
        double const before = std::sqrt(pair(inner, s, s));
        Tensor<double> v = detail::orthogonalize(s, out.vectors, inner);
        double const norm = std::sqrt(std::max(0.0, pair(inner, v, v)));
        if (!(norm > 1e-10 * std::max(before, 1e-300))) throw TensorError("gram_schmidt: seed vectors are rank deficient");
        v *= 1.0 / norm;
        out.vectors.push_back(std::move(v));
    }
    return out;
}

/// Greedy variant: walks `seeds` in order, skipping vectors that are
/// (numerically) in the span of those already accepted, until n are found.
inline FrameBasis gram_schmidt_greedy(std::span<Tensor<double> const> seeds, Tensor<double> const& inner,
                                      InnerProductRole role = InnerProductRole::other)
{
    int const n = inner.dim();
    require_positive_definite(inner);
    FrameBasis out{{}, inner, role};
    for (auto const& s : seeds) {
        if (out.vectors.size() == static_cast<std::size_t>(n)) break;
        double const before = std::sqrt(pair(inner, s, s));
        if (before == 0.0) continue;
        Tensor<double> v = detail::orthogonalize(s, out.vectors, inner);
        double const norm = std::sqrt(std::max(0.0, pair(inner, v, v)));
        if (norm <= 1e-8 * before) continue;
        v *= 1.0 / norm;
        out.vectors.push_back(std::move(v));
    }
    if (out.vectors.size() != static_cast<std::size_t>(n)) throw TensorError("gram_schmidt: seed vectors do not span");
    return out;
}

/// Orthonormal frame built from the coordinate basis.
inline FrameBasis coordinate_frame(Tensor<double> const& inner, InnerProductRole role)
{
    std::vector<Tensor<double>> seeds;
    for (int i = 0; i < inner.dim(); ++i) seeds.push_back(basis_vector(inner.dim(), i));
    return gram_schmidt(seeds, inner, role);
}

/// Components of v in an orthonormal frame: inner(v, e_j).
inline std::vector<double> frame_components(FrameBasis const& frame, Tensor<double> const& v)
{
    std::vector<double> out;
    for (auto const& e : frame.vectors) out.push_back(pair(frame.inner_product, e, v));
    return out;
}

}  // namespace minig
