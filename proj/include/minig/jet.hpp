#pragma once

// Forward-mode jets over the chart coordinates.
//
// Jet2 carries value, gradient and Hessian and is what expression evaluation
// produces. Jet1 carries value and gradient only; it is the scalar type used
// when a derived tensor (Christoffel symbols, intrinsic torsion, deformed
// metric) must be known together with its first partial derivatives.

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace minig {

inline constexpr int kMaxDim = 16;

// ---------------------------------------------------------------------------
// Jet1
// ---------------------------------------------------------------------------

struct Jet1
{
    double value = 0.0;
    std::array<double, kMaxDim> grad{};

    constexpr Jet1() = default;
    constexpr Jet1(double v) : value(v) {}  // NOLINT(google-explicit-constructor)

    Jet1& operator+=(Jet1 const& o)
    {
        value += o.value;
        for (int i = 0; i < kMaxDim; ++i) grad[i] += o.grad[i];
        return *this;
    }
    Jet1& operator-=(Jet1 const& o)
    {
        value -= o.value;
        for (int i = 0; i < kMaxDim; ++i) grad[i] -= o.grad[i];
        return *this;
    }
    Jet1& operator*=(Jet1 const& o)
    {
        for (int i = 0; i < kMaxDim; ++i) grad[i] = value * o.grad[i] + o.value * grad[i];
        value *= o.value;
        return *this;
    }
    Jet1& operator*=(double s)
    {
        value *= s;
        for (auto& d : grad) d *= s;
        return *this;
    }
    Jet1& operator/=(Jet1 const& o)
    {
        double const inv = 1.0 / o.value;
        for (int i = 0; i < kMaxDim; ++i) grad[i] = (grad[i] - value * inv * o.grad[i]) * inv;
        value *= inv;
        return *this;
    }
};

inline Jet1 operator-(Jet1 a)
{
    a.value = -a.value;
    for (auto& d : a.grad) d = -d;
    return a;
}
inline Jet1 operator+(Jet1 a, Jet1 const& b) { return a += b; }
inline Jet1 operator-(Jet1 a, Jet1 const& b) { return a -= b; }
inline Jet1 operator*(Jet1 a, Jet1 const& b) { return a *= b; }
inline Jet1 operator*(Jet1 a, double s) { return a *= s; }
inline Jet1 operator*(double s, Jet1 a) { return a *= s; }
inline Jet1 operator/(Jet1 a, Jet1 const& b) { return a /= b; }
inline Jet1 operator/(Jet1 a, double s) { return a *= (1.0 / s); }
inline Jet1 operator/(double s, Jet1 const& b) { return Jet1{s} /= b; }

inline Jet1 sqrt(Jet1 const& a)
{
    Jet1 r;
    r.value = std::sqrt(a.value);
    double const k = 0.5 / r.value;
    for (int i = 0; i < kMaxDim; ++i) r.grad[i] = k * a.grad[i];
    return r;
}

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

/// Second-order truncated Taylor polynomial in n variables.
class Jet2
{
  public:
    Jet2() = default;
    explicit Jet2(int n, double v = 0.0)
        : n_(n), value_(v), grad_(static_cast<std::size_t>(n), 0.0),
          hess_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0)
    {}

    /// The coordinate function x_index (zero-based) evaluated at `at`.
    static Jet2 variable(int n, int index, double at)
    {
        Jet2 j(n, at);
        j.grad_[static_cast<std::size_t>(index)] = 1.0;
        return j;
    }

    int dim() const { return n_; }
    double value() const { return value_; }
    double grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    double hess(int i, int j) const { return hess_[idx(i, j)]; }
    double& value() { return value_; }
    double& grad(int i) { return grad_[static_cast<std::size_t>(i)]; }
    double& hess(int i, int j) { return hess_[idx(i, j)]; }

    /// Value and gradient, discarding curvature information.
    Jet1 value_jet() const
    {
        Jet1 r{value_};
        for (int i = 0; i < n_; ++i) r.grad[i] = grad(i);
        return r;
    }

    /// The partial derivative along x_a as a first-order jet.
    Jet1 partial_jet(int a) const
    {
        Jet1 r{grad(a)};
        for (int i = 0; i < n_; ++i) r.grad[i] = hess(a, i);
        return r;
    }

    Jet2& operator+=(Jet2 const& o)
    {
        promote(o.n_);
        value_ += o.value_;
        for (int i = 0; i < o.n_; ++i) grad(i) += o.grad(i);
        for (int i = 0; i < o.n_; ++i)
            for (int j = 0; j < o.n_; ++j) hess(i, j) += o.hess(i, j);
        return *this;
    }
    Jet2& operator-=(Jet2 const& o) { return *this += -o; }

    friend Jet2 operator-(Jet2 a)
    {
        a.value_ = -a.value_;
        for (auto& d : a.grad_) d = -d;
        for (auto& d : a.hess_) d = -d;
        return a;
    }
    friend Jet2 operator+(Jet2 a, Jet2 const& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, Jet2 const& b) { return a -= b; }

    friend Jet2 operator*(Jet2 const& a, Jet2 const& b)
    {
        int const n = a.n_ > b.n_ ? a.n_ : b.n_;
        Jet2 r(n, a.value_ * b.value_);
        for (int i = 0; i < n; ++i) r.grad(i) = a.value_ * b.g(i) + b.value_ * a.g(i);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                double const h = a.value_ * b.h(i, j) + b.value_ * a.h(i, j) +
                                 (a.g(i) * b.g(j) + b.g(i) * a.g(j));
                r.hess(i, j) = h;
                r.hess(j, i) = h;
            }
        }
        return r;
    }
    friend Jet2 operator*(Jet2 a, double s)
    {
        a.value_ *= s;
        for (auto& d : a.grad_) d *= s;
        for (auto& d : a.hess_) d *= s;
        return a;
    }
    friend Jet2 operator*(double s, Jet2 a) { return std::move(a) * s; }
    friend Jet2 operator/(Jet2 const& a, Jet2 const& b) { return a * reciprocal(b); }

    /// f(u) given f(u), f'(u), f''(u).
    friend Jet2 chain(Jet2 const& u, double f0, double f1, double f2)
    {
        Jet2 r(u.n_, f0);
        for (int i = 0; i < u.n_; ++i) r.grad(i) = f1 * u.grad(i);
        for (int i = 0; i < u.n_; ++i) {
            for (int j = i; j < u.n_; ++j) {
                double const h = f1 * u.hess(i, j) + f2 * (u.grad(i) * u.grad(j));
                r.hess(i, j) = h;
                r.hess(j, i) = h;
            }
        }
        return r;
    }

    friend Jet2 reciprocal(Jet2 const& u)
    {
        double const inv = 1.0 / u.value_;
        return chain(u, inv, -inv * inv, 2.0 * inv * inv * inv);
    }

  private:
    std::size_t idx(int i, int j) const
    {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_);
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }
    // Zero-extended accessors so constants (n == 0) mix with full jets.
    double g(int i) const { return i < n_ ? grad(i) : 0.0; }
    double h(int i, int j) const { return i < n_ && j < n_ ? hess(i, j) : 0.0; }

    void promote(int n)
    {
        if (n <= n_) return;
        Jet2 wide(n, value_);
        for (int i = 0; i < n_; ++i) wide.grad(i) = grad(i);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) wide.hess(i, j) = hess(i, j);
        *this = std::move(wide);
    }

    int n_ = 0;
    double value_ = 0.0;
    std::vector<double> grad_;
    std::vector<double> hess_;
};

inline Jet2 exp(Jet2 const& u)
{
    double const e = std::exp(u.value());
    return chain(u, e, e, e);
}
inline Jet2 log(Jet2 const& u)
{
    double const inv = 1.0 / u.value();
    return chain(u, std::log(u.value()), inv, -inv * inv);
}
inline Jet2 sin(Jet2 const& u)
{
    double const s = std::sin(u.value()), c = std::cos(u.value());
    return chain(u, s, c, -s);
}
inline Jet2 cos(Jet2 const& u)
{
    double const s = std::sin(u.value()), c = std::cos(u.value());
    return chain(u, c, -s, -c);
}
inline Jet2 sqrt(Jet2 const& u)
{
    double const r = std::sqrt(u.value());
    return chain(u, r, 0.5 / r, -0.25 / (r * u.value()));
}
/// u^(num/den); the caller is responsible for the base lying in the domain.
inline Jet2 pow_rational(Jet2 const& u, long num, long den)
{
    double const x = u.value();
    double const r = static_cast<double>(num) / static_cast<double>(den);
    if (den == 1) {
        auto ipow = [x](long k) {
            return k == 0 ? 1.0 : std::pow(x, static_cast<double>(k));
        };
        double const f0 = ipow(num);
        double const f1 = num == 0 ? 0.0 : r * ipow(num - 1);
        double const f2 = (num == 0 || num == 1) ? 0.0 : r * (r - 1.0) * ipow(num - 2);
        return chain(u, f0, f1, f2);
    }
    double const f0 = std::pow(x, r);
    return chain(u, f0, r * f0 / x, r * (r - 1.0) * f0 / (x * x));
}

// Uniform access to the primal value of any scalar type used by the tensors.
inline double value_of(double x) { return x; }
inline double value_of(Jet1 const& x) { return x.value; }
inline double value_of(Jet2 const& x) { return x.value(); }

}  // namespace minig
