#pragma once

#include <array>
#include <cmath>

namespace morreylab {

/// Truncated bivariate Taylor polynomial of total degree D about a point:
/// c(i,j) is the coefficient of e1^i e2^j. Arithmetic propagates exact
/// partial derivatives through closed-form expressions.
template <int D>
class Taylor2 {
public:
  static constexpr int kSize = (D + 1) * (D + 2) / 2;

  Taylor2() { c_.fill(0.0); }
  static Taylor2 constant(double v) {
    Taylor2 t;
    t.c_[0] = v;
    return t;
  }
  /// The coordinate `axis` (0 or 1) with value v at the expansion point.
  static Taylor2 variable(double v, int axis) {
    Taylor2 t = constant(v);
    if (D >= 1) t.c_[idx(axis == 0 ? 1 : 0, axis == 0 ? 0 : 1)] = 1.0;
    return t;
  }

  static constexpr int idx(int i, int j) {
    const int k = i + j;
    return k * (k + 1) / 2 + j;
  }

  double value() const { return c_[0]; }
  double coef(int i, int j) const { return c_[idx(i, j)]; }
  double& coef(int i, int j) { return c_[idx(i, j)]; }
  /// ∂^{i+j} / ∂e1^i ∂e2^j at the expansion point.
  double derivative(int i, int j) const { return factorial(i) * factorial(j) * c_[idx(i, j)]; }

  Taylor2& operator+=(const Taylor2& o) {
    for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Taylor2& operator-=(const Taylor2& o) {
    for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Taylor2& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Taylor2& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
  friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
  friend Taylor2 operator+(Taylor2 a, double s) { return a += s; }
  friend Taylor2 operator+(double s, Taylor2 a) { return a += s; }
  friend Taylor2 operator-(Taylor2 a, double s) { return a += -s; }
  friend Taylor2 operator-(double s, const Taylor2& a) { return (a * -1.0) + s; }
  friend Taylor2 operator*(Taylor2 a, double s) { return a *= s; }
  friend Taylor2 operator*(double s, Taylor2 a) { return a *= s; }
  friend Taylor2 operator-(Taylor2 a) { return a *= -1.0; }

  friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    for (int ka = 0; ka <= D; ++ka)
      for (int ja = 0; ja <= ka; ++ja) {
        const double va = a.c_[idx(ka - ja, ja)];
        if (va == 0.0) continue;
        for (int kb = 0; ka + kb <= D; ++kb)
          for (int jb = 0; jb <= kb; ++jb) r.c_[idx(ka - ja + kb - jb, ja + jb)] += va * b.c_[idx(kb - jb, jb)];
      }
    return r;
  }

  /// g(a) given g^{(k)}(a0), k = 0..D.
  Taylor2 compose(const std::array<double, D + 1>& g) const {
    Taylor2 tail = *this;
    tail.c_[0] = 0.0;
    Taylor2 out = constant(g[0]);
    Taylor2 power = constant(1.0);
    double fact = 1.0;
    for (int k = 1; k <= D; ++k) {
      power = power * tail;
      fact *= k;
      Taylor2 term = power;
      term *= g[k] / fact;
      out += term;
    }
    return out;
  }

  friend Taylor2 log(const Taylor2& a) {
    std::array<double, D + 1> g{};
    const double x = a.value();
    g[0] = std::log(x);
    double p = 1.0 / x;
    for (int k = 1; k <= D; ++k) {
      g[k] = p;
      p *= -static_cast<double>(k) / x;
    }
    return a.compose(g);
  }
  friend Taylor2 pow(const Taylor2& a, double e) {
    std::array<double, D + 1> g{};
    const double x = a.value();
    double coeff = 1.0;
    for (int k = 0; k <= D; ++k) {
      g[k] = coeff * std::pow(x, e - k);
      coeff *= (e - k);
    }
    return a.compose(g);
  }
  friend Taylor2 sqrt(const Taylor2& a) { return pow(a, 0.5); }
  friend Taylor2 reciprocal(const Taylor2& a) { return pow(a, -1.0); }
  friend Taylor2 operator/(const Taylor2& a, const Taylor2& b) { return a * reciprocal(b); }
  /// |a| away from a zero of a.
  friend Taylor2 abs(const Taylor2& a) { return a.value() < 0 ? a * -1.0 : a; }

private:
  static constexpr double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }
  std::array<double, kSize> c_;
};

}  // namespace morreylab
