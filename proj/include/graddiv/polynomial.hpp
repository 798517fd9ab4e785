// Multivariate polynomials in (x1,x2,x3) with exact rational coefficients.
// Monomials are kept in graded lexicographic order, which fixes basis order
// and pivot choices everywhere downstream.
#pragma once

#include "graddiv/rational.hpp"

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace graddiv {

struct MultiIndex {
  std::array<int, 3> a{0, 0, 0};

  int degree() const { return a[0] + a[1] + a[2]; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  // graded lex: lower total degree first, then lex on (a1,a2,a3)
  friend std::strong_ordering operator<=>(const MultiIndex& lhs, const MultiIndex& rhs)
  {
    if (auto c = lhs.degree() <=> rhs.degree(); c != 0) return c;
    return lhs.a <=> rhs.a;
  }
};

class Polynomial {
public:
  using TermMap = std::map<MultiIndex, Rational>;

  Polynomial() = default;
  explicit Polynomial(Rational c)
  {
    if (c != 0) terms_[MultiIndex{}] = std::move(c);
  }
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}

  static Polynomial monomial(MultiIndex m, Rational c = Rational(1))
  {
    Polynomial p;
    if (c != 0) p.terms_[m] = std::move(c);
    return p;
  }
  static Polynomial variable(int i)
  {
    MultiIndex m;
    m.a[i] = 1;
    return monomial(m);
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

  Rational coefficient(const MultiIndex& m) const
  {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const MultiIndex& m, const Rational& c)
  {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& rhs)
  {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& rhs)
  {
    for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& s)
  {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator-(Polynomial p)
  {
    for (auto& [m, c] : p.terms_) c = -c;
    return p;
  }
  friend Polynomial operator*(Polynomial lhs, const Rational& s) { return lhs *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial rhs) { return rhs *= s; }

  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs)
  {
    Polynomial out;
    for (const auto& [ma, ca] : lhs.terms_)
      for (const auto& [mb, cb] : rhs.terms_) {
        MultiIndex m{{ma.a[0] + mb.a[0], ma.a[1] + mb.a[1], ma.a[2] + mb.a[2]}};
        out.add_term(m, ca * cb);
      }
    return out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial derivative(int var) const
  {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      if (m.a[var] == 0) continue;
      MultiIndex d = m;
      d.a[var] -= 1;
      out.add_term(d, c * m.a[var]);
    }
    return out;
  }

  Rational eval(const Vec3Q& x) const
  {
    Rational out = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < 3; ++i)
        for (int e = 0; e < m.a[i]; ++e)
          t *= x[i];
      out += t;
    }
    return out;
  }

  double eval(const std::array<double, 3>& x) const
  {
    double out = 0;
    for (const auto& [m, c] : terms_) {
      double t = to_double(c);
      for (int i = 0; i < 3; ++i)
        for (int e = 0; e < m.a[i]; ++e)
          t *= x[i];
      out += t;
    }
    return out;
  }

  // Substitute x_i = affine[i][0] + sum_j affine[i][1+j] * y_j.
  Polynomial compose_affine(const std::array<std::array<Rational, 4>, 3>& affine) const
  {
    std::array<Polynomial, 3> lin;
    for (int i = 0; i < 3; ++i) {
      lin[i] = Polynomial(affine[i][0]);
      for (int j = 0; j < 3; ++j)
        lin[i] += Polynomial::variable(j) * affine[i][1 + j];
    }
    // memoized powers of the three linear forms
    std::array<std::vector<Polynomial>, 3> pow;
    for (int i = 0; i < 3; ++i) pow[i].push_back(Polynomial(Rational(1)));
    auto power = [&](int i, int e) -> const Polynomial& {
      while ((int)pow[i].size() <= e) pow[i].push_back(pow[i].back() * lin[i]);
      return pow[i][e];
    };
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      Polynomial t = Polynomial(c);
      for (int i = 0; i < 3; ++i)
        if (m.a[i] > 0) t = t * power(i, m.a[i]);
      out += t;
    }
    return out;
  }

  // Fix one variable to a constant value.
  Polynomial substitute(int var, const Rational& value) const
  {
    std::array<std::array<Rational, 4>, 3> affine{};
    for (int i = 0; i < 3; ++i) affine[i][1 + i] = 1;
    affine[var][0] = value;
    affine[var][1 + var] = 0;
    return compose_affine(affine);
  }

  std::string str() const
  {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += c.str();
      for (int i = 0; i < 3; ++i)
        if (m.a[i] > 0) s += "*x" + std::to_string(i + 1) + "^" + std::to_string(m.a[i]);
    }
    return s;
  }

private:
  TermMap terms_;
};

struct VectorPolynomial {
  std::array<Polynomial, 3> c;

  VectorPolynomial() = default;
  VectorPolynomial(Polynomial c1, Polynomial c2, Polynomial c3)
      : c{std::move(c1), std::move(c2), std::move(c3)}
  {
  }

  bool is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }
  int degree() const { return std::max({c[0].degree(), c[1].degree(), c[2].degree()}); }

  VectorPolynomial& operator+=(const VectorPolynomial& rhs)
  {
    for (int i = 0; i < 3; ++i) c[i] += rhs.c[i];
    return *this;
  }
  VectorPolynomial& operator-=(const VectorPolynomial& rhs)
  {
    for (int i = 0; i < 3; ++i) c[i] -= rhs.c[i];
    return *this;
  }
  VectorPolynomial& operator*=(const Rational& s)
  {
    for (int i = 0; i < 3; ++i) c[i] *= s;
    return *this;
  }
  friend VectorPolynomial operator+(VectorPolynomial lhs, const VectorPolynomial& rhs)
  {
    return lhs += rhs;
  }
  friend VectorPolynomial operator-(VectorPolynomial lhs, const VectorPolynomial& rhs)
  {
    return lhs -= rhs;
  }
  friend VectorPolynomial operator*(VectorPolynomial lhs, const Rational& s) { return lhs *= s; }
  friend VectorPolynomial operator*(const Rational& s, VectorPolynomial rhs) { return rhs *= s; }
  friend bool operator==(const VectorPolynomial&, const VectorPolynomial&) = default;

  Vec3Q eval(const Vec3Q& x) const { return {c[0].eval(x), c[1].eval(x), c[2].eval(x)}; }
  std::array<double, 3> eval(const std::array<double, 3>& x) const
  {
    return {c[0].eval(x), c[1].eval(x), c[2].eval(x)};
  }

  VectorPolynomial compose_affine(const std::array<std::array<Rational, 4>, 3>& affine) const
  {
    return {c[0].compose_affine(affine), c[1].compose_affine(affine),
            c[2].compose_affine(affine)};
  }
};

inline VectorPolynomial grad(const Polynomial& p)
{
  return {p.derivative(0), p.derivative(1), p.derivative(2)};
}

inline VectorPolynomial curl(const VectorPolynomial& v)
{
  return {v.c[2].derivative(1) - v.c[1].derivative(2),
          v.c[0].derivative(2) - v.c[2].derivative(0),
          v.c[1].derivative(0) - v.c[0].derivative(1)};
}

inline Polynomial div(const VectorPolynomial& v)
{
  return v.c[0].derivative(0) + v.c[1].derivative(1) + v.c[2].derivative(2);
}

// Poincare operator p(u) = int_0^1 t^2 x u(tx) dt; acts per monomial as
// x * x^a / (|a|+3), a right inverse of the divergence.
inline VectorPolynomial poincare(const Polynomial& u)
{
  VectorPolynomial out;
  for (const auto& [m, c] : u.terms()) {
    const Rational s = c / Rational(m.degree() + 3);
    for (int i = 0; i < 3; ++i) {
      MultiIndex mi = m;
      mi.a[i] += 1;
      out.c[i].add_term(mi, s);
    }
  }
  return out;
}

// Matrix action M*v on a vector polynomial (componentwise linear combination).
inline VectorPolynomial apply_matrix(const Mat3Q& m, const VectorPolynomial& v)
{
  VectorPolynomial out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.c[i] += v.c[j] * m[i][j];
  return out;
}

} // namespace graddiv
