#include "graddiv/spaces.hpp"

#include <json.hpp>

#include <algorithm>

namespace graddiv {

namespace {

std::vector<MultiIndex> monomials_P(int k)
{
  std::vector<MultiIndex> out;
  for (int d = 0; d <= k; ++d)
    for (int a1 = d; a1 >= 0; --a1)
      for (int a2 = d - a1; a2 >= 0; --a2)
        out.push_back(MultiIndex{{a1, a2, d - a1 - a2}});
  // graded lex to match the Polynomial term order
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> monomials_Ptilde(int k)
{
  std::vector<MultiIndex> out;
  if (k < 0) return out;
  for (int a1 = k; a1 >= 0; --a1)
    for (int a2 = k - a1; a2 >= 0; --a2)
      out.push_back(MultiIndex{{a1, a2, k - a1 - a2}});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> monomials_Q(std::array<int, 3> deg)
{
  std::vector<MultiIndex> out;
  if (deg[0] < 0 || deg[1] < 0 || deg[2] < 0) return out;
  for (int a1 = 0; a1 <= deg[0]; ++a1)
    for (int a2 = 0; a2 <= deg[1]; ++a2)
      for (int a3 = 0; a3 <= deg[2]; ++a3)
        out.push_back(MultiIndex{{a1, a2, a3}});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> monomials_P2d(int k)
{
  std::vector<MultiIndex> out;
  for (int d = 0; d <= k; ++d)
    for (int a1 = d; a1 >= 0; --a1)
      out.push_back(MultiIndex{{a1, d - a1, 0}});
  std::sort(out.begin(), out.end());
  return out;
}

PolySpan from_monomials(const std::vector<MultiIndex>& mono, Arity arity)
{
  PolySpan s;
  s.arity = arity;
  if (arity == Arity::Scalar) {
    for (const auto& m : mono) s.push(Polynomial::monomial(m));
  } else {
    for (const auto& m : mono)
      for (int comp = 0; comp < 3; ++comp) {
        VectorPolynomial v;
        v.c[comp] = Polynomial::monomial(m);
        s.push(std::move(v));
      }
  }
  return s;
}

// Null space of x . p over homogeneous vector polynomials of degree k,
// resolved by echelon reduction with graded-lex column order.
PolySpan homogeneous_tangential(int k)
{
  PolySpan s;
  s.arity = Arity::Vector;
  if (k < 1) return s;
  auto mono = monomials_Ptilde(k);
  const std::size_t n = 3 * mono.size(); // unknowns: coefficient per (monomial, comp)
  // constraint rows indexed by degree k+1 monomials
  auto cons = monomials_Ptilde(k + 1);
  std::map<MultiIndex, std::size_t> cons_idx;
  for (std::size_t i = 0; i < cons.size(); ++i) cons_idx[cons[i]] = i;
  RationalMatrix m(cons.size(), n);
  for (std::size_t j = 0; j < mono.size(); ++j)
    for (int comp = 0; comp < 3; ++comp) {
      MultiIndex mi = mono[j];
      mi.a[comp] += 1;
      m(cons_idx.at(mi), 3 * j + comp) = 1;
    }
  auto pivots = row_echelon(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  // one basis vector per free column
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> coeff(n, Rational(0));
    coeff[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) coeff[pivots[r]] = -m(r, free);
    VectorPolynomial v;
    for (std::size_t j = 0; j < mono.size(); ++j)
      for (int comp = 0; comp < 3; ++comp)
        if (coeff[3 * j + comp] != 0) v.c[comp].add_term(mono[j], coeff[3 * j + comp]);
    s.push(std::move(v));
  }
  return s;
}

} // namespace

PolySpan polynomial_space(SpaceKind kind, std::array<int, 3> degrees, Arity arity)
{
  switch (kind) {
  case SpaceKind::P:
    return from_monomials(monomials_P(degrees[0]), arity);
  case SpaceKind::Ptilde:
    return from_monomials(monomials_Ptilde(degrees[0]), arity);
  case SpaceKind::Q:
    return from_monomials(monomials_Q(degrees), arity);
  case SpaceKind::P2dFace:
    return from_monomials(monomials_P2d(degrees[0]), arity);
  }
  throw std::invalid_argument("polynomial_space: bad kind");
}

PolySpan nedelec_span(int r, CellType cell)
{
  if (r < 1) throw std::invalid_argument("nedelec_span: r must be >= 1");
  if (cell == CellType::Tet) {
    PolySpan s = polynomial_space(SpaceKind::P, r - 1, Arity::Vector);
    PolySpan sk = homogeneous_tangential(r);
    for (auto& v : sk.basis) s.basis.push_back(std::move(v));
    return s;
  }
  PolySpan s;
  s.arity = Arity::Vector;
  for (int comp = 0; comp < 3; ++comp) {
    std::array<int, 3> deg{r, r, r};
    deg[comp] = r - 1;
    for (const auto& m : monomials_Q(deg)) {
      VectorPolynomial v;
      v.c[comp] = Polynomial::monomial(m);
      s.push(std::move(v));
    }
  }
  return s;
}

Rational exact_integral_monomial(const MultiIndex& m, CellType cell)
{
  if (cell == CellType::Hex) {
    Rational out = 1;
    for (int i = 0; i < 3; ++i) out /= Rational(m.a[i] + 1);
    return out;
  }
  // tet: a! b! c! / (a+b+c+3)!
  Rational out = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = 2; j <= m.a[i]; ++j) out *= j;
  for (int j = 2; j <= m.degree() + 3; ++j) out /= Rational(j);
  return out;
}

Rational exact_integral_reference(const Polynomial& p, CellType cell)
{
  Rational out = 0;
  for (const auto& [m, c] : p.terms()) out += c * exact_integral_monomial(m, cell);
  return out;
}

std::string span_to_json(const PolySpan& s)
{
  nlohmann::json j = nlohmann::json::array();
  for (const auto& v : s.basis) {
    nlohmann::json entry = nlohmann::json::array();
    for (int comp = 0; comp < 3; ++comp)
      for (const auto& [m, c] : v.c[comp].terms())
        entry.push_back({{"component", comp},
                         {"exponents", {m.a[0], m.a[1], m.a[2]}},
                         {"numerator", numerator(c).str()},
                         {"denominator", denominator(c).str()}});
    j.push_back(std::move(entry));
  }
  return j.dump(2);
}

} // namespace graddiv
