// Ordered spans of (vector) polynomials with rank tools over the rationals.
#pragma once

#include "graddiv/exact_linalg.hpp"
#include "graddiv/polynomial.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace graddiv {

enum class Arity { Scalar, Vector };

// An ordered list of basis candidates. Scalar polynomials are stored in the
// first component of a VectorPolynomial.
struct PolySpan {
  Arity arity = Arity::Scalar;
  std::vector<VectorPolynomial> basis;

  std::size_t dim() const { return basis.size(); }

  void push(Polynomial p)
  {
    VectorPolynomial v;
    v.c[0] = std::move(p);
    basis.push_back(std::move(v));
  }
  void push(VectorPolynomial v) { basis.push_back(std::move(v)); }

  const Polynomial& scalar(std::size_t i) const { return basis[i].c[0]; }
};

// Collect monomial columns (graded lex, then component) shared by all spans.
class MonomialIndexer {
public:
  explicit MonomialIndexer(const std::vector<const PolySpan*>& spans)
  {
    for (const auto* s : spans)
      for (const auto& v : s->basis)
        for (int comp = 0; comp < 3; ++comp)
          for (const auto& [m, c] : v.c[comp].terms())
            index_.try_emplace(std::pair(m, comp), 0);
    std::size_t k = 0;
    for (auto& [key, idx] : index_) idx = k++;
  }

  std::size_t size() const { return index_.size(); }

  RationalMatrix matrix_of(const PolySpan& s) const
  {
    RationalMatrix m(s.dim(), size());
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (int comp = 0; comp < 3; ++comp)
        for (const auto& [mi, c] : s.basis[i].c[comp].terms())
          m(i, index_.at(std::pair(mi, comp))) = c;
    return m;
  }

private:
  // key ordering: (graded-lex multi-index, component); deterministic
  std::map<std::pair<MultiIndex, int>, std::size_t> index_;
};

inline std::size_t span_rank(const PolySpan& s)
{
  if (s.basis.empty()) return 0;
  MonomialIndexer idx({&s});
  return rank_hybrid(idx.matrix_of(s));
}

// Deterministic complement of B inside A: starting from the rows of B, keep
// each basis element of A (in order) that increases the rank. Throws when B
// is not contained in A.
inline PolySpan quotient_complement(const PolySpan& a, const PolySpan& b)
{
  if (a.arity != b.arity) throw std::invalid_argument("quotient_complement: arity mismatch");
  MonomialIndexer idx({&a, &b});
  RationalMatrix ma = idx.matrix_of(a);
  RationalMatrix mb = idx.matrix_of(b);

  // containment check: every row of B solvable in the row span of A
  {
    RationalMatrix at(idx.size(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) at(j, i) = ma(i, j);
    for (std::size_t i = 0; i < b.dim(); ++i) {
      std::vector<Rational> rhs(idx.size());
      for (std::size_t j = 0; j < idx.size(); ++j) rhs[j] = mb(i, j);
      if (!solve_exact(at, rhs))
        throw std::invalid_argument("quotient_complement: B not contained in A");
    }
  }

  // incremental echelon set seeded with the rows of B
  const std::size_t ncols = idx.size();
  std::vector<std::vector<Rational>> echelon; // normalized rows
  std::vector<std::size_t> pivot_col;
  auto reduce_insert = [&](std::vector<Rational> row) -> bool {
    for (std::size_t r = 0; r < echelon.size(); ++r) {
      const Rational& f = row[pivot_col[r]];
      if (f == 0) continue;
      const Rational fc = f;
      for (std::size_t j = 0; j < ncols; ++j) row[j] -= fc * echelon[r][j];
    }
    std::size_t p = 0;
    while (p < ncols && row[p] == 0) ++p;
    if (p == ncols) return false;
    const Rational inv = Rational(1) / row[p];
    for (std::size_t j = p; j < ncols; ++j) row[j] *= inv;
    echelon.push_back(std::move(row));
    pivot_col.push_back(p);
    return true;
  };

  for (std::size_t i = 0; i < b.dim(); ++i) {
    std::vector<Rational> row(ncols);
    for (std::size_t j = 0; j < ncols; ++j) row[j] = mb(i, j);
    reduce_insert(std::move(row));
  }

  PolySpan out;
  out.arity = a.arity;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    std::vector<Rational> row(ncols);
    for (std::size_t j = 0; j < ncols; ++j) row[j] = ma(i, j);
    if (reduce_insert(std::move(row))) out.basis.push_back(a.basis[i]);
  }
  return out;
}

} // namespace graddiv
