// Dense linear algebra over the rationals: rank, inversion, and linear
// solves by fraction-exact Gaussian elimination with fixed pivot order,
// plus a modular rank certificate for large matrices.
#pragma once

#include "graddiv/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace graddiv {

class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0))
  {
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b)
{
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  RationalMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      if (a(i, l) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(l, j) == 0) continue;
        out(i, j) += a(i, l) * b(l, j);
      }
    }
  return out;
}

// Row echelon reduction in place. Pivots are chosen as the first nonzero
// entry scanning columns left to right (deterministic). Returns the pivot
// columns.
inline std::vector<std::size_t> row_echelon(RationalMatrix& m)
{
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = col; j < m.cols(); ++j) std::swap(m(row, j), m(p, j));
    const Rational inv = Rational(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank_exact(RationalMatrix m) { return row_echelon(m).size(); }

inline RationalMatrix inverse_exact(const RationalMatrix& a)
{
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse_exact: matrix not square");
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = row_echelon(aug);
  if (pivots.size() != n || pivots.back() != n - 1)
    throw std::runtime_error("inverse_exact: singular matrix");
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// Solve A x = b; returns nullopt when b is not in the column span.
inline std::optional<std::vector<Rational>> solve_exact(const RationalMatrix& a,
                                                        const std::vector<Rational>& b)
{
  const std::size_t n = a.rows(), m = a.cols();
  RationalMatrix aug(n, m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug(i, j) = a(i, j);
    aug(i, m) = b[i];
  }
  auto pivots = row_echelon(aug);
  if (!pivots.empty() && pivots.back() == m) return std::nullopt; // inconsistent
  std::vector<Rational> x(m, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m);
  return x;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p)
{
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

} // namespace detail

// Rank of the matrix reduced modulo a prime. Full rank mod p certifies full
// rank over Q (a nonzero minor mod p is nonzero over Q); a deficient modular
// rank is inconclusive and callers should fall back to rank_exact.
inline std::optional<std::size_t> rank_mod_prime(const RationalMatrix& a, std::uint64_t p)
{
  const std::size_t n = a.rows(), m = a.cols();
  std::vector<std::uint64_t> r(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Rational& q = a(i, j);
      const BigInt num = numerator(q) % p;
      const BigInt den = denominator(q) % p;
      const std::uint64_t dd = den.convert_to<std::uint64_t>();
      if (dd == 0) return std::nullopt; // p divides a denominator
      std::uint64_t nn = ((num % p + p) % p).convert_to<std::uint64_t>();
      r[i * m + j] = detail::mulmod(nn, detail::powmod(dd, p - 2, p), p);
    }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m && rank < n; ++col) {
    std::size_t piv = rank;
    while (piv < n && r[piv * m + col] == 0) ++piv;
    if (piv == n) continue;
    for (std::size_t j = col; j < m; ++j) std::swap(r[rank * m + j], r[piv * m + j]);
    const std::uint64_t inv = detail::powmod(r[rank * m + col], p - 2, p);
    for (std::size_t i = rank + 1; i < n; ++i) {
      const std::uint64_t f = detail::mulmod(r[i * m + col], inv, p);
      if (f == 0) continue;
      for (std::size_t j = col; j < m; ++j) {
        std::uint64_t v = r[i * m + j];
        std::uint64_t s = detail::mulmod(f, r[rank * m + j], p);
        r[i * m + j] = (v >= s) ? v - s : v + p - s;
      }
    }
    ++rank;
  }
  return rank;
}

// Exact rank, trying modular certificates first for speed.
inline std::size_t rank_hybrid(const RationalMatrix& a)
{
  const std::size_t full = std::min(a.rows(), a.cols());
  static constexpr std::uint64_t primes[] = {4611686018427388039ULL, 2305843009213693951ULL,
                                             1152921504606846883ULL};
  for (auto p : primes) {
    auto r = rank_mod_prime(a, p);
    if (r && *r == full) return full;
  }
  return rank_exact(a);
}

} // namespace graddiv
