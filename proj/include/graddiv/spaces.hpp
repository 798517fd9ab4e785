// Reference polynomial spaces: P_k, homogeneous P_k, Q_{i,j,k}, the Nedelec
// space R_k / anisotropic Q product, and exact monomial integration on the
// reference tetrahedron and cube.
#pragma once

#include "graddiv/poly_span.hpp"

#include <stdexcept>

namespace graddiv {

enum class CellType { Tet, Hex };

enum class SpaceKind { P, Ptilde, Q, P2dFace };

// Monomial basis spans. Negative degrees yield the empty span.
PolySpan polynomial_space(SpaceKind kind, std::array<int, 3> degrees, Arity arity);

inline PolySpan polynomial_space(SpaceKind kind, int degree, Arity arity)
{
  return polynomial_space(kind, {degree, degree, degree}, arity);
}

// First-family Nedelec shape space: R_r = P_{r-1}^3 + S_r on tets, the
// anisotropic Q_{r-1,r,r} x Q_{r,r-1,r} x Q_{r,r,r-1} product on hexes.
PolySpan nedelec_span(int r, CellType cell);

// Exact integral of p over the reference cell.
Rational exact_integral_reference(const Polynomial& p, CellType cell);
Rational exact_integral_monomial(const MultiIndex& m, CellType cell);

// Span dump for debugging/golden tests: array of basis entries, each a list
// of {component, exponents, numerator, denominator}.
std::string span_to_json(const PolySpan& s);

inline int dim_P3(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) * (k + 3) / 6; }
inline int dim_P2(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }
inline int dim_P1(int k) { return k < 0 ? 0 : k + 1; }

} // namespace graddiv
