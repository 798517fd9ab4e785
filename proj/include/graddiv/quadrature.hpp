// Gauss rules: Legendre/Jacobi via Golub-Welsch, Lobatto, tensor rules on
// the cube, and conical-product rules on the reference tetrahedron.
#pragma once

#include "graddiv/spaces.hpp"

#include <array>
#include <vector>

namespace graddiv {

struct Rule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

struct QuadratureRule {
  std::vector<std::array<double, 3>> points; // reference coordinates
  std::vector<double> weights;
  int degree = 0; // advertised exactness (total degree)

  std::size_t size() const { return points.size(); }
};

// n-point Gauss-Legendre on [0,1]; exact for degree <= 2n-1.
Rule1D gauss_legendre_01(int n);

// n-point Gauss-Jacobi on [0,1] with weight (1-x)^alpha folded into the
// weights; exact for degree <= 2n-1.
Rule1D gauss_jacobi_01(int n, int alpha);

// n-point Gauss-Lobatto on [-1,1] (n >= 2); exact for degree <= 2n-3.
Rule1D gauss_lobatto(int n);

// Tensor rule on the unit cube exact for total degree <= 2n-1.
QuadratureRule hex_rule(int n);

// Conical-product rule on the reference tetrahedron, exact for total
// degree <= 2n-1.
QuadratureRule tet_rule(int n);

// 2D rules on the unit square / reference triangle (z coordinate unused).
QuadratureRule square_rule(int n);
QuadratureRule triangle_rule(int n);

// Cell rule exact for the requested total degree.
QuadratureRule cell_rule(CellType cell, int degree);

} // namespace graddiv
