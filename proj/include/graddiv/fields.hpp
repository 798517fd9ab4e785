// Manufactured data for the quad-div model problem
//   (grad div)^2 u + u = f  in (0,1)^3,
//   u.n = 0, div u = 0      on the boundary.
// The exact solution is a gradient field with polynomial components, so
// every derived quantity stays exact.
#pragma once

#include "graddiv/polynomial.hpp"

namespace graddiv {

inline Polynomial laplacian(const Polynomial& p)
{
  return p.derivative(0).derivative(0) + p.derivative(1).derivative(1) +
         p.derivative(2).derivative(2);
}

struct ModelProblem {
  Polynomial phi;              // potential, u = grad phi
  VectorPolynomial u;          // exact solution
  Polynomial div_u;            // laplacian of phi
  VectorPolynomial grad_div_u; // gradient of div u
  VectorPolynomial f;          // right-hand side grad(lap^2 phi) + u
};

// phi = x^3 (x-1)^3 y^3 (y-1)^3 z^3 (z-1)^3: the triple roots make both
// u.n and div u vanish identically on the boundary of the unit cube.
ModelProblem manufactured_problem();

// Fast pointwise evaluation of the manufactured data. phi = a(x)a(y)a(z)
// with a(t) = t^3 (t-1)^3, so every derived field is a short sum of
// separable products of derivatives of a; each evaluation costs a handful
// of Horner steps instead of a generic polynomial sweep.
class ManufacturedEval {
public:
  ManufacturedEval();

  std::array<double, 3> u(const std::array<double, 3>& x) const;
  double div_u(const std::array<double, 3>& x) const;
  std::array<double, 3> grad_div_u(const std::array<double, 3>& x) const;
  std::array<double, 3> f(const std::array<double, 3>& x) const;

  static constexpr int f_degree = 17;

private:
  // coef_[d] holds the coefficients of a^(d), highest power first
  std::array<std::array<double, 7>, 6> coef_{};

  double a(int d, double t) const
  {
    double v = 0;
    for (double c : coef_[d]) v = v * t + c;
    return v;
  }
  // derivatives of a at the three coordinates: tab[d][i] = a^(d)(x_i)
  void table(const std::array<double, 3>& x, double tab[6][3]) const
  {
    for (int d = 0; d < 6; ++d)
      for (int i = 0; i < 3; ++i) tab[d][i] = a(d, x[i]);
  }
};

} // namespace graddiv
