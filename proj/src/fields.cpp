#include "graddiv/fields.hpp"

namespace graddiv {

ModelProblem manufactured_problem()
{
  ModelProblem mp;
  mp.phi = Polynomial(Rational(1));
  for (int i = 0; i < 3; ++i) {
    const Polynomial xi = Polynomial::variable(i);
    const Polynomial xm1 = xi - Polynomial(Rational(1));
    mp.phi = mp.phi * (xi * xi * xi) * (xm1 * xm1 * xm1);
  }
  mp.u = grad(mp.phi);
  mp.div_u = laplacian(mp.phi);
  mp.grad_div_u = grad(mp.div_u);
  mp.f = grad(laplacian(mp.div_u)) + mp.u;
  return mp;
}

ManufacturedEval::ManufacturedEval()
{
  // a(t) = t^6 - 3 t^5 + 3 t^4 - t^3, ascending coefficients
  std::array<double, 7> asc{0, 0, 0, -1, 3, -3, 1};
  for (int d = 0; d < 6; ++d) {
    for (int i = 0; i < 7; ++i) coef_[d][i] = asc[6 - i]; // descending for Horner
    std::array<double, 7> next{};
    for (int j = 0; j < 6; ++j) next[j] = (j + 1) * asc[j + 1];
    asc = next;
  }
}

std::array<double, 3> ManufacturedEval::u(const std::array<double, 3>& x) const
{
  double t[6][3];
  table(x, t);
  return {t[1][0] * t[0][1] * t[0][2], t[0][0] * t[1][1] * t[0][2], t[0][0] * t[0][1] * t[1][2]};
}

double ManufacturedEval::div_u(const std::array<double, 3>& x) const
{
  double t[6][3];
  table(x, t);
  return t[2][0] * t[0][1] * t[0][2] + t[0][0] * t[2][1] * t[0][2] + t[0][0] * t[0][1] * t[2][2];
}

std::array<double, 3> ManufacturedEval::grad_div_u(const std::array<double, 3>& x) const
{
  double t[6][3];
  table(x, t);
  std::array<double, 3> g;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    g[i] = t[3][i] * t[0][j] * t[0][k] + t[1][i] * (t[2][j] * t[0][k] + t[0][j] * t[2][k]);
  }
  return g;
}

std::array<double, 3> ManufacturedEval::f(const std::array<double, 3>& x) const
{
  double t[6][3];
  table(x, t);
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    // d/dx_i of (lap^2 phi + phi)
    out[i] = t[5][i] * t[0][j] * t[0][k] +
             t[1][i] * (t[4][j] * t[0][k] + t[0][j] * t[4][k] + 2 * t[2][j] * t[2][k] +
                        t[0][j] * t[0][k]) +
             2 * t[3][i] * (t[2][j] * t[0][k] + t[0][j] * t[2][k]);
  }
  return out;
}

} // namespace graddiv
