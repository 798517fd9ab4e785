#include "graddiv/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace graddiv {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1].
Rule1D gauss_jacobi_pm1(int n, double alpha, double beta)
{
  if (n < 1) throw std::invalid_argument("quadrature: need at least one point");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    double denom = (2 * k + ab) * (2 * k + ab + 2);
    double a = (k == 0 && ab == 0) ? 0.0
                                   : (beta * beta - alpha * alpha) /
                                         (denom == 0 ? 1.0 : denom);
    if (k == 0) a = (beta - alpha) / (ab + 2);
    jac(k, k) = a;
    if (k + 1 < n) {
      int kk = k + 1;
      double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
      double den = std::pow(2 * kk + ab, 2) * (2 * kk + ab + 1) * (2 * kk + ab - 1);
      double b = std::sqrt(num / den);
      jac(k, k + 1) = b;
      jac(k + 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  const double mu0 = std::pow(2.0, ab + 1) * std::tgamma(alpha + 1) * std::tgamma(beta + 1) /
                     std::tgamma(ab + 2);
  Rule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

double legendre(int n, double x)
{
  double p0 = 1.0, p1 = x;
  if (n == 0) return p0;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

} // namespace

Rule1D gauss_legendre_01(int n)
{
  Rule1D r = gauss_jacobi_pm1(n, 0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    r.points[i] = 0.5 * (r.points[i] + 1.0);
    r.weights[i] *= 0.5;
  }
  return r;
}

Rule1D gauss_jacobi_01(int n, int alpha)
{
  Rule1D r = gauss_jacobi_pm1(n, double(alpha), 0.0);
  const double scale = std::pow(0.5, alpha + 1);
  for (int i = 0; i < n; ++i) {
    r.points[i] = 0.5 * (r.points[i] + 1.0);
    r.weights[i] *= scale;
  }
  return r;
}

Rule1D gauss_lobatto(int n)
{
  if (n < 2) throw std::invalid_argument("gauss_lobatto: n >= 2 required");
  Rule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.points[0] = -1.0;
  rule.points[n - 1] = 1.0;
  if (n > 2) {
    Rule1D interior = gauss_jacobi_pm1(n - 2, 1.0, 1.0);
    for (int i = 0; i < n - 2; ++i) rule.points[i + 1] = interior.points[i];
  }
  const double c = 2.0 / (n * (n - 1));
  for (int i = 0; i < n; ++i) {
    double p = legendre(n - 1, rule.points[i]);
    rule.weights[i] = c / (p * p);
  }
  return rule;
}

QuadratureRule hex_rule(int n)
{
  Rule1D g = gauss_legendre_01(n);
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        rule.points.push_back({g.points[i], g.points[j], g.points[k]});
        rule.weights.push_back(g.weights[i] * g.weights[j] * g.weights[k]);
      }
  return rule;
}

QuadratureRule tet_rule(int n)
{
  // x = u, y = v(1-u), z = w(1-u)(1-v); Jacobian (1-u)^2 (1-v)
  Rule1D gu = gauss_jacobi_01(n, 2);
  Rule1D gv = gauss_jacobi_01(n, 1);
  Rule1D gw = gauss_legendre_01(n);
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double u = gu.points[i], v = gv.points[j], w = gw.points[k];
        rule.points.push_back({u, v * (1 - u), w * (1 - u) * (1 - v)});
        rule.weights.push_back(gu.weights[i] * gv.weights[j] * gw.weights[k]);
      }
  return rule;
}

QuadratureRule square_rule(int n)
{
  Rule1D g = gauss_legendre_01(n);
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rule.points.push_back({g.points[i], g.points[j], 0.0});
      rule.weights.push_back(g.weights[i] * g.weights[j]);
    }
  return rule;
}

QuadratureRule triangle_rule(int n)
{
  Rule1D gu = gauss_jacobi_01(n, 1);
  Rule1D gv = gauss_legendre_01(n);
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u = gu.points[i], v = gv.points[j];
      rule.points.push_back({u, v * (1 - u), 0.0});
      rule.weights.push_back(gu.weights[i] * gv.weights[j]);
    }
  return rule;
}

QuadratureRule cell_rule(CellType cell, int degree)
{
  int n = degree / 2 + 1;
  return cell == CellType::Tet ? tet_rule(n) : hex_rule(n);
}

} // namespace graddiv
