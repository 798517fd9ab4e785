// Error measurement for the quad-div problem: global L2-type norms, the
// discrete U/V/W norms used for superconvergence studies on cuboid meshes,
// convergence rates, and table serialization (CSV, markdown, gnuplot data).
#pragma once

#include "graddiv/fespace.hpp"
#include "graddiv/fields.hpp"

#include <functional>
#include <string>
#include <vector>

namespace graddiv {

// Pointwise-evaluable reference field: value, divergence, and the gradient
// of the divergence.
struct FieldEval {
  std::function<std::array<double, 3>(const std::array<double, 3>&)> value;
  std::function<double(const std::array<double, 3>&)> divergence;
  std::function<std::array<double, 3>(const std::array<double, 3>&)> grad_divergence;
};

inline FieldEval make_field(const ManufacturedEval& m)
{
  return {[&m](const std::array<double, 3>& x) { return m.u(x); },
          [&m](const std::array<double, 3>& x) { return m.div_u(x); },
          [&m](const std::array<double, 3>& x) { return m.grad_div_u(x); }};
}

inline FieldEval zero_field()
{
  return {[](const std::array<double, 3>&) { return std::array<double, 3>{0, 0, 0}; },
          [](const std::array<double, 3>&) { return 0.0; },
          [](const std::array<double, 3>&) { return std::array<double, 3>{0, 0, 0}; }};
}

struct ErrorNorms {
  double l2 = 0;     // ||e||
  double div_l2 = 0; // ||div e||
  double div_h1 = 0; // |div e|_1 = ||grad(div e)||
};

// e = u_h - u with u_h given by coeffs; cellwise Gauss quadrature with n1d
// points per direction (0 picks a rule matched to the data degree).
ErrorNorms error_norms(const GlobalSpace& w, const Eigen::VectorXd& coeffs,
                       const FieldEval& exact, int n1d = 0);

struct DiscreteNorms {
  double u = 0; // |||div e|||_U : div e sampled at tensor Lobatto points
  double v = 0; // |||e|||_V     : line L2 norms at transverse Gauss stations
  double w = 0; // |||grad(div e)|||_W : plane L2 norms at Gauss stations
};

// Cuboid meshes only; throws std::invalid_argument on tet meshes. n1d
// controls the line/plane integration rule (0 picks a matched rule).
DiscreteNorms discrete_norms(const GlobalSpace& w, const Eigen::VectorXd& coeffs,
                             const FieldEval& exact, int n1d = 0);

// log(v0/v1) / log(h0/h1)
double convergence_rate(double v0, double v1, double h0, double h1);

// One row per mesh, one value column per norm; rates between consecutive
// rows (first row has no rate).
struct RateTable {
  std::vector<std::string> norms;
  std::vector<int> N;
  std::vector<double> h;
  std::vector<std::vector<double>> values; // [row][col]
  std::vector<std::vector<double>> rates;  // [row][col], row 0 unset (NaN)

  void add_row(int n, double hh, const std::vector<double>& vals);
};

// CSV with header N,h,norm,value,rate (rate empty on the first row).
std::string to_csv(const RateTable& t);
// Aligned markdown mirroring the value/rate column pairs.
std::string to_markdown(const RateTable& t);
// gnuplot-ready: h then one column per norm, log-log friendly.
std::string to_dat(const RateTable& t);

} // namespace graddiv
