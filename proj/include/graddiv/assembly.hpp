// Assembly of the quad-div model problem
//   a(u, v) = (grad(div u), grad(div v)) + (u, v),  F(v) = (f, v)
// on a grad-div conforming space, with homogeneous essential conditions
// imposed by eliminating boundary-entity DOFs.
#pragma once

#include "graddiv/fespace.hpp"

#include <Eigen/Sparse>

#include <functional>

namespace graddiv {

// Flattened polynomial for fast repeated evaluation at many points.
class FastPoly {
public:
  FastPoly() = default;
  explicit FastPoly(const Polynomial& p);

  // powers[i][e] must hold x_i^e for e = 0..max_degree()
  double eval(const std::array<std::vector<double>, 3>& powers) const;
  int max_degree() const { return max_deg_; }

private:
  struct Term {
    std::array<int, 3> e;
    double c;
  };
  std::vector<Term> terms_;
  int max_deg_ = 0;
};

struct FastVectorPoly {
  std::array<FastPoly, 3> c;
  explicit FastVectorPoly(const VectorPolynomial& v)
      : c{FastPoly(v.c[0]), FastPoly(v.c[1]), FastPoly(v.c[2])}
  {
  }
  FastVectorPoly() = default;
};

struct LinearSystem {
  Eigen::SparseMatrix<double> A; // SPD, restricted to free DOFs
  Eigen::VectorXd rhs;
  std::vector<int> free;     // free index -> global DOF index
  std::size_t total_dofs = 0;

  std::size_t dim() const { return free.size(); }
};

// Local matrices of a(.,.) per cell class, computed with Gauss rules exact
// for the polynomial integrands (so exact up to roundoff).
std::vector<Eigen::MatrixXd> local_quad_div_matrices(const GlobalSpace& w);

using PointFn = std::function<std::array<double, 3>(const std::array<double, 3>&)>;

// Assemble stiffness and load. The load uses a Gauss rule exact for data of
// total degree f_degree against the local basis; load_points > 0 overrides
// the number of 1D points per direction.
LinearSystem assemble_quad_div(const GlobalSpace& w, const PointFn& f, int f_degree,
                               int load_points = 0);

// Scatter a free-DOF vector back to all DOFs (boundary values zero).
Eigen::VectorXd expand_free(const LinearSystem& sys, const Eigen::VectorXd& xfree);

} // namespace graddiv
