// Linear solvers for the assembled SPD systems: sparse Cholesky and
// Jacobi-preconditioned conjugate gradients.
#pragma once

#include "graddiv/assembly.hpp"

namespace graddiv {

enum class SolverMethod { Direct, CG };

struct SolveReport {
  SolverMethod method = SolverMethod::Direct;
  int iterations = 0;    // 0 for the direct solver
  double residual = 0.0; // relative |A x - b| / |b|
  bool converged = false;
};

// Solve on the free DOFs; tol is the relative residual target for CG
// (ignored by the direct solver). Throws on factorization failure or CG
// stagnation.
Eigen::VectorXd solve_system(const LinearSystem& sys, SolverMethod method, double tol,
                             SolveReport* report = nullptr);

} // namespace graddiv
