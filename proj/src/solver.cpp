#include "graddiv/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <stdexcept>

namespace graddiv {

Eigen::VectorXd solve_system(const LinearSystem& sys, SolverMethod method, double tol,
                             SolveReport* report)
{
  Eigen::VectorXd x;
  SolveReport rep;
  rep.method = method;

  if (method == SolverMethod::Direct) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.A);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("solve_system: Cholesky factorization failed");
    x = llt.solve(sys.rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg(sys.A);
    cg.setTolerance(tol);
    cg.setMaxIterations(Eigen::Index(std::min<std::size_t>(50 * sys.dim() + 100, 2000000)));
    x = cg.solve(sys.rhs);
    rep.iterations = int(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw std::runtime_error("solve_system: CG did not converge");
  }

  const double bnorm = sys.rhs.norm();
  rep.residual = bnorm > 0 ? (sys.A * x - sys.rhs).norm() / bnorm : 0.0;
  rep.converged = true;
  if (report) *report = rep;
  return x;
}

} // namespace graddiv
