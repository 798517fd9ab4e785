// Verification routines shared by the command line front-end and the
// acceptance suite: reference-element checks, global complex checks, and
// quad-div solves with error reporting.
#pragma once

#include "graddiv/analysis.hpp"
#include "graddiv/solver.hpp"

#include <string>

namespace graddiv {

struct ElementCheck {
  CellType cell;
  int r = 0, k = 0;
  std::size_t dim = 0;
  bool unisolvent_ok = false; // exact full-rank Vandermonde
  bool dim_ok = false;        // matches the closed-form count (tets)
  bool reproduces = false;    // interpolation reproduces vector P_{r-1}
  bool local_exact = false;   // div maps the shape span onto Sigma+

  bool ok() const { return unisolvent_ok && dim_ok && reproduces && local_exact; }
};

// Reference-element verification for W^{r-1,k} on one cell type. thorough
// adds the exact reproduction and local-exactness checks, which need the
// inverse Vandermonde; without it those fields report true untested.
ElementCheck check_element(CellType cell, int r, int k, bool thorough = true);

struct ComplexCheck {
  CellType cell;
  int N = 0, r = 0, k = 0;
  std::size_t dim_sigma = 0, dim_v = 0, dim_w = 0, dim_sigma_plus = 0;
  long alternating_sum = 0; // expect 1 (constants survive)
  double comp_cg = 0;       // max |curl o grad| entry
  double comp_dc = 0;       // max |div o curl| entry
  bool grad_kernel_ok = false; // ker grad = constants
  bool exact_at_v = false;     // im grad = ker curl
  bool exact_at_w = false;     // im curl = ker div
  bool div_onto = false;       // rank div = dim Sigma+
  bool commuting_ok = false;   // Lemma identities for a seeded field

  bool ok() const
  {
    return alternating_sum == 1 && comp_cg <= 1e-12 && comp_dc <= 1e-12 && grad_kernel_ok &&
           exact_at_v && exact_at_w && div_onto && commuting_ok;
  }
};

// Global de Rham complex verification on an N^3 structured mesh. Rank
// identities are certified through modular rank bounds (a modular rank is a
// lower bound; hitting the dimension-count ceiling proves exactness).
// with_commuting = false skips the seeded commuting-diagram check and
// reports it as passing untested.
ComplexCheck check_complex(CellType cell, int N, int r, int k, bool with_commuting = true);

struct SolveRun {
  int N = 0;
  double h = 0;
  std::size_t ndofs = 0, nfree = 0;
  int cg_iterations = 0;
  double galerkin_residual = 0; // relative residual of the reported solution
  double other_residual = -1;   // residual of the comparison solve, when run
  double solver_rel_diff = -1;  // direct vs CG, when both are run
  ErrorNorms norms;
  DiscreteNorms dnorms; // cuboid meshes only
  double seconds = 0;    // total, including the comparison solve
  double cg_seconds = 0; // time spent in the comparison solve
};

// Assemble and solve the quad-div problem with the manufactured solution,
// then measure errors. with_discrete adds the U/V/W norms (hex only);
// compare_solvers runs both methods and records their relative difference.
SolveRun solve_quad_div(CellType cell, int N, int r, int k, SolverMethod method, double tol,
                        bool with_discrete, bool compare_solvers = false);

// Deterministic polynomial field with small rational coefficients, used for
// seeded commuting and reproduction checks.
VectorPolynomial seeded_field(int degree, unsigned seed);

// Seeded element of vector P_{r-1}.
VectorPolynomial seeded_poly_field(int degree_max, unsigned seed);

const char* cell_name(CellType cell);

} // namespace graddiv
