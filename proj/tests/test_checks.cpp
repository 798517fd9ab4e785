#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graddiv/checks.hpp"

using namespace graddiv;

TEST_CASE("check_element validates the lowest-order elements")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    auto res = check_element(cell, 1, 2);
    CHECK(res.unisolvent_ok);
    CHECK(res.dim_ok);
    CHECK(res.reproduces);
    CHECK(res.local_exact);
    CHECK(res.ok());
    CHECK(res.dim == (cell == CellType::Tet ? 8 : 14));
  }
  // quick mode reports unisolvence and dimensions only
  auto quick = check_element(CellType::Tet, 2, 2, false);
  CHECK(quick.ok());
  CHECK(quick.dim == 16);
}

TEST_CASE("check_complex certifies exactness and commuting on a coarse mesh")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    auto res = check_complex(cell, 1, 1, 2);
    CHECK(res.alternating_sum == 1);
    CHECK(res.comp_cg == 0.0);
    CHECK(res.comp_dc == 0.0);
    CHECK(res.grad_kernel_ok);
    CHECK(res.exact_at_v);
    CHECK(res.exact_at_w);
    CHECK(res.div_onto);
    CHECK(res.commuting_ok);
    CHECK(res.ok());
  }
}

TEST_CASE("seeded fields are deterministic")
{
  auto a = seeded_field(3, 42);
  auto b = seeded_field(3, 42);
  CHECK(a == b);
  auto c = seeded_field(3, 43);
  CHECK(!(a == c));
}

TEST_CASE("solve_quad_div produces consistent solver diagnostics")
{
  auto run = solve_quad_div(CellType::Hex, 2, 1, 2, SolverMethod::Direct, 1e-12, true, true);
  CHECK(run.ndofs == 63);
  CHECK(run.nfree == 13);
  CHECK(run.norms.l2 > 0);
  CHECK(run.dnorms.u > 0);
  CHECK(run.galerkin_residual < 1e-12);
  CHECK(run.solver_rel_diff >= 0);
  CHECK(run.solver_rel_diff < 1e-8);
  CHECK(run.cg_iterations > 0);
}
