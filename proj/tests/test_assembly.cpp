#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graddiv/assembly.hpp"
#include "graddiv/fields.hpp"
#include "graddiv/solver.hpp"
#include "graddiv/spaces.hpp"

#include <cmath>
#include <random>

using namespace graddiv;

TEST_CASE("ManufacturedEval matches exact rational evaluation")
{
  // The monomial-expanded polynomials are kept exact; evaluating them at
  // rational points gives a reference unaffected by the cancellation that a
  // naive double monomial sweep suffers from (coefficients up to ~1e6
  // cancelling to ~1e-10). The factored evaluator must agree to absolute
  // 1e-12, which is roundoff scale for its O(1)-sized intermediates.
  auto mp = manufactured_problem();
  ManufacturedEval ev;
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(1, 63);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3Q xq{Rational(num(rng), 64), Rational(num(rng), 64), Rational(num(rng), 64)};
    const std::array<double, 3> x{to_double(xq[0]), to_double(xq[1]), to_double(xq[2])};
    auto uf = ev.u(x);
    auto gf = ev.grad_div_u(x);
    auto ff = ev.f(x);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(uf[i] - to_double(mp.u.c[i].eval(xq))) < 1e-12);
      CHECK(std::abs(gf[i] - to_double(mp.grad_div_u.c[i].eval(xq))) < 1e-12);
      CHECK(std::abs(ff[i] - to_double(mp.f.c[i].eval(xq))) < 1e-12);
    }
    CHECK(std::abs(ev.div_u(x) - to_double(mp.div_u.eval(xq))) < 1e-12);
  }
  CHECK(ManufacturedEval::f_degree == mp.f.degree());
}

TEST_CASE("local quad-div matrices match exact rational integration")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    auto mesh = cell == CellType::Tet ? build_tet_mesh(2) : build_hex_mesh(2);
    auto w = build_space(mesh, FEKind::GradDiv, 1, 2);
    auto locals = local_quad_div_matrices(w);

    for (int cls : {0, num_cell_classes(mesh) - 1}) {
      const auto& map = w.class_elems[cls].geom.map;
      std::array<std::array<Rational, 4>, 3> rows;
      for (int i = 0; i < 3; ++i) {
        rows[i][0] = map.b[i];
        for (int j = 0; j < 3; ++j) rows[i][1 + j] = map.B[i][j];
      }
      const Rational adet = map.det < 0 ? -map.det : map.det;

      const auto& nodal = w.class_nodal[cls];
      for (std::size_t i = 0; i < nodal.size(); ++i)
        for (std::size_t j = i; j < nodal.size(); ++j) {
          Polynomial p;
          VectorPolynomial gi = grad(w.class_nodal_div[cls][i]);
          VectorPolynomial gj = grad(w.class_nodal_div[cls][j]);
          for (int c = 0; c < 3; ++c) p += nodal[i].c[c] * nodal[j].c[c] + gi.c[c] * gj.c[c];
          const Rational exact = adet * exact_integral_reference(p.compose_affine(rows), cell);
          CHECK(locals[cls](i, j) == doctest::Approx(to_double(exact)).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("assembled system is symmetric and zero data gives zero solution")
{
  auto mesh = build_hex_mesh(2);
  auto w = build_space(mesh, FEKind::GradDiv, 1, 2);
  auto zero = [](const std::array<double, 3>&) { return std::array<double, 3>{0, 0, 0}; };
  auto sys = assemble_quad_div(w, zero, 0);
  CHECK(sys.dim() == 13);
  Eigen::MatrixXd dense = Eigen::MatrixXd(sys.A);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // SPD: Cholesky succeeds and the zero load yields the zero solution
  auto x = solve_system(sys, SolverMethod::Direct, 1e-12);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("direct and CG solutions agree on the manufactured problem")
{
  ManufacturedEval ev;
  auto fval = [&](const std::array<double, 3>& x) { return ev.f(x); };
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    auto mesh = cell == CellType::Tet ? build_tet_mesh(2) : build_hex_mesh(3);
    auto w = build_space(mesh, FEKind::GradDiv, 1, 2);
    auto sys = assemble_quad_div(w, fval, ManufacturedEval::f_degree);

    SolveReport rd, rc;
    auto xd = solve_system(sys, SolverMethod::Direct, 1e-12, &rd);
    auto xc = solve_system(sys, SolverMethod::CG, 1e-14, &rc);
    REQUIRE(rd.converged);
    REQUIRE(rc.converged);
    CHECK(rc.iterations > 0);
    CHECK(rd.residual < 1e-12);
    const double rel = (xd - xc).norm() / xd.norm();
    CHECK(rel < 1e-8);

    // Galerkin residual on the full system
    CHECK((sys.A * xd - sys.rhs).norm() / sys.rhs.norm() < 1e-12);
  }
}

TEST_CASE("load quadrature is converged: doubling the rule changes nothing")
{
  ManufacturedEval ev;
  auto fval = [&](const std::array<double, 3>& x) { return ev.f(x); };
  auto mesh = build_hex_mesh(2);
  auto w = build_space(mesh, FEKind::GradDiv, 1, 2);
  auto a = assemble_quad_div(w, fval, ManufacturedEval::f_degree);
  auto b = assemble_quad_div(w, fval, ManufacturedEval::f_degree, 16);
  CHECK((a.rhs - b.rhs).cwiseAbs().maxCoeff() < 1e-14 * a.rhs.cwiseAbs().maxCoeff());
}
