#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graddiv/fespace.hpp"

#include <cmath>
#include <random>

using namespace graddiv;

namespace {

std::size_t count_free(const GlobalSpace& s) { return free_dofs(s).size(); }

// physical points strictly inside a mesh face
std::vector<std::array<double, 3>> face_points(const StructuredMesh& mesh, int f)
{
  std::vector<Vec3Q> v;
  for (int id : mesh.faces[f]) v.push_back(mesh.vertex(id));
  auto pt = [&](double s, double t) {
    std::array<double, 3> x;
    for (int i = 0; i < 3; ++i)
      x[i] = to_double(v[0][i]) + s * to_double(v[1][i] - v[0][i]) +
             t * to_double(v[2][i] - v[0][i]);
    return x;
  };
  return {pt(0.25, 0.30), pt(0.10, 0.55), pt(0.40, 0.15)};
}

std::array<double, 3> face_normal(const StructuredMesh& mesh, int f)
{
  std::vector<Vec3Q> v;
  for (int id : mesh.faces[f]) v.push_back(mesh.vertex(id));
  std::array<double, 3> d1, d2;
  for (int i = 0; i < 3; ++i) {
    d1[i] = to_double(v[1][i] - v[0][i]);
    d2[i] = to_double(v[2][i] - v[0][i]);
  }
  return {d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2],
          d1[0] * d2[1] - d1[1] * d2[0]};
}

} // namespace

TEST_CASE("global dof counts")
{
  // one cube cell: 8 vertex div values + 6 face normal moments, all boundary
  auto m1 = build_hex_mesh(1);
  auto w1 = build_space(m1, FEKind::GradDiv, 1, 2);
  CHECK(w1.ndofs == 14);
  CHECK(count_free(w1) == 0);

  auto m2 = build_hex_mesh(2);
  auto w2 = build_space(m2, FEKind::GradDiv, 1, 2);
  CHECK(w2.ndofs == 27 + 36);
  CHECK(count_free(w2) == 13); // 1 interior vertex + 12 interior faces

  auto lag = build_space(m2, FEKind::Lagrange, 1, 0);
  CHECK(lag.ndofs == 27);
  CHECK(count_free(lag) == 1);

  // tet mesh: free count matches the interior entity count
  auto t2 = build_tet_mesh(2);
  auto wt = build_space(t2, FEKind::GradDiv, 1, 2);
  std::size_t int_verts = 0, int_faces = 0;
  for (std::size_t v = 0; v < t2.num_vertices(); ++v)
    if (!t2.vertex_boundary[v]) ++int_verts;
  for (std::size_t f = 0; f < t2.num_faces(); ++f)
    if (!t2.face_boundary[f]) ++int_faces;
  CHECK(wt.ndofs == t2.num_vertices() + t2.num_faces());
  CHECK(count_free(wt) == int_verts + int_faces);
}

TEST_CASE("alternating dimension sum of the complex equals one")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    for (int N : {1, 2}) {
      auto mesh = cell == CellType::Tet ? build_tet_mesh(N) : build_hex_mesh(N);
      for (auto [r, k] : {std::pair{1, 2}, std::pair{2, 2}}) {
        auto sig = build_space(mesh, FEKind::Lagrange, r, 0);
        auto v = build_space(mesh, FEKind::Nedelec, r, 0);
        auto w = build_space(mesh, FEKind::GradDiv, r, k);
        auto sp = build_space(mesh, FEKind::SigmaPlus, 0, k);
        long alt = long(sig.ndofs) - long(v.ndofs) + long(w.ndofs) - long(sp.ndofs);
        CHECK(alt == 1);
      }
    }
  }
}

TEST_CASE("discrete complex is exact on a contractible domain")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    auto mesh = cell == CellType::Tet ? build_tet_mesh(1) : build_hex_mesh(1);
    const int r = 2, k = 2;
    auto sig = build_space(mesh, FEKind::Lagrange, r, 0);
    auto v = build_space(mesh, FEKind::Nedelec, r, 0);
    auto w = build_space(mesh, FEKind::GradDiv, r, k);
    auto sp = build_space(mesh, FEKind::SigmaPlus, 0, k);

    auto g = differential_matrix(sig, v);
    auto c = differential_matrix(v, w);
    auto d = differential_matrix(w, sp);

    // composition identities, exactly
    auto cg = multiply(c, g);
    auto dc = multiply(d, c);
    for (std::size_t i = 0; i < cg.rows(); ++i)
      for (std::size_t j = 0; j < cg.cols(); ++j) REQUIRE(cg(i, j) == 0);
    for (std::size_t i = 0; i < dc.rows(); ++i)
      for (std::size_t j = 0; j < dc.cols(); ++j) REQUIRE(dc(i, j) == 0);

    // exactness: ker grad = constants, ker curl = im grad,
    // ker div = im curl, div onto
    const std::size_t rg = rank_exact(g);
    const std::size_t rc = rank_exact(c);
    const std::size_t rd = rank_exact(d);
    CHECK(rg == sig.ndofs - 1);
    CHECK(v.ndofs - rc == rg);
    CHECK(w.ndofs - rd == rc);
    CHECK(rd == sp.ndofs);
  }
}

TEST_CASE("differential_matrix rejects non-adjacent spaces")
{
  auto mesh = build_hex_mesh(1);
  auto sig = build_space(mesh, FEKind::Lagrange, 1, 0);
  auto w = build_space(mesh, FEKind::GradDiv, 1, 2);
  CHECK_THROWS(differential_matrix(sig, w));
  auto v1 = build_space(mesh, FEKind::Nedelec, 1, 0);
  auto w2 = build_space(mesh, FEKind::GradDiv, 2, 2);
  CHECK_THROWS(differential_matrix(v1, w2)); // degree mismatch
}

TEST_CASE("grad-div conformity: div u continuous, u.n weakly continuous")
{
  // The space is glued so that div u is a continuous (H1) function. The
  // normal component is controlled only through its face moments against
  // P_{r-1}(f) / Q_{r-1,r-1}(f): the jump has vanishing moments.
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    auto mesh = cell == CellType::Tet ? build_tet_mesh(2) : build_hex_mesh(2);
    auto w = build_space(mesh, FEKind::GradDiv, 2, 2);

    std::mt19937 rng(99);
    std::uniform_int_distribution<int> coeff(-5, 5);
    Eigen::VectorXd c(w.ndofs);
    for (std::size_t i = 0; i < w.ndofs; ++i) c[i] = coeff(rng);

    int checked = 0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
      if (mesh.face_cells[f].size() != 2) continue;
      if (++checked > 6) break;
      int ca = mesh.face_cells[f][0], cb = mesh.face_cells[f][1];
      auto n = face_normal(mesh, int(f));

      // pointwise continuity of the divergence
      for (const auto& x : face_points(mesh, int(f))) {
        auto sa = eval_field(w, c, ca, x);
        auto sb = eval_field(w, c, cb, x);
        CHECK(std::abs(sa.divergence - sb.divergence) < 1e-9);
      }

      // weak continuity of u.n: jump moments against 1, s, t vanish
      std::vector<Vec3Q> v;
      for (int id : mesh.faces[f]) v.push_back(mesh.vertex(id));
      auto rule = cell == CellType::Tet ? triangle_rule(5) : square_rule(5);
      double m0 = 0, m1 = 0, m2 = 0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double s = rule.points[q][0], t = rule.points[q][1];
        std::array<double, 3> x;
        for (int i = 0; i < 3; ++i)
          x[i] = to_double(v[0][i]) + s * to_double(v[1][i] - v[0][i]) +
                 t * to_double(v[2][i] - v[0][i]);
        auto sa = eval_field(w, c, ca, x);
        auto sb = eval_field(w, c, cb, x);
        double jump_n = 0;
        for (int i = 0; i < 3; ++i) jump_n += (sa.value[i] - sb.value[i]) * n[i];
        m0 += rule.weights[q] * jump_n;
        m1 += rule.weights[q] * jump_n * s;
        m2 += rule.weights[q] * jump_n * t;
      }
      CHECK(std::abs(m0) < 1e-10);
      CHECK(std::abs(m1) < 1e-10);
      CHECK(std::abs(m2) < 1e-10);
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("Lagrange fields are continuous across faces")
{
  auto mesh = build_tet_mesh(2);
  auto lag = build_space(mesh, FEKind::Lagrange, 2, 0);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coeff(-9, 9);
  Eigen::VectorXd c(lag.ndofs);
  for (std::size_t i = 0; i < lag.ndofs; ++i) c[i] = coeff(rng);

  int checked = 0;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face_cells[f].size() != 2) continue;
    if (++checked > 4) break;
    int ca = mesh.face_cells[f][0], cb = mesh.face_cells[f][1];
    for (const auto& x : face_points(mesh, int(f))) {
      auto sa = eval_field(lag, c, ca, x);
      auto sb = eval_field(lag, c, cb, x);
      CHECK(std::abs(sa.value[0] - sb.value[0]) < 1e-9);
    }
  }
  CHECK(checked > 0);
}
