#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graddiv/refelem.hpp"

#include <cmath>
#include <random>

using namespace graddiv;

TEST_CASE("sigma_plus_span dimensions")
{
  CHECK(sigma_plus_span(CellType::Tet, 2).dim() == 5);   // P_1 + bubble
  CHECK(sigma_plus_span(CellType::Tet, 3).dim() == 11);  // P_2 + bubble
  CHECK(sigma_plus_span(CellType::Tet, 4).dim() == 21);  // P_3 + bubble
  CHECK(sigma_plus_span(CellType::Tet, 5).dim() == 35);  // P_4, bubble already inside
  CHECK(sigma_plus_span(CellType::Hex, 2).dim() == 9);   // Q_1 + bubble
  CHECK(sigma_plus_span(CellType::Hex, 3).dim() == 27);  // Q_2
  CHECK_THROWS(sigma_plus_span(CellType::Tet, 1));

  // enriched spans keep full rank
  CHECK(span_rank(sigma_plus_span(CellType::Tet, 3)) == 11);
  CHECK(span_rank(sigma_plus_span(CellType::Hex, 2)) == 9);
}

TEST_CASE("shape_span_W dimensions match the closed forms")
{
  // tet values
  CHECK(shape_span_W(CellType::Tet, 1, 2).dim() == 8);
  CHECK(shape_span_W(CellType::Tet, 2, 2).dim() == 16);
  CHECK(shape_span_W(CellType::Tet, 3, 2).dim() == 31);
  CHECK(shape_span_W(CellType::Tet, 4, 5).dim() == 85);
  for (int r = 1; r <= 4; ++r)
    for (int k = 2; k <= 5; ++k)
      CHECK(shape_span_W(CellType::Tet, r, k).dim() == std::size_t(dim_W_tet(r, k)));

  // hex values
  CHECK(shape_span_W(CellType::Hex, 1, 2).dim() == 14);
  CHECK(shape_span_W(CellType::Hex, 2, 2).dim() == 37);
  CHECK(shape_span_W(CellType::Hex, 2, 3).dim() == 55);
  CHECK(shape_span_W(CellType::Hex, 3, 2).dim() == 90);
}

TEST_CASE("divergence of the W span covers sigma_plus exactly")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    for (int r = 1; r <= 2; ++r)
      for (int k = 2; k <= 3; ++k) {
        auto w = shape_span_W(cell, r, k);
        auto sig = sigma_plus_span(cell, k);
        PolySpan divs;
        divs.arity = Arity::Scalar;
        std::size_t nzero = 0;
        for (const auto& v : w.basis) {
          Polynomial d = div(v);
          if (d.is_zero())
            ++nzero;
          else
            divs.push(std::move(d));
        }
        CHECK(span_rank(divs) == sig.dim());
        CHECK(nzero == w.dim() - sig.dim());
      }
  }
}

TEST_CASE("gradients of Lagrange lie in the Nedelec span")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    for (int r = 1; r <= 3; ++r) {
      auto lag = polynomial_space(cell == CellType::Tet ? SpaceKind::P : SpaceKind::Q, r,
                                  Arity::Scalar);
      auto ned = nedelec_span(r, cell);
      PolySpan grads;
      grads.arity = Arity::Vector;
      for (const auto& v : lag.basis) {
        auto g = grad(v.c[0]);
        if (!g.is_zero()) grads.push(std::move(g));
      }
      PolySpan unionspan = ned;
      for (const auto& g : grads.basis) unionspan.basis.push_back(g);
      CHECK(span_rank(unionspan) == ned.dim()); // no new directions
    }
  }
}

TEST_CASE("reference geometry entities")
{
  auto tet = reference_geometry(CellType::Tet);
  CHECK(tet.verts.size() == 4);
  CHECK(tet.edges.size() == 6);
  CHECK(tet.faces.size() == 4);
  auto hex = reference_geometry(CellType::Hex);
  CHECK(hex.verts.size() == 8);
  CHECK(hex.edges.size() == 12);
  CHECK(hex.faces.size() == 6);
  // entity vertices are sorted by the (z,y,x) key
  for (const auto& f : hex.faces) {
    for (std::size_t i = 0; i + 1 < f.lv.size(); ++i) {
      const Vec3Q& a = hex.verts[f.lv[i]];
      const Vec3Q& b = hex.verts[f.lv[i + 1]];
      bool less = (a[2] != b[2]) ? a[2] < b[2] : (a[1] != b[1]) ? a[1] < b[1] : a[0] < b[0];
      CHECK(less);
    }
  }
}

TEST_CASE("reference elements are unisolvent")
{
  for (int r = 1; r <= 3; ++r) {
    CHECK(unisolvent(make_reference_element(FEKind::Lagrange, CellType::Tet, r, 0)));
    CHECK(unisolvent(make_reference_element(FEKind::Lagrange, CellType::Hex, r, 0)));
    CHECK(unisolvent(make_reference_element(FEKind::Nedelec, CellType::Tet, r, 0)));
    CHECK(unisolvent(make_reference_element(FEKind::Nedelec, CellType::Hex, r, 0)));
  }
  for (int k = 2; k <= 5; ++k)
    CHECK(unisolvent(make_reference_element(FEKind::SigmaPlus, CellType::Tet, 0, k)));
  for (int k = 2; k <= 4; ++k)
    CHECK(unisolvent(make_reference_element(FEKind::SigmaPlus, CellType::Hex, 0, k)));

  for (int r = 1; r <= 4; ++r)
    for (int k = 2; k <= 5; ++k)
      CHECK(unisolvent(make_reference_element(FEKind::GradDiv, CellType::Tet, r, k)));
  for (int r = 1; r <= 3; ++r)
    for (int k = 2; k <= 4; ++k)
      CHECK(unisolvent(make_reference_element(FEKind::GradDiv, CellType::Hex, r, k)));
}

TEST_CASE("nodal basis satisfies the duality property exactly")
{
  for (CellType cell : {CellType::Tet, CellType::Hex}) {
    auto elem = make_reference_element(FEKind::GradDiv, cell, 2, 2);
    auto basis = build_nodal_basis(elem);
    REQUIRE(basis.exact);
    const std::size_t n = elem.span.dim();
    // nodal_j = sum_i coeff(i,j) span_i; dof_a(nodal_j) must be delta_aj
    for (std::size_t j = 0; j < n; j += 3) { // sampled columns for speed
      VectorPolynomial nodal;
      for (std::size_t i = 0; i < n; ++i)
        nodal += elem.span.basis[i] * basis.coeff_exact(i, j);
      for (std::size_t a = 0; a < n; ++a) {
        Rational v = apply_dof(elem, elem.dofs[a], nodal);
        CHECK(v == Rational(a == j ? 1 : 0));
      }
    }
  }
}

TEST_CASE("class representative elements on structured meshes")
{
  auto tet_mesh = build_tet_mesh(2);
  for (int cls = 0; cls < 6; ++cls) {
    auto geom = geometry_from_map(CellType::Tet, class_map(tet_mesh, cls));
    auto elem = make_element(FEKind::GradDiv, geom, 2, 2);
    CHECK(elem.span.dim() == 16);
    CHECK(unisolvent(elem));
    CHECK_NOTHROW(build_nodal_basis(elem));
  }
  auto hex_mesh = build_hex_mesh(3);
  auto geom = geometry_from_map(CellType::Hex, class_map(hex_mesh, 0));
  auto elem = make_element(FEKind::GradDiv, geom, 1, 2);
  CHECK(elem.span.dim() == 14);
  CHECK(unisolvent(elem));
}

TEST_CASE("translated cells evaluate shared-entity functionals identically")
{
  // On a tet mesh, a face shared by two cells receives identical entity
  // frames from both sides, so the same field yields the same moments.
  auto mesh = build_tet_mesh(2);
  int shared_face = -1;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f)
    if (mesh.face_cells[f].size() == 2) {
      shared_face = int(f);
      break;
    }
  REQUIRE(shared_face >= 0);
  int ca = mesh.face_cells[shared_face][0];
  int cb = mesh.face_cells[shared_face][1];

  auto geom_a = geometry_from_map(CellType::Tet, affine_map(mesh, ca));
  auto geom_b = geometry_from_map(CellType::Tet, affine_map(mesh, cb));
  auto elem_a = make_element(FEKind::GradDiv, geom_a, 2, 2);
  auto elem_b = make_element(FEKind::GradDiv, geom_b, 2, 2);

  // identify the local face index in each cell by vertex coordinates
  auto face_verts = [&](const CellGeometry& g, int lf) {
    std::vector<Vec3Q> out;
    for (int lv : g.faces[lf].lv) out.push_back(g.verts[lv]);
    return out;
  };
  std::vector<Vec3Q> target;
  for (int v : mesh.faces[shared_face]) target.push_back(mesh.vertex(v));
  int lf_a = -1, lf_b = -1;
  for (int lf = 0; lf < 4; ++lf) {
    if (face_verts(geom_a, lf) == target) lf_a = lf;
    if (face_verts(geom_b, lf) == target) lf_b = lf;
  }
  REQUIRE(lf_a >= 0);
  REQUIRE(lf_b >= 0);

  // a fixed polynomial field, its face normal moments from either cell
  VectorPolynomial field{Polynomial::variable(0) * Polynomial::variable(1),
                         Polynomial::variable(2) * Polynomial::variable(2),
                         Polynomial::variable(0) + Polynomial::variable(2)};
  for (const auto& dof : elem_a.dofs) {
    if (dof.entity_dim != 2 || dof.entity != lf_a) continue;
    for (const auto& dof_b : elem_b.dofs) {
      if (dof_b.entity_dim != 2 || dof_b.entity != lf_b) continue;
      if (dof_b.kind != dof.kind || dof_b.weight_index != dof.weight_index) continue;
      CHECK(apply_dof(elem_a, dof, field) == apply_dof(elem_b, dof_b, field));
    }
  }
}

TEST_CASE("numeric DOF application agrees with the exact one")
{
  auto mesh = build_tet_mesh(2);
  auto geom = geometry_from_map(CellType::Tet, affine_map(mesh, 3));
  auto elem = make_element(FEKind::GradDiv, geom, 2, 3);

  VectorPolynomial field{Polynomial::variable(0) * Polynomial::variable(0),
                         Polynomial::variable(1) * Polynomial::variable(2),
                         Polynomial::variable(2) * Polynomial::variable(0)};
  Polynomial dv = div(field);
  auto value = [&](const std::array<double, 3>& x) { return field.eval(x); };
  auto divergence = [&](const std::array<double, 3>& x) { return dv.eval(x); };

  for (const auto& dof : elem.dofs) {
    double exact = to_double(apply_dof(elem, dof, field));
    double numeric = apply_dof(elem, dof, value, divergence, 6);
    CHECK(std::abs(exact - numeric) < 1e-12);
  }

  // the Lagrange kinds as well
  auto lelem = make_element(FEKind::Lagrange, geom, 3, 0);
  VectorPolynomial scalar;
  scalar.c[0] = Polynomial::variable(0) * Polynomial::variable(1) + Polynomial::variable(2);
  auto svalue = [&](const std::array<double, 3>& x) {
    return std::array<double, 3>{scalar.c[0].eval(x), 0.0, 0.0};
  };
  for (const auto& dof : lelem.dofs) {
    double exact = to_double(apply_dof(lelem, dof, scalar));
    double numeric = apply_dof(lelem, dof, svalue, divergence, 6);
    CHECK(std::abs(exact - numeric) < 1e-12);
  }
}

TEST_CASE("error paths")
{
  CHECK_THROWS(make_reference_element(FEKind::Nedelec, CellType::Tet, 0, 0));
  CHECK_THROWS(make_reference_element(FEKind::SigmaPlus, CellType::Tet, 0, 1));
  CHECK_THROWS(make_reference_element(FEKind::GradDiv, CellType::Tet, 0, 2));
}

TEST_CASE("element JSON export")
{
  auto elem = make_reference_element(FEKind::GradDiv, CellType::Tet, 1, 2);
  auto basis = build_nodal_basis(elem);
  auto j = element_to_json(elem, basis);
  CHECK(j.find("graddiv") != std::string::npos);
  CHECK(j.find("nodal_coefficients") != std::string::npos);
  CHECK(basis.condition > 0);
}
