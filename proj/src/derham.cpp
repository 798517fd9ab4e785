#include "graddiv/derham.hpp"

#include <stdexcept>

namespace graddiv {

std::vector<Rational> interpolate_exact(const GlobalSpace& s, const VectorPolynomial& field)
{
  const StructuredMesh& mesh = *s.mesh;
  std::vector<Rational> coeffs(s.ndofs, Rational(0));
  std::vector<bool> seen(s.ndofs, false);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& elem = s.class_elems[mesh.cells[c].class_id];
    auto geom = geometry_from_map(mesh.cell_type, affine_map(mesh, int(c)));
    auto values = apply_dofs(geom, elem.dofs, field);
    for (std::size_t a = 0; a < elem.dofs.size(); ++a) {
      const std::size_t g = std::size_t(s.cell_dofs[c][a]);
      const Rational& v = values[a];
      if (seen[g]) {
        if (coeffs[g] != v)
          throw std::logic_error("interpolate_exact: shared DOF disagrees across cells");
      } else {
        coeffs[g] = v;
        seen[g] = true;
      }
    }
  }
  return coeffs;
}

Eigen::VectorXd interpolate(const GlobalSpace& s, const VectorPolynomial& field)
{
  auto exact = interpolate_exact(s, field);
  Eigen::VectorXd out(s.ndofs);
  for (std::size_t i = 0; i < s.ndofs; ++i) out[i] = to_double(exact[i]);
  return out;
}

Eigen::VectorXd
interpolate_numeric(const GlobalSpace& s,
                    const std::function<std::array<double, 3>(const std::array<double, 3>&)>& value,
                    const std::function<double(const std::array<double, 3>&)>& divergence,
                    int quad_points)
{
  const StructuredMesh& mesh = *s.mesh;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(Eigen::Index(s.ndofs));
  std::vector<bool> seen(s.ndofs, false);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& elem = s.class_elems[mesh.cells[c].class_id];
    auto geom = geometry_from_map(mesh.cell_type, affine_map(mesh, int(c)));
    for (std::size_t a = 0; a < elem.dofs.size(); ++a) {
      const std::size_t g = std::size_t(s.cell_dofs[c][a]);
      if (seen[g]) continue; // shared functionals agree by construction
      coeffs[Eigen::Index(g)] = apply_dof(geom, elem.dofs[a], value, divergence, quad_points);
      seen[g] = true;
    }
  }
  return coeffs;
}

namespace {

bool coeffs_match(const RationalMatrix& d, const std::vector<Rational>& src,
                  const std::vector<Rational>& dst)
{
  for (std::size_t i = 0; i < d.rows(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (src[j] != 0 && d(i, j) != 0) acc += d(i, j) * src[j];
    if (acc != dst[i]) return false;
  }
  return true;
}

} // namespace

ComplexSpaces build_complex(const StructuredMesh& mesh, int r, int k)
{
  ComplexSpaces cs;
  cs.sig = build_space(mesh, FEKind::Lagrange, r, 0);
  cs.v = build_space(mesh, FEKind::Nedelec, r, 0);
  cs.w = build_space(mesh, FEKind::GradDiv, r, k);
  cs.sp = build_space(mesh, FEKind::SigmaPlus, 0, k);
  cs.g = differential_matrix(cs.sig, cs.v);
  cs.c = differential_matrix(cs.v, cs.w);
  cs.d = differential_matrix(cs.w, cs.sp);
  return cs;
}

CommutingReport commuting_check(const ComplexSpaces& cs, const VectorPolynomial& field)
{
  CommutingReport rep;

  // grad(pi_Sigma u) = r_V(grad u) on the scalar component
  VectorPolynomial scalar;
  scalar.c[0] = field.c[0];
  rep.grad_ok = coeffs_match(cs.g, interpolate_exact(cs.sig, scalar),
                             interpolate_exact(cs.v, grad(field.c[0])));

  // curl(r_V u) = i_W(curl u)
  rep.curl_ok =
      coeffs_match(cs.c, interpolate_exact(cs.v, field), interpolate_exact(cs.w, curl(field)));

  // div(i_W u) = pi_Sigma+(div u)
  VectorPolynomial divu;
  divu.c[0] = div(field);
  rep.div_ok =
      coeffs_match(cs.d, interpolate_exact(cs.w, field), interpolate_exact(cs.sp, divu));
  return rep;
}

} // namespace graddiv
