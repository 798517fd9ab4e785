// Canonical interpolation operators onto the global spaces and the
// commuting-diagram identities that connect them to grad, curl, and div.
#pragma once

#include "graddiv/fespace.hpp"

#include <functional>

namespace graddiv {

// Canonical interpolation of a globally polynomial field (scalar fields in
// c[0]), applying every local DOF in exact arithmetic. Values reachable
// from several cells are verified to agree exactly.
std::vector<Rational> interpolate_exact(const GlobalSpace& s, const VectorPolynomial& field);

Eigen::VectorXd interpolate(const GlobalSpace& s, const VectorPolynomial& field);

// Quadrature-based interpolation for pointwise-evaluable fields; entity
// integrals use Gauss rules with quad_points 1D nodes.
Eigen::VectorXd
interpolate_numeric(const GlobalSpace& s,
                    const std::function<std::array<double, 3>(const std::array<double, 3>&)>& value,
                    const std::function<double(const std::array<double, 3>&)>& divergence,
                    int quad_points);

struct CommutingReport {
  bool grad_ok = false; // grad(pi_Sigma u) interpolates as r_V(grad u)
  bool curl_ok = false; // curl(r_V u) interpolates as i_W(curl u)
  bool div_ok = false;  // div(i_W u) interpolates as pi_Sigma+(div u)
  bool all() const { return grad_ok && curl_ok && div_ok; }
};

// The four spaces of the complex on one mesh together with the exact
// differential matrices, reusable across many test fields.
struct ComplexSpaces {
  GlobalSpace sig, v, w, sp;
  RationalMatrix g, c, d;
};

ComplexSpaces build_complex(const StructuredMesh& mesh, int r, int k);

// Exact verification of the three commuting identities for a smooth
// polynomial test field (c[0] doubles as the scalar input).
CommutingReport commuting_check(const ComplexSpaces& cs, const VectorPolynomial& field);

inline CommutingReport commuting_check(const StructuredMesh& mesh, int r, int k,
                                       const VectorPolynomial& field)
{
  return commuting_check(build_complex(mesh, r, k), field);
}

} // namespace graddiv
