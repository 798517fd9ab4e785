// Global finite element spaces on structured meshes: entity-based DOF
// numbering, boundary masks, exact differential-operator matrices, and
// pointwise evaluation of discrete fields.
//
// Shared-entity functionals are identical from every incident cell (entity
// frames derive from the global vertex order), so the DOF map carries no
// signs or orientation flips.
#pragma once

#include "graddiv/mesh.hpp"
#include "graddiv/refelem.hpp"

#include <Eigen/Dense>

#include <vector>

namespace graddiv {

struct GlobalSpace {
  const StructuredMesh* mesh = nullptr;
  FEKind kind = FEKind::Lagrange;
  int r = 0, k = 0;

  // one element per cell class; all cells of a class are translates
  std::vector<ElementDef> class_elems;
  std::vector<NodalBasis> class_bases;
  std::vector<std::vector<VectorPolynomial>> class_nodal; // nodal shape functions
  std::vector<std::vector<Polynomial>> class_nodal_div;   // their divergences

  std::size_t ndofs = 0;
  std::vector<std::vector<int>> cell_dofs; // cell -> local dof -> global index
  std::vector<bool> boundary_dof;          // dof sits on a boundary entity

  std::size_t num_dofs() const { return ndofs; }
  std::size_t local_dofs() const { return class_elems.front().dofs.size(); }
};

GlobalSpace build_space(const StructuredMesh& mesh, FEKind kind, int r, int k);

// Indices kept after eliminating all boundary-entity DOFs. For the grad-div
// space this imposes u.n = 0 and div u = 0 on the domain boundary.
std::vector<int> free_dofs(const GlobalSpace& s);

// Exact global matrix of the differential (grad, curl, or div) mapping src
// into dst. The pair must be adjacent in the complex
//   Lagrange^r -> Nedelec^r -> GradDiv^{r-1,k} -> SigmaPlus^{k-1}.
// Entries reachable from several cells are verified to agree exactly.
RationalMatrix differential_matrix(const GlobalSpace& src, const GlobalSpace& dst);

struct FieldSample {
  std::array<double, 3> value{0, 0, 0}; // scalar spaces use value[0]
  double divergence = 0;
};

// Evaluate a coefficient vector at a physical point lying in the given cell.
FieldSample eval_field(const GlobalSpace& s, const Eigen::VectorXd& coeffs, int cell,
                       const std::array<double, 3>& x);

} // namespace graddiv
