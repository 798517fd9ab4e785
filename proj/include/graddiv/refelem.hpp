// Element definitions for the four spaces of the discrete complex:
// Lagrange (H1), first-family Nedelec (H(curl)), the grad-div conforming
// space W, and the enriched Lagrange target of the divergence.
//
// Elements can be instantiated on the reference cell or on any affine
// image of it. Degrees of freedom on shared entities are defined through
// the entity's own geometry, with vertices ordered by the global
// (z,y,x)-lexicographic position key, so the same functional is obtained
// from either side of a shared face or edge.
#pragma once

#include "graddiv/mesh.hpp"
#include "graddiv/poly_span.hpp"
#include "graddiv/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace graddiv {

enum class FEKind { Lagrange, Nedelec, GradDiv, SigmaPlus };

// Geometric description of one cell: the affine image of the reference
// tet/cube, with local entity lists in the canonical sorted order.
struct CellGeometry {
  CellType type;
  AffineMap map;
  std::vector<Vec3Q> verts; // images of the reference vertices

  struct Entity {
    std::vector<int> lv; // local vertex indices, sorted by position key
  };
  std::vector<Entity> edges;
  std::vector<Entity> faces;

  int num_vertices() const { return int(verts.size()); }
  Vec3Q vertex(int i) const { return verts[i]; }
};

CellGeometry reference_geometry(CellType type);
CellGeometry geometry_from_map(CellType type, const AffineMap& map);

// Enriched scalar space: P_{k-1} (+ barycentric bubble for k = 2,3,4) on
// tets, Q_{k-1} (+ x(1-x)y(1-y)z(1-z) for k = 2) on hexes; reference cell.
PolySpan sigma_plus_span(CellType cell, int k);

// Shape span of W^{r-1,k} on the reference cell:
// curl(nedelec_span(r)) + poincare(sigma_plus_span(k)).
PolySpan shape_span_W(CellType cell, int r, int k);

struct DofFunctional {
  enum class Kind {
    VertexDivValue,
    EdgeDivMoment,
    FaceDivMoment,
    FaceNormalMoment,
    InteriorMoment,
    LagrangePoint,
    LagrangeEdgeMoment,
    LagrangeFaceMoment,
    LagrangeInteriorMoment,
    NedelecEdgeMoment,
    NedelecFaceMoment,
    NedelecInteriorMoment,
  };
  Kind kind;
  int entity_dim = 0; // 0 vertex, 1 edge, 2 face, 3 interior
  int entity = 0;     // local entity id
  int weight_index = 0;
  // Scalar weight in entity parameters (edge: t; face: s,t) or, for
  // interior moments, in reference coordinates.
  Polynomial weight;
  // Vector weight: interior moments (reference coordinates); for Nedelec
  // face moments c[0], c[1] are scalar factors of the two face tangents.
  VectorPolynomial weight_v;
};

struct ElementDef {
  FEKind kind;
  CellType cell;
  int r = 0, k = 0;
  CellGeometry geom;
  PolySpan span; // shape functions in physical coordinates
  std::vector<DofFunctional> dofs;
};

// Ordered DOF set for one space; count always equals the span dimension.
std::vector<DofFunctional> dof_set(FEKind kind, const CellGeometry& geom, int r, int k);

ElementDef make_element(FEKind kind, const CellGeometry& geom, int r, int k);

inline ElementDef make_reference_element(FEKind kind, CellType cell, int r, int k)
{
  return make_element(kind, reference_geometry(cell), r, k);
}

// Exact application of a functional to a polynomial field given in physical
// coordinates (scalar fields in c[0]). Only the geometry is needed, so the
// same functionals can be applied on any cell of a class.
Rational apply_dof(const CellGeometry& geom, const DofFunctional& dof,
                   const VectorPolynomial& field);

inline Rational apply_dof(const ElementDef& elem, const DofFunctional& dof,
                          const VectorPolynomial& field)
{
  return apply_dof(elem.geom, dof, field);
}

// All functionals of one cell in a single pass, sharing the per-entity
// restrictions of the field (much cheaper than repeated apply_dof).
std::vector<Rational> apply_dofs(const CellGeometry& geom, const std::vector<DofFunctional>& dofs,
                                 const VectorPolynomial& field);

// Numeric application for fields with pointwise-evaluable value and
// divergence; entity integrals use Gauss rules of the given 1D order.
double apply_dof(const CellGeometry& geom, const DofFunctional& dof,
                 const std::function<std::array<double, 3>(const std::array<double, 3>&)>& value,
                 const std::function<double(const std::array<double, 3>&)>& divergence,
                 int quad_points);

inline double apply_dof(const ElementDef& elem, const DofFunctional& dof,
                        const std::function<std::array<double, 3>(const std::array<double, 3>&)>& value,
                        const std::function<double(const std::array<double, 3>&)>& divergence,
                        int quad_points)
{
  return apply_dof(elem.geom, dof, value, divergence, quad_points);
}

struct NodalBasis {
  // nodal_j = sum_i coeff(i, j) * span_i
  Eigen::MatrixXd coeff;
  RationalMatrix coeff_exact; // filled on the exact path
  bool exact = false;
  double condition = 0.0;
};

// Generalized Vandermonde V(a,i) = dof_a(span_i), exact entries.
RationalMatrix vandermonde(const ElementDef& elem);

// Inverts the Vandermonde; throws on rank deficiency.
NodalBasis build_nodal_basis(const ElementDef& elem, bool exact_path = true);

// Full-rank certificate for the Vandermonde in exact arithmetic.
bool unisolvent(const ElementDef& elem);

// Closed-form dimension of W^{r-1,k} on tets.
inline int dim_W_tet(int r, int k)
{
  return (r + 2) * (r + 3) * (2 * r - 1) / 6 + k * (k + 1) * (k + 2) / 6 + (k >= 5 ? 1 : 2);
}

// Tabulation export for golden tests (span, DOF descriptors, nodal matrix).
std::string element_to_json(const ElementDef& elem, const NodalBasis& basis);

} // namespace graddiv
