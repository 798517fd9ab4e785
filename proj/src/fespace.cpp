#include "graddiv/fespace.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace graddiv {

namespace {

struct Descriptor {
  DofFunctional::Kind kind;
  int weight_index;
  friend bool operator<(const Descriptor& a, const Descriptor& b)
  {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.weight_index < b.weight_index;
  }
};

// Per-entity DOF descriptor lists, taken from entity 0 of the first class
// element (every entity of the same dimension carries the same set).
struct Layout {
  std::vector<Descriptor> per_dim[4];
  std::map<Descriptor, int> pos[4];

  explicit Layout(const ElementDef& elem)
  {
    for (const auto& d : elem.dofs) {
      if (d.entity_dim < 3 && d.entity != 0) continue;
      per_dim[d.entity_dim].push_back({d.kind, d.weight_index});
    }
    for (int dim = 0; dim < 4; ++dim)
      for (std::size_t i = 0; i < per_dim[dim].size(); ++i)
        pos[dim][per_dim[dim][i]] = int(i);
  }
};

} // namespace

GlobalSpace build_space(const StructuredMesh& mesh, FEKind kind, int r, int k)
{
  GlobalSpace s;
  s.mesh = &mesh;
  s.kind = kind;
  s.r = r;
  s.k = k;

  const int nclasses = num_cell_classes(mesh);
  for (int cls = 0; cls < nclasses; ++cls) {
    auto geom = geometry_from_map(mesh.cell_type, class_map(mesh, cls));
    s.class_elems.push_back(make_element(kind, geom, r, k));
    s.class_bases.push_back(build_nodal_basis(s.class_elems.back()));

    const auto& elem = s.class_elems.back();
    const auto& basis = s.class_bases.back();
    const std::size_t n = elem.span.dim();
    std::vector<VectorPolynomial> nodal(n);
    std::vector<Polynomial> nodal_div(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const Rational& c = basis.coeff_exact(i, j);
        if (c != 0) nodal[j] += elem.span.basis[i] * c;
      }
      if (elem.span.arity == Arity::Vector) nodal_div[j] = div(nodal[j]);
    }
    s.class_nodal.push_back(std::move(nodal));
    s.class_nodal_div.push_back(std::move(nodal_div));
  }

  Layout layout(s.class_elems.front());
  const std::size_t nvd = layout.per_dim[0].size();
  const std::size_t ned = layout.per_dim[1].size();
  const std::size_t nfd = layout.per_dim[2].size();
  const std::size_t nid = layout.per_dim[3].size();

  const std::size_t vertex_off = 0;
  const std::size_t edge_off = vertex_off + mesh.num_vertices() * nvd;
  const std::size_t face_off = edge_off + mesh.num_edges() * ned;
  const std::size_t cell_off = face_off + mesh.num_faces() * nfd;
  s.ndofs = cell_off + mesh.num_cells() * nid;

  s.boundary_dof.assign(s.ndofs, false);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.vertex_boundary[v])
      for (std::size_t p = 0; p < nvd; ++p) s.boundary_dof[vertex_off + v * nvd + p] = true;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge_boundary[e])
      for (std::size_t p = 0; p < ned; ++p) s.boundary_dof[edge_off + e * ned + p] = true;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f)
    if (mesh.face_boundary[f])
      for (std::size_t p = 0; p < nfd; ++p) s.boundary_dof[face_off + f * nfd + p] = true;

  s.cell_dofs.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const auto& geom = s.class_elems[cell.class_id].geom;
    const auto& dofs = s.class_elems[cell.class_id].dofs;
    auto& out = s.cell_dofs[c];
    out.reserve(dofs.size());
    for (const auto& d : dofs) {
      const int p = layout.pos[d.entity_dim].at({d.kind, d.weight_index});
      std::size_t g = 0;
      switch (d.entity_dim) {
      case 0:
        g = vertex_off + std::size_t(cell.verts[d.entity]) * nvd + p;
        break;
      case 1: {
        const auto& lv = geom.edges[d.entity].lv;
        std::array<int, 2> key{cell.verts[lv[0]], cell.verts[lv[1]]};
        g = edge_off + std::size_t(mesh.edge_index.at(key)) * ned + p;
        break;
      }
      case 2: {
        const auto& lv = geom.faces[d.entity].lv;
        std::vector<int> key;
        for (int v : lv) key.push_back(cell.verts[v]);
        g = face_off + std::size_t(mesh.face_index.at(key)) * nfd + p;
        break;
      }
      default:
        g = cell_off + c * nid + p;
      }
      out.push_back(int(g));
    }
  }
  return s;
}

std::vector<int> free_dofs(const GlobalSpace& s)
{
  std::vector<int> out;
  for (std::size_t i = 0; i < s.ndofs; ++i)
    if (!s.boundary_dof[i]) out.push_back(int(i));
  return out;
}

RationalMatrix differential_matrix(const GlobalSpace& src, const GlobalSpace& dst)
{
  enum class Op { Grad, Curl, Div } op;
  if (src.kind == FEKind::Lagrange && dst.kind == FEKind::Nedelec && src.r == dst.r)
    op = Op::Grad;
  else if (src.kind == FEKind::Nedelec && dst.kind == FEKind::GradDiv && src.r == dst.r)
    op = Op::Curl;
  else if (src.kind == FEKind::GradDiv && dst.kind == FEKind::SigmaPlus && src.k == dst.k)
    op = Op::Div;
  else
    throw std::invalid_argument("differential_matrix: spaces are not adjacent in the complex");
  if (src.mesh != dst.mesh)
    throw std::invalid_argument("differential_matrix: spaces on different meshes");

  const StructuredMesh& mesh = *src.mesh;
  const int nclasses = num_cell_classes(mesh);

  std::vector<RationalMatrix> local(nclasses);
  for (int cls = 0; cls < nclasses; ++cls) {
    const auto& delem = dst.class_elems[cls];
    const auto& nodal = src.class_nodal[cls];
    RationalMatrix m(delem.dofs.size(), nodal.size());
    for (std::size_t j = 0; j < nodal.size(); ++j) {
      VectorPolynomial dfield;
      switch (op) {
      case Op::Grad:
        dfield = grad(nodal[j].c[0]);
        break;
      case Op::Curl:
        dfield = curl(nodal[j]);
        break;
      case Op::Div:
        dfield.c[0] = src.class_nodal_div[cls][j];
        break;
      }
      for (std::size_t a = 0; a < delem.dofs.size(); ++a)
        m(a, j) = apply_dof(delem.geom, delem.dofs[a], dfield);
    }
    local[cls] = std::move(m);
  }

  RationalMatrix g(dst.ndofs, src.ndofs);
  std::vector<bool> seen(dst.ndofs * src.ndofs, false);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& m = local[mesh.cells[c].class_id];
    const auto& drow = dst.cell_dofs[c];
    const auto& scol = src.cell_dofs[c];
    for (std::size_t a = 0; a < drow.size(); ++a)
      for (std::size_t j = 0; j < scol.size(); ++j) {
        const std::size_t gi = std::size_t(drow[a]), gj = std::size_t(scol[j]);
        if (seen[gi * src.ndofs + gj]) {
          if (g(gi, gj) != m(a, j))
            throw std::logic_error(
                "differential_matrix: inconsistent entry across cells (conformity violated)");
        } else {
          g(gi, gj) = m(a, j);
          seen[gi * src.ndofs + gj] = true;
        }
      }
  }
  return g;
}

FieldSample eval_field(const GlobalSpace& s, const Eigen::VectorXd& coeffs, int cell,
                       const std::array<double, 3>& x)
{
  const StructuredMesh& mesh = *s.mesh;
  const int cls = mesh.cells[cell].class_id;
  AffineMap map = affine_map(mesh, cell);
  std::array<double, 3> xloc{x[0] - to_double(map.b[0]), x[1] - to_double(map.b[1]),
                             x[2] - to_double(map.b[2])};
  FieldSample out;
  const auto& nodal = s.class_nodal[cls];
  const auto& nodal_div = s.class_nodal_div[cls];
  const auto& gdofs = s.cell_dofs[cell];
  for (std::size_t j = 0; j < nodal.size(); ++j) {
    const double cj = coeffs[gdofs[j]];
    if (cj == 0.0) continue;
    auto v = nodal[j].eval(xloc);
    for (int i = 0; i < 3; ++i) out.value[i] += cj * v[i];
    if (s.class_elems[cls].span.arity == Arity::Vector)
      out.divergence += cj * nodal_div[j].eval(xloc);
  }
  return out;
}

} // namespace graddiv
