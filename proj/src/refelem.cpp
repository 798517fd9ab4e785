#include "graddiv/refelem.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace graddiv {

namespace {

constexpr int tet_edge_tab[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
constexpr int tet_face_tab[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
constexpr int cube_vert_tab[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                                     {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
constexpr int cube_edge_tab[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                      {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
constexpr int cube_face_tab[6][4] = {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 4, 5},
                                     {2, 3, 6, 7}, {0, 2, 4, 6}, {1, 3, 5, 7}};

// (z,y,x)-lexicographic position key; matches the global vertex id order on
// structured meshes, so entity conventions are translation invariant.
bool pos_less(const Vec3Q& a, const Vec3Q& b)
{
  if (a[2] != b[2]) return a[2] < b[2];
  if (a[1] != b[1]) return a[1] < b[1];
  return a[0] < b[0];
}

Vec3Q sub(const Vec3Q& a, const Vec3Q& b)
{
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3Q cross(const Vec3Q& a, const Vec3Q& b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool identity_map(const AffineMap& m)
{
  for (int i = 0; i < 3; ++i) {
    if (m.b[i] != 0) return false;
    for (int j = 0; j < 3; ++j)
      if (m.B[i][j] != Rational(i == j ? 1 : 0)) return false;
  }
  return true;
}

// Affine substitution rows for x = B y + b (compose a physical-coordinate
// polynomial with the map to obtain a reference-coordinate polynomial).
std::array<std::array<Rational, 4>, 3> forward_rows(const AffineMap& m)
{
  std::array<std::array<Rational, 4>, 3> rows;
  for (int i = 0; i < 3; ++i) {
    rows[i][0] = m.b[i];
    for (int j = 0; j < 3; ++j) rows[i][1 + j] = m.B[i][j];
  }
  return rows;
}

std::array<std::array<Rational, 4>, 3> inverse_rows(const AffineMap& m)
{
  Mat3Q binv = inverse3(m.B);
  Vec3Q shift = apply3(binv, m.b);
  std::array<std::array<Rational, 4>, 3> rows;
  for (int i = 0; i < 3; ++i) {
    rows[i][0] = -shift[i];
    for (int j = 0; j < 3; ++j) rows[i][1 + j] = binv[i][j];
  }
  return rows;
}

// Exact integrals over parameter domains. Edge weights live in variable 0,
// face weights in variables 0 (s) and 1 (t).
Rational integral_unit_interval(const Polynomial& p)
{
  Rational out = 0;
  for (const auto& [m, c] : p.terms()) out += c / Rational(m.a[0] + 1);
  return out;
}

Rational integral_unit_triangle(const Polynomial& p)
{
  Rational out = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational v = c;
    for (int j = 2; j <= m.a[0]; ++j) v *= j;
    for (int j = 2; j <= m.a[1]; ++j) v *= j;
    for (int j = 2; j <= m.a[0] + m.a[1] + 2; ++j) v /= Rational(j);
    out += v;
  }
  return out;
}

Rational integral_unit_square(const Polynomial& p)
{
  Rational out = 0;
  for (const auto& [m, c] : p.terms())
    out += c / Rational((m.a[0] + 1) * (m.a[1] + 1));
  return out;
}

std::vector<Polynomial> weights_1d(int maxdeg)
{
  std::vector<Polynomial> out;
  for (int j = 0; j <= maxdeg; ++j) out.push_back(Polynomial::monomial(MultiIndex{{j, 0, 0}}));
  return out;
}

std::vector<Polynomial> scalars_of(const PolySpan& s)
{
  std::vector<Polynomial> out;
  for (const auto& v : s.basis) out.push_back(v.c[0]);
  return out;
}

std::vector<Polynomial> face_scalar_weights(CellType cell, int p_deg, int q_deg)
{
  if (cell == CellType::Tet)
    return scalars_of(polynomial_space(SpaceKind::P2dFace, p_deg, Arity::Scalar));
  return scalars_of(polynomial_space(SpaceKind::Q, {q_deg, q_deg, 0}, Arity::Scalar));
}

Polynomial reference_bubble(CellType cell)
{
  Polynomial x = Polynomial::variable(0), y = Polynomial::variable(1),
             z = Polynomial::variable(2);
  Polynomial one(Rational(1));
  if (cell == CellType::Tet) return x * y * z * (one - x - y - z);
  return x * (one - x) * y * (one - y) * z * (one - z);
}

// Keep, in order, the span elements that increase the rank.
PolySpan independent_subset(const PolySpan& s)
{
  PolySpan out;
  out.arity = s.arity;
  if (s.basis.empty()) return out;
  MonomialIndexer idx({&s});
  RationalMatrix m = idx.matrix_of(s);
  const std::size_t ncols = idx.size();
  std::vector<std::vector<Rational>> echelon;
  std::vector<std::size_t> pivot_col;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    std::vector<Rational> row(ncols);
    for (std::size_t j = 0; j < ncols; ++j) row[j] = m(i, j);
    for (std::size_t r = 0; r < echelon.size(); ++r) {
      const Rational f = row[pivot_col[r]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < ncols; ++j) row[j] -= f * echelon[r][j];
    }
    std::size_t p = 0;
    while (p < ncols && row[p] == 0) ++p;
    if (p == ncols) continue;
    const Rational inv = Rational(1) / row[p];
    for (std::size_t j = p; j < ncols; ++j) row[j] *= inv;
    echelon.push_back(std::move(row));
    pivot_col.push_back(p);
    out.basis.push_back(s.basis[i]);
  }
  return out;
}

// Interior weight space D for the grad-div element.
PolySpan graddiv_interior_weights(CellType cell, int r, int k)
{
  PolySpan out;
  out.arity = Arity::Vector;
  // gradient part
  PolySpan grad_src = (cell == CellType::Tet)
                          ? polynomial_space(SpaceKind::P, k - 5, Arity::Scalar)
                          : polynomial_space(SpaceKind::Q, k - 3, Arity::Scalar);
  for (const auto& v : grad_src.basis) {
    auto g = grad(v.c[0]);
    if (!g.is_zero()) out.push(std::move(g));
  }
  // quotient part: vector space modulo gradients
  PolySpan a;
  a.arity = Arity::Vector;
  if (cell == CellType::Tet) {
    a = polynomial_space(SpaceKind::P, r - 2, Arity::Vector);
  } else {
    for (int comp = 0; comp < 3; ++comp) {
      std::array<int, 3> deg{r - 1, r - 1, r - 1};
      deg[comp] = r - 2;
      for (const auto& v :
           polynomial_space(SpaceKind::Q, deg, Arity::Scalar).basis) {
        VectorPolynomial w;
        w.c[comp] = v.c[0];
        a.push(std::move(w));
      }
    }
  }
  PolySpan b;
  b.arity = Arity::Vector;
  for (const auto& v :
       polynomial_space(cell == CellType::Tet ? SpaceKind::P : SpaceKind::Q, r - 1,
                        Arity::Scalar)
           .basis) {
    auto g = grad(v.c[0]);
    if (!g.is_zero()) b.push(std::move(g));
  }
  if (!a.basis.empty()) {
    for (auto& v : quotient_complement(a, b).basis) out.push(std::move(v));
  }
  return out;
}

// Lazy per-field restriction cache so a Vandermonde column reuses composed
// polynomials across all functionals on the same entity.
class DofApplier {
public:
  DofApplier(const CellGeometry& geom, const VectorPolynomial& field)
      : geom_(geom), field_(field)
  {
  }

  Rational apply(const DofFunctional& dof)
  {
    using K = DofFunctional::Kind;
    const bool tri = geom_.type == CellType::Tet;
    switch (dof.kind) {
    case K::VertexDivValue:
      return divergence().eval(geom_.vertex(dof.entity));
    case K::EdgeDivMoment:
      return integral_unit_interval(div_on_edge(dof.entity) * dof.weight);
    case K::FaceDivMoment: {
      Polynomial p = div_on_face(dof.entity) * dof.weight;
      return tri ? Rational(2) * integral_unit_triangle(p) : integral_unit_square(p);
    }
    case K::FaceNormalMoment: {
      const auto& uf = field_on_face(dof.entity);
      Vec3Q n = face_cross(dof.entity);
      Polynomial p;
      for (int i = 0; i < 3; ++i) p += uf.c[i] * n[i];
      p = p * dof.weight;
      return tri ? integral_unit_triangle(p) : integral_unit_square(p);
    }
    case K::InteriorMoment: {
      VectorPolynomial w = apply_matrix(binv_t(), dof.weight_v);
      Polynomial p;
      for (int i = 0; i < 3; ++i) p += field_on_reference().c[i] * w.c[i];
      return geom_.map.det * exact_integral_reference(p, geom_.type);
    }
    case K::LagrangePoint:
      return field_.c[0].eval(geom_.vertex(dof.entity));
    case K::LagrangeEdgeMoment:
      return integral_unit_interval(scalar_on_edge(dof.entity) * dof.weight);
    case K::LagrangeFaceMoment: {
      Polynomial p = scalar_on_face(dof.entity) * dof.weight;
      return tri ? Rational(2) * integral_unit_triangle(p) : integral_unit_square(p);
    }
    case K::LagrangeInteriorMoment: {
      Polynomial p = scalar_on_reference() * dof.weight;
      Rational refvol_inv = tri ? Rational(6) : Rational(1);
      return refvol_inv * exact_integral_reference(p, geom_.type);
    }
    case K::NedelecEdgeMoment: {
      const auto& uf = field_on_edge(dof.entity);
      Vec3Q d = edge_dir(dof.entity);
      Polynomial p;
      for (int i = 0; i < 3; ++i) p += uf.c[i] * d[i];
      return integral_unit_interval(p * dof.weight);
    }
    case K::NedelecFaceMoment: {
      const auto& uf = field_on_face(dof.entity);
      const auto& fe = geom_.faces[dof.entity];
      Vec3Q v0 = geom_.vertex(fe.lv[0]);
      Vec3Q d1 = sub(geom_.vertex(fe.lv[1]), v0);
      Vec3Q d2 = sub(geom_.vertex(fe.lv[2]), v0);
      Polynomial u1, u2;
      for (int i = 0; i < 3; ++i) {
        u1 += uf.c[i] * d1[i];
        u2 += uf.c[i] * d2[i];
      }
      Polynomial p = u1 * dof.weight_v.c[0] + u2 * dof.weight_v.c[1];
      return tri ? integral_unit_triangle(p) : integral_unit_square(p);
    }
    case K::NedelecInteriorMoment: {
      VectorPolynomial w = apply_matrix(geom_.map.B, dof.weight_v);
      Polynomial p;
      for (int i = 0; i < 3; ++i) p += field_on_reference().c[i] * w.c[i];
      return exact_integral_reference(p, geom_.type);
    }
    }
    throw std::logic_error("apply_dof: unknown functional kind");
  }

private:
  std::array<std::array<Rational, 4>, 3> edge_rows(int e) const
  {
    const auto& ee = geom_.edges[e];
    Vec3Q p0 = geom_.vertex(ee.lv[0]);
    Vec3Q d = sub(geom_.vertex(ee.lv[1]), p0);
    std::array<std::array<Rational, 4>, 3> rows{};
    for (int i = 0; i < 3; ++i) {
      rows[i][0] = p0[i];
      rows[i][1] = d[i];
    }
    return rows;
  }
  std::array<std::array<Rational, 4>, 3> face_rows(int f) const
  {
    const auto& fe = geom_.faces[f];
    Vec3Q v0 = geom_.vertex(fe.lv[0]);
    Vec3Q d1 = sub(geom_.vertex(fe.lv[1]), v0);
    Vec3Q d2 = sub(geom_.vertex(fe.lv[2]), v0);
    std::array<std::array<Rational, 4>, 3> rows{};
    for (int i = 0; i < 3; ++i) {
      rows[i][0] = v0[i];
      rows[i][1] = d1[i];
      rows[i][2] = d2[i];
    }
    return rows;
  }
  Vec3Q edge_dir(int e) const
  {
    const auto& ee = geom_.edges[e];
    return sub(geom_.vertex(ee.lv[1]), geom_.vertex(ee.lv[0]));
  }
  Vec3Q face_cross(int f) const
  {
    const auto& fe = geom_.faces[f];
    Vec3Q v0 = geom_.vertex(fe.lv[0]);
    return cross(sub(geom_.vertex(fe.lv[1]), v0),
                 sub(geom_.vertex(fe.lv[2]), v0));
  }

  const Polynomial& divergence()
  {
    if (!div_) div_ = div(field_);
    return *div_;
  }
  const Polynomial& div_on_edge(int e)
  {
    auto it = div_edge_.find(e);
    if (it == div_edge_.end())
      it = div_edge_.emplace(e, divergence().compose_affine(edge_rows(e))).first;
    return it->second;
  }
  const Polynomial& div_on_face(int f)
  {
    auto it = div_face_.find(f);
    if (it == div_face_.end())
      it = div_face_.emplace(f, divergence().compose_affine(face_rows(f))).first;
    return it->second;
  }
  const VectorPolynomial& field_on_edge(int e)
  {
    auto it = field_edge_.find(e);
    if (it == field_edge_.end())
      it = field_edge_.emplace(e, field_.compose_affine(edge_rows(e))).first;
    return it->second;
  }
  const VectorPolynomial& field_on_face(int f)
  {
    auto it = field_face_.find(f);
    if (it == field_face_.end())
      it = field_face_.emplace(f, field_.compose_affine(face_rows(f))).first;
    return it->second;
  }
  const VectorPolynomial& field_on_reference()
  {
    if (!field_ref_) {
      if (identity_map(geom_.map))
        field_ref_ = field_;
      else
        field_ref_ = field_.compose_affine(forward_rows(geom_.map));
    }
    return *field_ref_;
  }
  const Polynomial& scalar_on_edge(int e)
  {
    auto it = c0_edge_.find(e);
    if (it == c0_edge_.end())
      it = c0_edge_.emplace(e, field_.c[0].compose_affine(edge_rows(e))).first;
    return it->second;
  }
  const Polynomial& scalar_on_face(int f)
  {
    auto it = c0_face_.find(f);
    if (it == c0_face_.end())
      it = c0_face_.emplace(f, field_.c[0].compose_affine(face_rows(f))).first;
    return it->second;
  }
  const Polynomial& scalar_on_reference()
  {
    if (!c0_ref_) {
      if (identity_map(geom_.map))
        c0_ref_ = field_.c[0];
      else
        c0_ref_ = field_.c[0].compose_affine(forward_rows(geom_.map));
    }
    return *c0_ref_;
  }
  const Mat3Q& binv_t()
  {
    if (!binvt_) binvt_ = transpose3(inverse3(geom_.map.B));
    return *binvt_;
  }

  const CellGeometry& geom_;
  const VectorPolynomial& field_;
  std::optional<Polynomial> div_, c0_ref_;
  std::optional<VectorPolynomial> field_ref_;
  std::optional<Mat3Q> binvt_;
  std::map<int, Polynomial> div_edge_, div_face_, c0_edge_, c0_face_;
  std::map<int, VectorPolynomial> field_edge_, field_face_;
};

void require(bool cond, const std::string& what)
{
  if (!cond) throw std::invalid_argument(what);
}

} // namespace

CellGeometry geometry_from_map(CellType type, const AffineMap& map)
{
  CellGeometry g;
  g.type = type;
  g.map = map;
  if (type == CellType::Tet) {
    const Vec3Q ref[4] = {{Rational(0), Rational(0), Rational(0)},
                          {Rational(1), Rational(0), Rational(0)},
                          {Rational(0), Rational(1), Rational(0)},
                          {Rational(0), Rational(0), Rational(1)}};
    for (const auto& v : ref) g.verts.push_back(map.apply(v));
    for (const auto& e : tet_edge_tab) g.edges.push_back({{e[0], e[1]}});
    for (const auto& f : tet_face_tab) g.faces.push_back({{f[0], f[1], f[2]}});
  } else {
    for (const auto& cv : cube_vert_tab)
      g.verts.push_back(map.apply({Rational(cv[0]), Rational(cv[1]), Rational(cv[2])}));
    for (const auto& e : cube_edge_tab) g.edges.push_back({{e[0], e[1]}});
    for (const auto& f : cube_face_tab) g.faces.push_back({{f[0], f[1], f[2], f[3]}});
  }

  auto vert_less = [&](int a, int b) { return pos_less(g.verts[a], g.verts[b]); };
  auto entity_key = [&](const CellGeometry::Entity& e) {
    std::vector<Vec3Q> key;
    for (int v : e.lv) key.push_back(g.verts[v]);
    return key;
  };
  auto key_less = [&](const CellGeometry::Entity& a, const CellGeometry::Entity& b) {
    auto ka = entity_key(a), kb = entity_key(b);
    for (std::size_t i = 0; i < ka.size(); ++i) {
      if (ka[i] == kb[i]) continue;
      return pos_less(ka[i], kb[i]);
    }
    return false;
  };
  for (auto& e : g.edges) std::sort(e.lv.begin(), e.lv.end(), vert_less);
  for (auto& f : g.faces) std::sort(f.lv.begin(), f.lv.end(), vert_less);
  std::sort(g.edges.begin(), g.edges.end(), key_less);
  std::sort(g.faces.begin(), g.faces.end(), key_less);
  return g;
}

CellGeometry reference_geometry(CellType type)
{
  AffineMap id;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      id.B[i][j] = Rational(i == j ? 1 : 0);
  id.b = {Rational(0), Rational(0), Rational(0)};
  id.det = 1;
  return geometry_from_map(type, id);
}

PolySpan sigma_plus_span(CellType cell, int k)
{
  require(k >= 2, "sigma_plus_span: k must be >= 2");
  PolySpan s = polynomial_space(cell == CellType::Tet ? SpaceKind::P : SpaceKind::Q, k - 1,
                                Arity::Scalar);
  const bool enrich = (cell == CellType::Tet) ? (k <= 4) : (k == 2);
  if (enrich) s.push(reference_bubble(cell));
  return s;
}

PolySpan shape_span_W(CellType cell, int r, int k)
{
  require(r >= 1, "shape_span_W: r must be >= 1");
  PolySpan curls;
  curls.arity = Arity::Vector;
  for (const auto& v : nedelec_span(r, cell).basis) {
    auto c = curl(v);
    if (!c.is_zero()) curls.push(std::move(c));
  }
  PolySpan out = independent_subset(curls);
  for (const auto& sig : sigma_plus_span(cell, k).basis) out.push(poincare(sig.c[0]));
  return out;
}

std::vector<DofFunctional> dof_set(FEKind kind, const CellGeometry& geom, int r, int k)
{
  using K = DofFunctional::Kind;
  const CellType cell = geom.type;
  const bool tet = cell == CellType::Tet;
  std::vector<DofFunctional> out;

  auto add_scalar = [&](K kk, int dim, int ent, int widx, Polynomial w) {
    DofFunctional d;
    d.kind = kk;
    d.entity_dim = dim;
    d.entity = ent;
    d.weight_index = widx;
    d.weight = std::move(w);
    out.push_back(std::move(d));
  };
  auto add_vector = [&](K kk, int ent, int widx, VectorPolynomial w) {
    DofFunctional d;
    d.kind = kk;
    d.entity_dim = 3;
    d.entity = ent;
    d.weight_index = widx;
    d.weight_v = std::move(w);
    out.push_back(std::move(d));
  };

  if (kind == FEKind::Lagrange || kind == FEKind::SigmaPlus) {
    const int order = (kind == FEKind::Lagrange) ? r : k - 1;
    require(order >= 1, "dof_set: Lagrange order must be >= 1");
    for (int v = 0; v < geom.num_vertices(); ++v)
      add_scalar(K::LagrangePoint, 0, v, 0, Polynomial(Rational(1)));
    for (std::size_t e = 0; e < geom.edges.size(); ++e) {
      int w = 0;
      for (auto& q : weights_1d(order - 2))
        add_scalar(K::LagrangeEdgeMoment, 1, int(e), w++, std::move(q));
    }
    for (std::size_t f = 0; f < geom.faces.size(); ++f) {
      int w = 0;
      for (auto& q : face_scalar_weights(cell, order - 3, order - 2))
        add_scalar(K::LagrangeFaceMoment, 2, int(f), w++, std::move(q));
    }
    int w = 0;
    PolySpan interior = polynomial_space(tet ? SpaceKind::P : SpaceKind::Q,
                                         tet ? order - 4 : order - 2, Arity::Scalar);
    for (const auto& q : interior.basis)
      add_scalar(K::LagrangeInteriorMoment, 3, 0, w++, q.c[0]);
    if (kind == FEKind::SigmaPlus) {
      // the enrichment DOF is the cell average: with integration by parts
      // it reduces to boundary normal moments, which makes the diagram
      // commute, and it separates the bubble from P_{k-1}/Q_{k-1}
      const bool enrich = tet ? (k <= 4) : (k == 2);
      if (enrich) add_scalar(K::LagrangeInteriorMoment, 3, 0, w++, Polynomial(Rational(1)));
    }
    return out;
  }

  if (kind == FEKind::Nedelec) {
    require(r >= 1, "dof_set: Nedelec degree must be >= 1");
    for (std::size_t e = 0; e < geom.edges.size(); ++e) {
      int w = 0;
      for (auto& q : weights_1d(r - 1))
        add_scalar(K::NedelecEdgeMoment, 1, int(e), w++, std::move(q));
    }
    for (std::size_t f = 0; f < geom.faces.size(); ++f) {
      int w = 0;
      // first-tangent weights, then second-tangent weights
      auto q1 = tet ? face_scalar_weights(cell, r - 2, 0)
                    : scalars_of(polynomial_space(SpaceKind::Q, {r - 1, r - 2, 0},
                                                  Arity::Scalar));
      auto q2 = tet ? q1
                    : scalars_of(polynomial_space(SpaceKind::Q, {r - 2, r - 1, 0},
                                                  Arity::Scalar));
      for (auto& q : q1) {
        DofFunctional d;
        d.kind = K::NedelecFaceMoment;
        d.entity_dim = 2;
        d.entity = int(f);
        d.weight_index = w++;
        d.weight_v.c[0] = q;
        out.push_back(std::move(d));
      }
      for (auto& q : q2) {
        DofFunctional d;
        d.kind = K::NedelecFaceMoment;
        d.entity_dim = 2;
        d.entity = int(f);
        d.weight_index = w++;
        d.weight_v.c[1] = q;
        out.push_back(std::move(d));
      }
    }
    int w = 0;
    if (tet) {
      for (const auto& q : polynomial_space(SpaceKind::P, r - 3, Arity::Vector).basis)
        add_vector(K::NedelecInteriorMoment, 0, w++, q);
    } else {
      for (int comp = 0; comp < 3; ++comp) {
        std::array<int, 3> deg{r - 2, r - 2, r - 2};
        deg[comp] = r - 1;
        for (const auto& q : polynomial_space(SpaceKind::Q, deg, Arity::Scalar).basis) {
          VectorPolynomial vw;
          vw.c[comp] = q.c[0];
          add_vector(K::NedelecInteriorMoment, 0, w++, std::move(vw));
        }
      }
    }
    return out;
  }

  // grad-div element
  require(r >= 1 && k >= 2, "dof_set: grad-div element needs r >= 1, k >= 2");
  for (int v = 0; v < geom.num_vertices(); ++v)
    add_scalar(K::VertexDivValue, 0, v, 0, Polynomial(Rational(1)));
  for (std::size_t e = 0; e < geom.edges.size(); ++e) {
    int w = 0;
    for (auto& q : weights_1d(k - 3))
      add_scalar(K::EdgeDivMoment, 1, int(e), w++, std::move(q));
  }
  for (std::size_t f = 0; f < geom.faces.size(); ++f) {
    int w = 0;
    for (auto& q : face_scalar_weights(cell, k - 4, k - 3))
      add_scalar(K::FaceDivMoment, 2, int(f), w++, std::move(q));
  }
  for (std::size_t f = 0; f < geom.faces.size(); ++f) {
    int w = 0;
    for (auto& q : face_scalar_weights(cell, r - 1, r - 1))
      add_scalar(K::FaceNormalMoment, 2, int(f), w++, std::move(q));
  }
  int w = 0;
  for (const auto& q : graddiv_interior_weights(cell, r, k).basis)
    add_vector(K::InteriorMoment, 0, w++, q);
  return out;
}

ElementDef make_element(FEKind kind, const CellGeometry& geom, int r, int k)
{
  ElementDef elem;
  elem.kind = kind;
  elem.cell = geom.type;
  elem.r = r;
  elem.k = k;
  elem.geom = geom;

  PolySpan ref;
  switch (kind) {
  case FEKind::Lagrange:
    require(r >= 1, "make_element: Lagrange order must be >= 1");
    ref = polynomial_space(geom.type == CellType::Tet ? SpaceKind::P : SpaceKind::Q, r,
                           Arity::Scalar);
    break;
  case FEKind::Nedelec:
    ref = nedelec_span(r, geom.type);
    break;
  case FEKind::SigmaPlus:
    ref = sigma_plus_span(geom.type, k);
    break;
  case FEKind::GradDiv:
    ref = shape_span_W(geom.type, r, k);
    break;
  }

  if (identity_map(geom.map)) {
    elem.span = std::move(ref);
  } else {
    elem.span.arity = ref.arity;
    const auto rows = inverse_rows(geom.map);
    if (kind == FEKind::Lagrange || kind == FEKind::SigmaPlus) {
      for (const auto& v : ref.basis) elem.span.push(v.c[0].compose_affine(rows));
    } else if (kind == FEKind::Nedelec) {
      // covariant transform
      Mat3Q binvt = transpose3(inverse3(geom.map.B));
      for (const auto& v : ref.basis)
        elem.span.push(apply_matrix(binvt, v.compose_affine(rows)));
    } else {
      // contravariant (Piola) transform
      Mat3Q scaled = geom.map.B;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scaled[i][j] /= geom.map.det;
      for (const auto& v : ref.basis)
        elem.span.push(apply_matrix(scaled, v.compose_affine(rows)));
    }
  }

  elem.dofs = dof_set(kind, geom, r, k);
  if (elem.dofs.size() != elem.span.dim()) {
    std::ostringstream os;
    os << "make_element: dof count " << elem.dofs.size() << " != span dimension "
       << elem.span.dim();
    throw std::logic_error(os.str());
  }
  return elem;
}

Rational apply_dof(const CellGeometry& geom, const DofFunctional& dof,
                   const VectorPolynomial& field)
{
  DofApplier applier(geom, field);
  return applier.apply(dof);
}

std::vector<Rational> apply_dofs(const CellGeometry& geom, const std::vector<DofFunctional>& dofs,
                                 const VectorPolynomial& field)
{
  DofApplier applier(geom, field);
  std::vector<Rational> out;
  out.reserve(dofs.size());
  for (const auto& dof : dofs) out.push_back(applier.apply(dof));
  return out;
}

double apply_dof(const CellGeometry& geom, const DofFunctional& dof,
                 const std::function<std::array<double, 3>(const std::array<double, 3>&)>& value,
                 const std::function<double(const std::array<double, 3>&)>& divergence,
                 int quad_points)
{
  using K = DofFunctional::Kind;
  const bool tet = geom.type == CellType::Tet;
  auto vertd = [&](int v) {
    Vec3Q p = geom.vertex(v);
    return std::array<double, 3>{to_double(p[0]), to_double(p[1]), to_double(p[2])};
  };

  switch (dof.kind) {
  case K::VertexDivValue:
    return divergence(vertd(dof.entity));
  case K::LagrangePoint:
    return value(vertd(dof.entity))[0];
  case K::EdgeDivMoment:
  case K::LagrangeEdgeMoment:
  case K::NedelecEdgeMoment: {
    const auto& ee = geom.edges[dof.entity];
    auto p0 = vertd(ee.lv[0]), p1 = vertd(ee.lv[1]);
    std::array<double, 3> d{p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
    auto rule = gauss_legendre_01(quad_points);
    double sum = 0;
    for (int q = 0; q < quad_points; ++q) {
      double t = rule.points[q];
      std::array<double, 3> x{p0[0] + t * d[0], p0[1] + t * d[1], p0[2] + t * d[2]};
      double integrand = 0;
      if (dof.kind == K::EdgeDivMoment)
        integrand = divergence(x) * dof.weight.eval(std::array<double, 3>{t, 0.0, 0.0});
      else if (dof.kind == K::LagrangeEdgeMoment)
        integrand = value(x)[0] * dof.weight.eval(std::array<double, 3>{t, 0.0, 0.0});
      else {
        auto u = value(x);
        integrand = (u[0] * d[0] + u[1] * d[1] + u[2] * d[2]) * dof.weight.eval(std::array<double, 3>{t, 0.0, 0.0});
      }
      sum += rule.weights[q] * integrand;
    }
    return sum;
  }
  case K::FaceDivMoment:
  case K::LagrangeFaceMoment:
  case K::FaceNormalMoment:
  case K::NedelecFaceMoment: {
    const auto& fe = geom.faces[dof.entity];
    auto v0 = vertd(fe.lv[0]), v1 = vertd(fe.lv[1]), v2 = vertd(fe.lv[2]);
    std::array<double, 3> d1{v1[0] - v0[0], v1[1] - v0[1], v1[2] - v0[2]};
    std::array<double, 3> d2{v2[0] - v0[0], v2[1] - v0[1], v2[2] - v0[2]};
    std::array<double, 3> nrm{d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2],
                              d1[0] * d2[1] - d1[1] * d2[0]};
    auto rule = tet ? triangle_rule(quad_points) : square_rule(quad_points);
    double sum = 0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double s = rule.points[q][0], t = rule.points[q][1];
      std::array<double, 3> x{v0[0] + s * d1[0] + t * d2[0], v0[1] + s * d1[1] + t * d2[1],
                              v0[2] + s * d1[2] + t * d2[2]};
      double integrand = 0;
      if (dof.kind == K::FaceDivMoment)
        integrand = (tet ? 2.0 : 1.0) * divergence(x) * dof.weight.eval(std::array<double, 3>{s, t, 0.0});
      else if (dof.kind == K::LagrangeFaceMoment)
        integrand = (tet ? 2.0 : 1.0) * value(x)[0] * dof.weight.eval(std::array<double, 3>{s, t, 0.0});
      else if (dof.kind == K::FaceNormalMoment) {
        auto u = value(x);
        integrand =
            (u[0] * nrm[0] + u[1] * nrm[1] + u[2] * nrm[2]) * dof.weight.eval(std::array<double, 3>{s, t, 0.0});
      } else {
        auto u = value(x);
        double ud1 = u[0] * d1[0] + u[1] * d1[1] + u[2] * d1[2];
        double ud2 = u[0] * d2[0] + u[1] * d2[1] + u[2] * d2[2];
        integrand = ud1 * dof.weight_v.c[0].eval(std::array<double, 3>{s, t, 0.0}) +
                    ud2 * dof.weight_v.c[1].eval(std::array<double, 3>{s, t, 0.0});
      }
      sum += rule.weights[q] * integrand;
    }
    return sum;
  }
  case K::InteriorMoment:
  case K::LagrangeInteriorMoment:
  case K::NedelecInteriorMoment: {
    auto rule = tet ? tet_rule(quad_points) : hex_rule(quad_points);
    Eigen::Matrix3d B = geom.map.Bd();
    Eigen::Vector3d b = geom.map.bd();
    Eigen::Matrix3d binvt = B.inverse().transpose();
    double det = to_double(geom.map.det);
    double sum = 0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::Vector3d xr(rule.points[q][0], rule.points[q][1], rule.points[q][2]);
      Eigen::Vector3d xp = B * xr + b;
      std::array<double, 3> x{xp[0], xp[1], xp[2]};
      double integrand = 0;
      if (dof.kind == K::LagrangeInteriorMoment) {
        double refvol_inv = tet ? 6.0 : 1.0;
        integrand = refvol_inv * value(x)[0] * dof.weight.eval(rule.points[q]);
      } else {
        Eigen::Vector3d wr(dof.weight_v.c[0].eval(rule.points[q]),
                           dof.weight_v.c[1].eval(rule.points[q]),
                           dof.weight_v.c[2].eval(rule.points[q]));
        Eigen::Vector3d w = (dof.kind == K::InteriorMoment) ? Eigen::Vector3d(det * (binvt * wr))
                                                            : Eigen::Vector3d(B * wr);
        auto u = value(x);
        integrand = u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
      }
      sum += rule.weights[q] * integrand;
    }
    return sum;
  }
  }
  throw std::logic_error("apply_dof: unknown functional kind");
}

RationalMatrix vandermonde(const ElementDef& elem)
{
  const std::size_t n = elem.dofs.size();
  RationalMatrix v(n, elem.span.dim());
  for (std::size_t i = 0; i < elem.span.dim(); ++i) {
    DofApplier applier(elem.geom, elem.span.basis[i]);
    for (std::size_t a = 0; a < n; ++a) v(a, i) = applier.apply(elem.dofs[a]);
  }
  return v;
}

NodalBasis build_nodal_basis(const ElementDef& elem, bool exact_path)
{
  RationalMatrix v = vandermonde(elem);
  const std::size_t n = v.rows();
  Eigen::MatrixXd vd(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vd(i, j) = to_double(v(i, j));

  NodalBasis basis;
  if (exact_path) {
    try {
      basis.coeff_exact = inverse_exact(v);
    } catch (const std::runtime_error&) {
      throw std::runtime_error("build_nodal_basis: unisolvence failure (singular Vandermonde)");
    }
    basis.exact = true;
    basis.coeff.resize(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) basis.coeff(i, j) = to_double(basis.coeff_exact(i, j));
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(vd);
    if (!lu.isInvertible())
      throw std::runtime_error("build_nodal_basis: unisolvence failure (singular Vandermonde)");
    basis.coeff = lu.inverse();
  }
  basis.condition = vd.norm() * basis.coeff.norm();
  return basis;
}

bool unisolvent(const ElementDef& elem)
{
  if (elem.dofs.size() != elem.span.dim()) return false;
  RationalMatrix v = vandermonde(elem);
  return rank_hybrid(v) == v.rows();
}

std::string element_to_json(const ElementDef& elem, const NodalBasis& basis)
{
  nlohmann::json j;
  j["cell"] = elem.cell == CellType::Tet ? "tet" : "hex";
  switch (elem.kind) {
  case FEKind::Lagrange:
    j["kind"] = "lagrange";
    break;
  case FEKind::Nedelec:
    j["kind"] = "nedelec";
    break;
  case FEKind::GradDiv:
    j["kind"] = "graddiv";
    break;
  case FEKind::SigmaPlus:
    j["kind"] = "sigma_plus";
    break;
  }
  j["r"] = elem.r;
  j["k"] = elem.k;
  j["dim"] = elem.span.dim();
  j["span"] = nlohmann::json::parse(span_to_json(elem.span));
  nlohmann::json dofs = nlohmann::json::array();
  for (const auto& d : elem.dofs)
    dofs.push_back({{"kind", int(d.kind)},
                    {"entity_dim", d.entity_dim},
                    {"entity", d.entity},
                    {"weight_index", d.weight_index}});
  j["dofs"] = std::move(dofs);
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < basis.coeff.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < basis.coeff.cols(); ++c) row.push_back(basis.coeff(i, c));
    rows.push_back(std::move(row));
  }
  j["nodal_coefficients"] = std::move(rows);
  j["condition"] = basis.condition;
  return j.dump(2);
}

} // namespace graddiv
