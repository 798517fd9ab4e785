#include "graddiv/assembly.hpp"

#include "graddiv/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace graddiv {

FastPoly::FastPoly(const Polynomial& p)
{
  for (const auto& [m, c] : p.terms()) {
    terms_.push_back({m.a, to_double(c)});
    max_deg_ = std::max({max_deg_, m.a[0], m.a[1], m.a[2]});
  }
}

double FastPoly::eval(const std::array<std::vector<double>, 3>& powers) const
{
  double out = 0;
  for (const auto& t : terms_)
    out += t.c * powers[0][t.e[0]] * powers[1][t.e[1]] * powers[2][t.e[2]];
  return out;
}

namespace {

std::array<std::vector<double>, 3> make_powers(const std::array<double, 3>& x, int deg)
{
  std::array<std::vector<double>, 3> p;
  for (int i = 0; i < 3; ++i) {
    p[i].resize(deg + 1);
    p[i][0] = 1;
    for (int e = 1; e <= deg; ++e) p[i][e] = p[i][e - 1] * x[i];
  }
  return p;
}

int class_span_degree(const GlobalSpace& w, int cls)
{
  int d = 0;
  for (const auto& n : w.class_nodal[cls]) d = std::max(d, n.degree());
  return d;
}

// basis values and grad-div values at class-local quadrature points,
// flattened as vals[(q * nl + i) * 3 + comp]
struct ClassTables {
  std::vector<std::array<double, 3>> points; // class-local coordinates
  std::vector<double> weights;               // includes |det B|
  std::vector<double> vals;
  std::vector<double> gdvals;
  std::size_t nl = 0;
};

ClassTables tabulate_class(const GlobalSpace& w, int cls, const QuadratureRule& rule)
{
  const auto& map = w.class_elems[cls].geom.map;
  const Eigen::Matrix3d B = map.Bd();
  const Eigen::Vector3d b = map.bd();
  const double adet = std::abs(to_double(map.det));

  const auto& nodal = w.class_nodal[cls];
  std::vector<FastVectorPoly> fast, gdfast;
  int deg = 0;
  for (std::size_t j = 0; j < nodal.size(); ++j) {
    fast.emplace_back(nodal[j]);
    gdfast.emplace_back(grad(w.class_nodal_div[cls][j]));
    deg = std::max(deg, nodal[j].degree());
  }

  ClassTables t;
  t.nl = nodal.size();
  t.points.resize(rule.size());
  t.weights.resize(rule.size());
  t.vals.resize(rule.size() * t.nl * 3);
  t.gdvals.resize(rule.size() * t.nl * 3);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Eigen::Vector3d xq = B * Eigen::Vector3d(rule.points[q][0], rule.points[q][1],
                                             rule.points[q][2]) +
                         b;
    t.points[q] = {xq[0], xq[1], xq[2]};
    t.weights[q] = rule.weights[q] * adet;
    auto pw = make_powers(t.points[q], deg);
    for (std::size_t i = 0; i < t.nl; ++i)
      for (int c = 0; c < 3; ++c) {
        t.vals[(q * t.nl + i) * 3 + c] = fast[i].c[c].eval(pw);
        t.gdvals[(q * t.nl + i) * 3 + c] = gdfast[i].c[c].eval(pw);
      }
  }
  return t;
}

} // namespace

std::vector<Eigen::MatrixXd> local_quad_div_matrices(const GlobalSpace& w)
{
  const int nclasses = num_cell_classes(*w.mesh);
  std::vector<Eigen::MatrixXd> out(nclasses);
  for (int cls = 0; cls < nclasses; ++cls) {
    int deg = class_span_degree(w, cls);
    auto rule = cell_rule(w.mesh->cell_type, 2 * deg);
    auto t = tabulate_class(w, cls, rule);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(t.nl, t.nl);
    for (std::size_t q = 0; q < t.weights.size(); ++q) {
      const double* v = &t.vals[q * t.nl * 3];
      const double* g = &t.gdvals[q * t.nl * 3];
      for (std::size_t i = 0; i < t.nl; ++i)
        for (std::size_t j = i; j < t.nl; ++j) {
          double s = 0;
          for (int c = 0; c < 3; ++c)
            s += v[i * 3 + c] * v[j * 3 + c] + g[i * 3 + c] * g[j * 3 + c];
          m(i, j) += t.weights[q] * s;
        }
    }
    for (std::size_t i = 0; i < t.nl; ++i)
      for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
    out[cls] = std::move(m);
  }
  return out;
}

LinearSystem assemble_quad_div(const GlobalSpace& w, const PointFn& f, int f_degree,
                               int load_points)
{
  const StructuredMesh& mesh = *w.mesh;
  LinearSystem sys;
  sys.total_dofs = w.ndofs;
  sys.free = free_dofs(w);
  std::vector<int> fidx(w.ndofs, -1);
  for (std::size_t i = 0; i < sys.free.size(); ++i) fidx[sys.free[i]] = int(i);

  // stiffness
  auto locals = local_quad_div_matrices(w);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& m = locals[mesh.cells[c].class_id];
    const auto& gd = w.cell_dofs[c];
    for (std::size_t i = 0; i < gd.size(); ++i) {
      const int fi = fidx[gd[i]];
      if (fi < 0) continue;
      for (std::size_t j = 0; j < gd.size(); ++j) {
        const int fj = fidx[gd[j]];
        if (fj >= 0) trip.emplace_back(fi, fj, m(i, j));
      }
    }
  }
  sys.A.resize(Eigen::Index(sys.free.size()), Eigen::Index(sys.free.size()));
  sys.A.setFromTriplets(trip.begin(), trip.end());
  trip.clear();
  trip.shrink_to_fit();

  // load vector: per-class tables at a rule matched to the data degree
  const int nclasses = num_cell_classes(mesh);
  std::vector<ClassTables> tables(nclasses);
  for (int cls = 0; cls < nclasses; ++cls) {
    int n1d = load_points;
    if (n1d <= 0) n1d = (f_degree + class_span_degree(w, cls)) / 2 + 1;
    auto rule = mesh.cell_type == CellType::Tet ? tet_rule(n1d) : hex_rule(n1d);
    tables[cls] = tabulate_class(w, cls, rule);
  }

  sys.rhs = Eigen::VectorXd::Zero(Eigen::Index(sys.free.size()));
  std::vector<double> floc;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& t = tables[mesh.cells[c].class_id];
    const Eigen::Vector3d b = affine_map(mesh, int(c)).bd();
    floc.assign(t.nl, 0.0);
    for (std::size_t q = 0; q < t.weights.size(); ++q) {
      const std::array<double, 3> x{t.points[q][0] + b[0], t.points[q][1] + b[1],
                                    t.points[q][2] + b[2]};
      const auto fv = f(x);
      const double* v = &t.vals[q * t.nl * 3];
      for (std::size_t i = 0; i < t.nl; ++i)
        floc[i] += t.weights[q] *
                   (fv[0] * v[i * 3] + fv[1] * v[i * 3 + 1] + fv[2] * v[i * 3 + 2]);
    }
    const auto& gd = w.cell_dofs[c];
    for (std::size_t i = 0; i < gd.size(); ++i) {
      const int fi = fidx[gd[i]];
      if (fi >= 0) sys.rhs[fi] += floc[i];
    }
  }
  return sys;
}

Eigen::VectorXd expand_free(const LinearSystem& sys, const Eigen::VectorXd& xfree)
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(sys.total_dofs));
  for (std::size_t i = 0; i < sys.free.size(); ++i) out[sys.free[i]] = xfree[Eigen::Index(i)];
  return out;
}

} // namespace graddiv
