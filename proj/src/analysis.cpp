#include "graddiv/analysis.hpp"

#include "graddiv/assembly.hpp"
#include "graddiv/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace graddiv {

namespace {

int class_span_degree(const GlobalSpace& w, int cls)
{
  int d = 0;
  for (const auto& n : w.class_nodal[cls]) d = std::max(d, n.degree());
  return d;
}

// basis values, divergences, and grad-div values at class-local points
struct BasisAtPoints {
  std::vector<double> vals;   // (np * nl * 3)
  std::vector<double> divs;   // (np * nl)
  std::vector<double> gdvals; // (np * nl * 3)
  std::size_t nl = 0;
};

BasisAtPoints tabulate_at(const GlobalSpace& w, int cls,
                          const std::vector<std::array<double, 3>>& pts)
{
  const auto& nodal = w.class_nodal[cls];
  std::vector<FastVectorPoly> fast, gdfast;
  std::vector<FastPoly> divfast;
  int deg = 0;
  for (std::size_t j = 0; j < nodal.size(); ++j) {
    fast.emplace_back(nodal[j]);
    divfast.emplace_back(w.class_nodal_div[cls][j]);
    gdfast.emplace_back(grad(w.class_nodal_div[cls][j]));
    deg = std::max(deg, nodal[j].degree());
  }
  BasisAtPoints t;
  t.nl = nodal.size();
  t.vals.resize(pts.size() * t.nl * 3);
  t.divs.resize(pts.size() * t.nl);
  t.gdvals.resize(pts.size() * t.nl * 3);
  std::array<std::vector<double>, 3> pw;
  for (int i = 0; i < 3; ++i) pw[i].resize(deg + 1);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    for (int i = 0; i < 3; ++i) {
      pw[i][0] = 1;
      for (int e = 1; e <= deg; ++e) pw[i][e] = pw[i][e - 1] * pts[q][i];
    }
    for (std::size_t i = 0; i < t.nl; ++i) {
      t.divs[q * t.nl + i] = divfast[i].eval(pw);
      for (int c = 0; c < 3; ++c) {
        t.vals[(q * t.nl + i) * 3 + c] = fast[i].c[c].eval(pw);
        t.gdvals[(q * t.nl + i) * 3 + c] = gdfast[i].c[c].eval(pw);
      }
    }
  }
  return t;
}

// map a [0,1] Gauss rule to [-1,1]
Rule1D gauss_sym(int n)
{
  Rule1D r = gauss_legendre_01(n);
  for (auto& x : r.points) x = 2 * x - 1;
  for (auto& w : r.weights) w *= 2;
  return r;
}

} // namespace

ErrorNorms error_norms(const GlobalSpace& w, const Eigen::VectorXd& coeffs,
                       const FieldEval& exact, int n1d)
{
  const StructuredMesh& mesh = *w.mesh;
  const int nclasses = num_cell_classes(mesh);

  struct ClassData {
    std::vector<std::array<double, 3>> pts; // class-local
    std::vector<double> wts;                // include |det|
    BasisAtPoints tab;
  };
  std::vector<ClassData> cd(nclasses);
  for (int cls = 0; cls < nclasses; ++cls) {
    int n = n1d > 0 ? n1d : (ManufacturedEval::f_degree + class_span_degree(w, cls)) / 2 + 1;
    auto rule = mesh.cell_type == CellType::Tet ? tet_rule(n) : hex_rule(n);
    const auto& map = w.class_elems[cls].geom.map;
    const Eigen::Matrix3d B = map.Bd();
    const double adet = std::abs(to_double(map.det));
    auto& d = cd[cls];
    d.pts.resize(rule.size());
    d.wts.resize(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::Vector3d x = B * Eigen::Vector3d(rule.points[q][0], rule.points[q][1],
                                              rule.points[q][2]);
      d.pts[q] = {x[0], x[1], x[2]};
      d.wts[q] = rule.weights[q] * adet;
    }
    d.tab = tabulate_at(w, cls, d.pts);
  }

  double l2 = 0, dl2 = 0, dh1 = 0;
  std::vector<double> loc;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& d = cd[mesh.cells[c].class_id];
    const Eigen::Vector3d b = affine_map(mesh, int(c)).bd();
    const auto& gd = w.cell_dofs[c];
    loc.resize(gd.size());
    for (std::size_t i = 0; i < gd.size(); ++i) loc[i] = coeffs[gd[i]];
    const std::size_t nl = d.tab.nl;
    for (std::size_t q = 0; q < d.pts.size(); ++q) {
      double uh[3] = {0, 0, 0}, gh[3] = {0, 0, 0}, dh = 0;
      const double* v = &d.tab.vals[q * nl * 3];
      const double* g = &d.tab.gdvals[q * nl * 3];
      const double* dv = &d.tab.divs[q * nl];
      for (std::size_t i = 0; i < nl; ++i) {
        dh += loc[i] * dv[i];
        for (int k = 0; k < 3; ++k) {
          uh[k] += loc[i] * v[i * 3 + k];
          gh[k] += loc[i] * g[i * 3 + k];
        }
      }
      const std::array<double, 3> x{d.pts[q][0] + b[0], d.pts[q][1] + b[1], d.pts[q][2] + b[2]};
      const auto ue = exact.value(x);
      const auto ge = exact.grad_divergence(x);
      const double de = exact.divergence(x);
      double s1 = 0, s3 = 0;
      for (int k = 0; k < 3; ++k) {
        s1 += (uh[k] - ue[k]) * (uh[k] - ue[k]);
        s3 += (gh[k] - ge[k]) * (gh[k] - ge[k]);
      }
      l2 += d.wts[q] * s1;
      dl2 += d.wts[q] * (dh - de) * (dh - de);
      dh1 += d.wts[q] * s3;
    }
  }
  return {std::sqrt(l2), std::sqrt(dl2), std::sqrt(dh1)};
}

DiscreteNorms discrete_norms(const GlobalSpace& w, const Eigen::VectorXd& coeffs,
                             const FieldEval& exact, int n1d)
{
  const StructuredMesh& mesh = *w.mesh;
  if (mesh.cell_type != CellType::Hex)
    throw std::invalid_argument("discrete_norms: only cuboid meshes are supported");

  const int k = w.k, r = w.r;
  const auto& map = w.class_elems[0].geom.map;
  const double h = to_double(map.B[0][0]); // cube side
  const double half = h / 2;

  const int nline = n1d > 0 ? n1d : (ManufacturedEval::f_degree + class_span_degree(w, 0)) / 2 + 2;
  Rule1D line = gauss_legendre_01(nline); // on [0,1], scaled by h below

  // Point lists (class-local) and per-point weights for the three norms.
  std::vector<std::array<double, 3>> upts, vpts, wpts;
  std::vector<double> uw, vw, ww;

  {
    Rule1D lob = gauss_lobatto(k);
    for (int a = 0; a < k; ++a)
      for (int bI = 0; bI < k; ++bI)
        for (int c = 0; c < k; ++c) {
          upts.push_back({half + half * lob.points[a], half + half * lob.points[bI],
                          half + half * lob.points[c]});
          uw.push_back(lob.weights[a] * lob.weights[bI] * lob.weights[c] * half * half * half);
        }
  }
  {
    const int p = k + r - 2;
    Rule1D g = gauss_sym(p);
    for (int comp = 0; comp < 3; ++comp)
      for (int m = 0; m < p; ++m)
        for (int n = 0; n < p; ++n) {
          const double s = half + half * g.points[m];
          const double t = half + half * g.points[n];
          for (int q = 0; q < nline; ++q) {
            std::array<double, 3> x;
            x[comp] = h * line.points[q];
            x[(comp + 1) % 3] = s;
            x[(comp + 2) % 3] = t;
            vpts.push_back(x);
            // h_y h_z w_m w_n times the line measure h w_q; component tag
            // packed in the weight stream order (see accumulation below)
            vw.push_back(half * half * g.weights[m] * g.weights[n] * h * line.weights[q]);
          }
        }
  }
  {
    Rule1D g = gauss_sym(k - 1);
    for (int comp = 0; comp < 3; ++comp)
      for (int n = 0; n < k - 1; ++n) {
        const double s = half + half * g.points[n];
        for (int q1 = 0; q1 < nline; ++q1)
          for (int q2 = 0; q2 < nline; ++q2) {
            std::array<double, 3> x;
            x[comp] = s;
            x[(comp + 1) % 3] = h * line.points[q1];
            x[(comp + 2) % 3] = h * line.points[q2];
            wpts.push_back(x);
            ww.push_back(half * g.weights[n] * h * line.weights[q1] * h * line.weights[q2]);
          }
      }
  }

  auto utab = tabulate_at(w, 0, upts);
  auto vtab = tabulate_at(w, 0, vpts);
  auto wtab = tabulate_at(w, 0, wpts);
  const std::size_t nl = utab.nl;
  const std::size_t v_per_comp = vpts.size() / 3;
  const std::size_t w_per_comp = wpts.size() / 3;

  double nu = 0, nv = 0, nw = 0;
  std::vector<double> loc;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Eigen::Vector3d b = affine_map(mesh, int(c)).bd();
    const auto& gd = w.cell_dofs[c];
    loc.resize(gd.size());
    for (std::size_t i = 0; i < gd.size(); ++i) loc[i] = coeffs[gd[i]];

    for (std::size_t q = 0; q < upts.size(); ++q) {
      double dh = 0;
      const double* dv = &utab.divs[q * nl];
      for (std::size_t i = 0; i < nl; ++i) dh += loc[i] * dv[i];
      const std::array<double, 3> x{upts[q][0] + b[0], upts[q][1] + b[1], upts[q][2] + b[2]};
      const double e = dh - exact.divergence(x);
      nu += uw[q] * e * e;
    }
    for (std::size_t q = 0; q < vpts.size(); ++q) {
      const int comp = int(q / v_per_comp);
      double uh = 0;
      const double* v = &vtab.vals[q * nl * 3];
      for (std::size_t i = 0; i < nl; ++i) uh += loc[i] * v[i * 3 + comp];
      const std::array<double, 3> x{vpts[q][0] + b[0], vpts[q][1] + b[1], vpts[q][2] + b[2]};
      const double e = uh - exact.value(x)[comp];
      nv += vw[q] * e * e;
    }
    for (std::size_t q = 0; q < wpts.size(); ++q) {
      const int comp = int(q / w_per_comp);
      double gh = 0;
      const double* g = &wtab.gdvals[q * nl * 3];
      for (std::size_t i = 0; i < nl; ++i) gh += loc[i] * g[i * 3 + comp];
      const std::array<double, 3> x{wpts[q][0] + b[0], wpts[q][1] + b[1], wpts[q][2] + b[2]};
      const double e = gh - exact.grad_divergence(x)[comp];
      nw += ww[q] * e * e;
    }
  }
  return {std::sqrt(nu), std::sqrt(nv), std::sqrt(nw)};
}

double convergence_rate(double v0, double v1, double h0, double h1)
{
  if (!(h0 > h1) || h1 <= 0) throw std::invalid_argument("convergence_rate: h must decrease");
  return std::log(v0 / v1) / std::log(h0 / h1);
}

void RateTable::add_row(int n, double hh, const std::vector<double>& vals)
{
  if (vals.size() != norms.size())
    throw std::invalid_argument("RateTable: value count does not match norm count");
  if (!h.empty() && hh >= h.back())
    throw std::invalid_argument("RateTable: mesh sizes must be strictly decreasing");
  std::vector<double> rr(vals.size(), std::numeric_limits<double>::quiet_NaN());
  if (!h.empty())
    for (std::size_t j = 0; j < vals.size(); ++j)
      rr[j] = convergence_rate(values.back()[j], vals[j], h.back(), hh);
  N.push_back(n);
  h.push_back(hh);
  values.push_back(vals);
  rates.push_back(rr);
}

namespace {

std::string fmt_e(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fmt_rate(double v)
{
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

} // namespace

std::string to_csv(const RateTable& t)
{
  std::ostringstream os;
  os << "N,h,norm,value,rate\n";
  for (std::size_t i = 0; i < t.N.size(); ++i)
    for (std::size_t j = 0; j < t.norms.size(); ++j)
      os << t.N[i] << ',' << fmt_e(t.h[i]) << ',' << t.norms[j] << ',' << fmt_e(t.values[i][j])
         << ',' << fmt_rate(t.rates[i][j]) << '\n';
  return os.str();
}

std::string to_markdown(const RateTable& t)
{
  std::ostringstream os;
  os << "| N | h |";
  for (const auto& n : t.norms) os << ' ' << n << " | rate |";
  os << '\n' << "|---|---|";
  for (std::size_t j = 0; j < t.norms.size(); ++j) os << "---|---|";
  os << '\n';
  for (std::size_t i = 0; i < t.N.size(); ++i) {
    os << "| " << t.N[i] << " | " << fmt_e(t.h[i]) << " |";
    for (std::size_t j = 0; j < t.norms.size(); ++j) {
      const std::string r = fmt_rate(t.rates[i][j]);
      os << ' ' << fmt_e(t.values[i][j]) << " | " << (r.empty() ? "-" : r) << " |";
    }
    os << '\n';
  }
  return os.str();
}

std::string to_dat(const RateTable& t)
{
  std::ostringstream os;
  os << "# h";
  for (const auto& n : t.norms) os << ' ' << n;
  os << '\n';
  for (std::size_t i = 0; i < t.N.size(); ++i) {
    os << fmt_e(t.h[i]);
    for (std::size_t j = 0; j < t.norms.size(); ++j) os << ' ' << fmt_e(t.values[i][j]);
    os << '\n';
  }
  return os.str();
}

} // namespace graddiv
