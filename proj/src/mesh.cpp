#include "graddiv/mesh.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace graddiv {

namespace {

// Reference cube vertex order.
constexpr int cube_verts[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                                  {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
constexpr int cube_edges[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3},
                                   {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
constexpr int cube_faces[6][4] = {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 4, 5},
                                  {2, 3, 6, 7}, {0, 2, 4, 6}, {1, 3, 5, 7}};

// Kuhn classes: permutations of axes; the tet is
// {corner, corner+e_p0, corner+e_p0+e_p1, corner+(1,1,1)}.
constexpr int kuhn_perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr bool kuhn_odd[6] = {false, true, true, false, false, true};

void finalize_entities(StructuredMesh& m)
{
  const bool tet = m.cell_type == CellType::Tet;
  std::set<std::array<int, 2>> edge_set;
  std::set<std::vector<int>> face_set;
  for (const auto& cell : m.cells) {
    if (tet) {
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          std::array<int, 2> e{cell.verts[i], cell.verts[j]};
          std::sort(e.begin(), e.end());
          edge_set.insert(e);
        }
      for (int skip = 0; skip < 4; ++skip) {
        std::vector<int> f;
        for (int i = 0; i < 4; ++i)
          if (i != skip) f.push_back(cell.verts[i]);
        std::sort(f.begin(), f.end());
        face_set.insert(std::move(f));
      }
    } else {
      for (const auto& e : cube_edges) {
        std::array<int, 2> ed{cell.verts[e[0]], cell.verts[e[1]]};
        std::sort(ed.begin(), ed.end());
        edge_set.insert(ed);
      }
      for (const auto& f : cube_faces) {
        std::vector<int> fv{cell.verts[f[0]], cell.verts[f[1]], cell.verts[f[2]],
                            cell.verts[f[3]]};
        std::sort(fv.begin(), fv.end());
        face_set.insert(std::move(fv));
      }
    }
  }
  m.edges.assign(edge_set.begin(), edge_set.end());
  m.faces.assign(face_set.begin(), face_set.end());
  for (std::size_t i = 0; i < m.edges.size(); ++i) m.edge_index[m.edges[i]] = int(i);
  for (std::size_t i = 0; i < m.faces.size(); ++i) m.face_index[m.faces[i]] = int(i);

  m.face_cells.assign(m.faces.size(), {});
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& cell = m.cells[c];
    if (tet) {
      for (int skip = 0; skip < 4; ++skip) {
        std::vector<int> f;
        for (int i = 0; i < 4; ++i)
          if (i != skip) f.push_back(cell.verts[i]);
        std::sort(f.begin(), f.end());
        m.face_cells[m.face_index.at(f)].push_back(int(c));
      }
    } else {
      for (const auto& f : cube_faces) {
        std::vector<int> fv{cell.verts[f[0]], cell.verts[f[1]], cell.verts[f[2]],
                            cell.verts[f[3]]};
        std::sort(fv.begin(), fv.end());
        m.face_cells[m.face_index.at(fv)].push_back(int(c));
      }
    }
  }

  auto on_domain_boundary = [&](const std::vector<int>& verts) {
    for (int axis = 0; axis < 3; ++axis)
      for (int plane : {0, m.N}) {
        bool all = true;
        for (int v : verts)
          if (m.vertex_lattice[v][axis] != plane) all = false;
        if (all) return true;
      }
    return false;
  };
  m.vertex_boundary.resize(m.num_vertices());
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    m.vertex_boundary[v] = on_domain_boundary({int(v)});
  m.edge_boundary.resize(m.num_edges());
  for (std::size_t e = 0; e < m.num_edges(); ++e)
    m.edge_boundary[e] = on_domain_boundary({m.edges[e][0], m.edges[e][1]});
  m.face_boundary.resize(m.num_faces());
  for (std::size_t f = 0; f < m.num_faces(); ++f)
    m.face_boundary[f] = m.face_cells[f].size() == 1;

  // consistency: interior faces shared by exactly two cells
  for (std::size_t f = 0; f < m.num_faces(); ++f)
    if (m.face_cells[f].size() != 1 && m.face_cells[f].size() != 2)
      throw std::logic_error("mesh: face incidence is not 1 or 2");
}

int vertex_id(int N, int x, int y, int z) { return x + (N + 1) * (y + (N + 1) * z); }

StructuredMesh init_mesh(CellType type, int N)
{
  if (N < 1) throw std::invalid_argument("mesh: N must be >= 1");
  StructuredMesh m;
  m.cell_type = type;
  m.N = N;
  m.h = Rational(1, N);
  for (int z = 0; z <= N; ++z)
    for (int y = 0; y <= N; ++y)
      for (int x = 0; x <= N; ++x)
        m.vertex_lattice.push_back({x, y, z});
  return m;
}

} // namespace

StructuredMesh build_hex_mesh(int N)
{
  StructuredMesh m = init_mesh(CellType::Hex, N);
  for (int z = 0; z < N; ++z)
    for (int y = 0; y < N; ++y)
      for (int x = 0; x < N; ++x) {
        StructuredMesh::Cell cell;
        for (const auto& cv : cube_verts)
          cell.verts.push_back(vertex_id(N, x + cv[0], y + cv[1], z + cv[2]));
        m.cells.push_back(std::move(cell));
      }
  finalize_entities(m);
  return m;
}

StructuredMesh build_tet_mesh(int N)
{
  StructuredMesh m = init_mesh(CellType::Tet, N);
  for (int z = 0; z < N; ++z)
    for (int y = 0; y < N; ++y)
      for (int x = 0; x < N; ++x)
        for (int cls = 0; cls < 6; ++cls) {
          const int* p = kuhn_perm[cls];
          std::array<int, 3> c0{x, y, z};
          std::array<int, 3> c1 = c0, c2 = c0;
          c1[p[0]] += 1;
          c2[p[0]] += 1;
          c2[p[1]] += 1;
          std::array<int, 3> c3{x + 1, y + 1, z + 1};
          StructuredMesh::Cell cell;
          cell.class_id = cls;
          cell.verts = {vertex_id(N, c0[0], c0[1], c0[2]), vertex_id(N, c1[0], c1[1], c1[2]),
                        vertex_id(N, c2[0], c2[1], c2[2]), vertex_id(N, c3[0], c3[1], c3[2])};
          if (kuhn_odd[cls]) std::swap(cell.verts[1], cell.verts[2]);
          m.cells.push_back(std::move(cell));
        }
  finalize_entities(m);
  return m;
}

AffineMap affine_map(const StructuredMesh& mesh, int cell_id)
{
  if (cell_id < 0 || cell_id >= int(mesh.num_cells()))
    throw std::out_of_range("affine_map: invalid cell id");
  const auto& cell = mesh.cells[cell_id];
  AffineMap map;
  Vec3Q v0 = mesh.vertex(cell.verts[0]);
  map.b = v0;
  if (mesh.cell_type == CellType::Tet) {
    for (int col = 0; col < 3; ++col) {
      Vec3Q vc = mesh.vertex(cell.verts[col + 1]);
      for (int i = 0; i < 3; ++i) map.B[i][col] = vc[i] - v0[i];
    }
  } else {
    // axis-aligned cube of edge h
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        map.B[i][j] = (i == j) ? mesh.h : Rational(0);
  }
  map.det = det3(map.B);
  if (map.det <= 0) throw std::logic_error("affine_map: non-positive orientation");
  return map;
}

AffineMap class_map(const StructuredMesh& mesh, int class_id)
{
  for (std::size_t c = 0; c < mesh.num_cells(); ++c)
    if (mesh.cells[c].class_id == class_id) {
      AffineMap map = affine_map(mesh, int(c));
      map.b = {Rational(0), Rational(0), Rational(0)};
      return map;
    }
  throw std::out_of_range("class_map: invalid class id");
}

int num_cell_classes(const StructuredMesh& mesh)
{
  return mesh.cell_type == CellType::Tet ? 6 : 1;
}

std::string StructuredMesh::dump() const
{
  std::ostringstream os;
  os << "VERTICES " << num_vertices() << "\n";
  for (std::size_t v = 0; v < num_vertices(); ++v) {
    Vec3Q x = vertex(int(v));
    os << v << " " << x[0] << " " << x[1] << " " << x[2]
       << (vertex_boundary[v] ? " boundary" : "") << "\n";
  }
  os << "EDGES " << num_edges() << "\n";
  for (std::size_t e = 0; e < num_edges(); ++e)
    os << e << " " << edges[e][0] << " " << edges[e][1]
       << (edge_boundary[e] ? " boundary" : "") << "\n";
  os << "FACES " << num_faces() << "\n";
  for (std::size_t f = 0; f < num_faces(); ++f) {
    os << f;
    for (int v : faces[f]) os << " " << v;
    os << (face_boundary[f] ? " boundary" : "") << "\n";
  }
  os << "CELLS " << num_cells() << "\n";
  for (std::size_t c = 0; c < num_cells(); ++c) {
    os << c;
    for (int v : cells[c].verts) os << " " << v;
    os << " class " << cells[c].class_id << "\n";
  }
  return os.str();
}

} // namespace graddiv
