// Structured tetrahedral (Kuhn split) and cuboid meshes of the unit cube
// with entity connectivity, boundary flags, and per-cell affine maps.
//
// Vertex coordinates are lattice points i/N, kept exactly. The global
// ordering key for vertices is the (z,y,x)-lexicographic order of their
// coordinates, which equals the order of their ids; entity vertex tuples
// are stored sorted by id. All orientation conventions downstream derive
// from this one key, so they are translation invariant across cells.
#pragma once

#include "graddiv/rational.hpp"
#include "graddiv/spaces.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace graddiv {

struct AffineMap {
  Mat3Q B;
  Vec3Q b;
  Rational det;

  Eigen::Matrix3d Bd() const
  {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = to_double(B[i][j]);
    return m;
  }
  Eigen::Vector3d bd() const
  {
    return {to_double(b[0]), to_double(b[1]), to_double(b[2])};
  }

  Vec3Q apply(const Vec3Q& x) const
  {
    Vec3Q out = apply3(B, x);
    for (int i = 0; i < 3; ++i) out[i] += b[i];
    return out;
  }
};

struct StructuredMesh {
  CellType cell_type;
  int N = 0;
  Rational h; // cube edge length 1/N

  // vertex lattice coordinates (multiples of 1/N)
  std::vector<std::array<int, 3>> vertex_lattice;

  struct Cell {
    std::vector<int> verts; // canonical order (reference-vertex image), det B > 0
    int class_id = 0;       // 0 for hexes, Kuhn class 0..5 for tets
  };
  std::vector<Cell> cells;

  std::vector<std::array<int, 2>> edges;  // sorted vertex ids
  std::vector<std::vector<int>> faces;    // sorted vertex ids (3 or 4)
  std::vector<std::vector<int>> face_cells; // incident cell ids
  std::vector<bool> vertex_boundary, edge_boundary, face_boundary;

  std::map<std::array<int, 2>, int> edge_index;
  std::map<std::vector<int>, int> face_index;

  std::size_t num_vertices() const { return vertex_lattice.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_faces() const { return faces.size(); }
  std::size_t num_cells() const { return cells.size(); }

  Vec3Q vertex(int id) const
  {
    return {Rational(vertex_lattice[id][0], N), Rational(vertex_lattice[id][1], N),
            Rational(vertex_lattice[id][2], N)};
  }

  long euler_characteristic() const
  {
    return long(num_vertices()) - long(num_edges()) + long(num_faces()) - long(num_cells());
  }

  // Line-oriented dump: VERTICES / EDGES / FACES / CELLS sections.
  std::string dump() const;
};

StructuredMesh build_hex_mesh(int N);
StructuredMesh build_tet_mesh(int N);

AffineMap affine_map(const StructuredMesh& mesh, int cell_id);

// Class-representative map (same B for every cell of the class, b = 0).
AffineMap class_map(const StructuredMesh& mesh, int class_id);
int num_cell_classes(const StructuredMesh& mesh);

} // namespace graddiv
