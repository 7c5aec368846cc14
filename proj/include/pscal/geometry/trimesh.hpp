#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace pscal::geometry {

/// Triangle surface mesh embedded in R^3. Faces index into `vertices`.
struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
};

struct MeshTopology {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler_characteristic = 0;
  int genus = 0;
};

/// Validates that the mesh is a closed, connected, consistently oriented
/// 2-manifold without degenerate faces. Throws TopologyError otherwise.
MeshTopology check_closed_orientable(const TriMesh& mesh);

/// Recursive midpoint subdivision of the icosahedron, re-projected onto the
/// sphere of `radius` at every level. Level 0 has 12 vertices, level L has
/// 10 * 4^L + 2.
TriMesh make_icosphere(int level, double radius = 1.0);

TriMesh read_off(const std::filesystem::path& path);
TriMesh read_obj(const std::filesystem::path& path);
/// Dispatches on the file extension (.off / .obj).
TriMesh read_mesh(const std::filesystem::path& path);

void write_off(const TriMesh& mesh, const std::filesystem::path& path);

double mean_edge_length(const TriMesh& mesh);

}  // namespace pscal::geometry
