#pragma once

#include <cstdint>
#include <optional>

#include "pscal/geometry/calculus.hpp"
#include "pscal/geometry/trimesh.hpp"

namespace pscal::geometry {

/// Cotangent-weight calculus on a closed triangle mesh with lumped (vertex)
/// quadrature.
///
/// Laplacian:  (L u)_i = (1/w_i) sum_j c_ij (u_j - u_i), c_ij = (cot a + cot b)/2.
/// |grad u|^2: g_i = (1/(2 w_i)) sum_j c_ij (u_j - u_i)^2, so that
///             sum_i w_i g_i = u^T K u exactly.
/// Stiffness:  K assembled element-by-element from P1 hat-function gradients.
///
/// Quadrature weights are barycentric (one third of each incident triangle's
/// area). When `sphere_radius` is given, the areas of the corresponding
/// spherical triangles are used instead so that the weights sum to the exact
/// sphere area.
class MeshCalculus final : public Calculus {
 public:
  explicit MeshCalculus(TriMesh mesh, std::optional<double> sphere_radius = std::nullopt);

  std::size_t size() const override { return mesh_.vertices.size(); }
  std::span<const double> weights() const override { return weights_; }
  void laplacian(std::span<const double> u, std::span<double> out) const override;
  void grad_sq(std::span<const double> u, std::span<double> out) const override;
  void stiffness_apply(std::span<const double> u, std::span<double> out) const override;
  const Eigen::SparseMatrix<double>* stiffness_matrix() const override { return &stiffness_; }
  const std::vector<std::array<double, 3>>& positions() const override { return positions_; }
  double mesh_size() const override { return h_; }
  bool spectral() const override { return false; }

  const TriMesh& mesh() const { return mesh_; }
  const MeshTopology& topology() const { return topology_; }

  /// Scalar curvature 2K with K = angle defect / mixed Voronoi area.
  std::vector<double> angle_defect_scalar_curvature() const;

  /// Sum of triangle areas of the embedded mesh.
  double surface_area() const { return surface_area_; }

 private:
  TriMesh mesh_;
  MeshTopology topology_;
  std::vector<double> weights_;
  std::vector<std::int32_t> row_ptr_;
  std::vector<std::int32_t> cols_;
  std::vector<double> cot_weights_;
  Eigen::SparseMatrix<double> stiffness_;
  std::vector<std::array<double, 3>> positions_;
  double h_ = 0.0;
  double surface_area_ = 0.0;
};

}  // namespace pscal::geometry
