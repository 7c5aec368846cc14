#include "pscal/geometry/mesh_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "pscal/error.hpp"
#include "pscal/simd/kernels.hpp"

namespace pscal::geometry {

namespace {

double cotangent(const Eigen::Vector3d& e1, const Eigen::Vector3d& e2) {
  return e1.dot(e2) / e1.cross(e2).norm();
}

double spherical_triangle_area(Eigen::Vector3d a, Eigen::Vector3d b, Eigen::Vector3d c, double r) {
  a.normalize();
  b.normalize();
  c.normalize();
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den) * r * r;
}

}  // namespace

MeshCalculus::MeshCalculus(TriMesh mesh, std::optional<double> sphere_radius)
    : mesh_(std::move(mesh)), topology_(check_closed_orientable(mesh_)) {
  const std::size_t nv = mesh_.vertices.size();
  weights_.assign(nv, 0.0);

  std::map<std::pair<int, int>, double> edge_cot;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh_.faces.size() * 9);

  for (const auto& f : mesh_.faces) {
    const Eigen::Vector3d& p0 = mesh_.vertices[f[0]];
    const Eigen::Vector3d& p1 = mesh_.vertices[f[1]];
    const Eigen::Vector3d& p2 = mesh_.vertices[f[2]];
    const Eigen::Vector3d cross = (p1 - p0).cross(p2 - p0);
    const double area = 0.5 * cross.norm();
    surface_area_ += area;

    const double lumped = sphere_radius ? spherical_triangle_area(p0, p1, p2, *sphere_radius) / 3.0
                                        : area / 3.0;
    for (int c = 0; c < 3; ++c) weights_[f[c]] += lumped;

    for (int c = 0; c < 3; ++c) {
      const Eigen::Vector3d& a = mesh_.vertices[f[c]];
      const int ib = f[(c + 1) % 3];
      const int id = f[(c + 2) % 3];
      const double cot = cotangent(mesh_.vertices[ib] - a, mesh_.vertices[id] - a);
      edge_cot[{std::min(ib, id), std::max(ib, id)}] += 0.5 * cot;
    }

    const Eigen::Vector3d normal = cross.normalized();
    std::array<Eigen::Vector3d, 3> grad;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d& pa = mesh_.vertices[f[(i + 1) % 3]];
      const Eigen::Vector3d& pb = mesh_.vertices[f[(i + 2) % 3]];
      grad[i] = normal.cross(pb - pa) / (2.0 * area);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) triplets.emplace_back(f[i], f[j], area * grad[i].dot(grad[j]));
  }

  stiffness_.resize(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(nv));
  stiffness_.setFromTriplets(triplets.begin(), triplets.end());
  stiffness_.makeCompressed();

  std::vector<std::vector<std::pair<int, double>>> adjacency(nv);
  for (const auto& [edge, w] : edge_cot) {
    adjacency[edge.first].emplace_back(edge.second, w);
    adjacency[edge.second].emplace_back(edge.first, w);
  }
  row_ptr_.assign(nv + 1, 0);
  for (std::size_t i = 0; i < nv; ++i) {
    std::sort(adjacency[i].begin(), adjacency[i].end());
    row_ptr_[i + 1] = row_ptr_[i] + static_cast<std::int32_t>(adjacency[i].size());
    for (const auto& [j, w] : adjacency[i]) {
      cols_.push_back(j);
      cot_weights_.push_back(w);
    }
  }

  positions_.reserve(nv);
  for (const auto& v : mesh_.vertices) positions_.push_back({v.x(), v.y(), v.z()});
  h_ = mean_edge_length(mesh_);
}

void MeshCalculus::laplacian(std::span<const double> u, std::span<double> out) const {
  simd::active().csr_diff_apply(row_ptr_.data(), cols_.data(), cot_weights_.data(), u.data(),
                                out.data(), size());
  for (std::size_t i = 0; i < size(); ++i) out[i] /= weights_[i];
}

void MeshCalculus::grad_sq(std::span<const double> u, std::span<double> out) const {
  simd::active().csr_diff_sq(row_ptr_.data(), cols_.data(), cot_weights_.data(), u.data(),
                             out.data(), size());
  for (std::size_t i = 0; i < size(); ++i) out[i] /= 2.0 * weights_[i];
}

void MeshCalculus::stiffness_apply(std::span<const double> u, std::span<double> out) const {
  Eigen::Map<const Eigen::VectorXd> x(u.data(), static_cast<Eigen::Index>(u.size()));
  Eigen::Map<Eigen::VectorXd> y(out.data(), static_cast<Eigen::Index>(out.size()));
  y.noalias() = stiffness_ * x;
}

std::vector<double> MeshCalculus::angle_defect_scalar_curvature() const {
  const std::size_t nv = size();
  std::vector<double> angle_sum(nv, 0.0);
  std::vector<double> mixed_area(nv, 0.0);

  for (const auto& f : mesh_.faces) {
    std::array<Eigen::Vector3d, 3> p{mesh_.vertices[f[0]], mesh_.vertices[f[1]], mesh_.vertices[f[2]]};
    std::array<double, 3> angle{};
    std::array<double, 3> cot{};
    for (int c = 0; c < 3; ++c) {
      const Eigen::Vector3d e1 = p[(c + 1) % 3] - p[c];
      const Eigen::Vector3d e2 = p[(c + 2) % 3] - p[c];
      angle[c] = std::atan2(e1.cross(e2).norm(), e1.dot(e2));
      cot[c] = cotangent(e1, e2);
      angle_sum[f[c]] += angle[c];
    }
    const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    const bool obtuse = angle[0] > std::numbers::pi / 2 || angle[1] > std::numbers::pi / 2 ||
                        angle[2] > std::numbers::pi / 2;
    for (int c = 0; c < 3; ++c) {
      if (!obtuse) {
        const int n1 = (c + 1) % 3;
        const int n2 = (c + 2) % 3;
        // Voronoi share: edges from this corner weighted by the opposite cotangents.
        mixed_area[f[c]] += 0.125 * ((p[n2] - p[c]).squaredNorm() * cot[n1] +
                                     (p[n1] - p[c]).squaredNorm() * cot[n2]);
      } else {
        mixed_area[f[c]] += angle[c] > std::numbers::pi / 2 ? area / 2.0 : area / 4.0;
      }
    }
  }

  std::vector<double> scal(nv);
  for (std::size_t i = 0; i < nv; ++i)
    scal[i] = 2.0 * (2.0 * std::numbers::pi - angle_sum[i]) / mixed_area[i];
  return scal;
}

}  // namespace pscal::geometry
