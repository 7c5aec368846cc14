#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace pscal::geometry {

/// Discrete calculus on a node set with positive quadrature weights.
///
/// Conventions shared by every backend:
///  - laplacian() is div(grad), so its spectrum is nonpositive;
///  - stiffness_apply() is the gradient of the Dirichlet energy
///    E(u) = 1/2 sum_i w_i |grad u|_i^2, assembled by a route independent of
///    laplacian(); for consistent discretizations stiffness_apply(u) equals
///    -w * laplacian(u) up to rounding;
///  - both laplacian() and grad_sq() vanish exactly on constant inputs.
class Calculus {
 public:
  virtual ~Calculus() = default;

  virtual std::size_t size() const = 0;
  virtual std::span<const double> weights() const = 0;
  virtual void laplacian(std::span<const double> u, std::span<double> out) const = 0;
  virtual void grad_sq(std::span<const double> u, std::span<double> out) const = 0;
  virtual void stiffness_apply(std::span<const double> u, std::span<double> out) const = 0;

  /// Assembled stiffness matrix, when the backend has one (mesh backends).
  virtual const Eigen::SparseMatrix<double>* stiffness_matrix() const { return nullptr; }

  /// Node coordinates used by analytic field expressions.
  virtual const std::vector<std::array<double, 3>>& positions() const = 0;

  /// Characteristic spacing h.
  virtual double mesh_size() const = 0;

  /// True when differentiation is spectrally exact on resolved modes.
  virtual bool spectral() const = 0;
};

}  // namespace pscal::geometry
