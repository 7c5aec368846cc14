#pragma once

#include <vector>

#include "pscal/geometry/calculus.hpp"

namespace pscal::geometry {

/// Fourier-spectral calculus on a uniform periodic grid (1 to 3 axes).
///
/// Each axis has an odd number of points so the first-derivative matrix is
/// real antisymmetric and its square equals the second-derivative matrix; no
/// Nyquist mode is carried. Derivatives are applied as dense differentiation
/// matrices along grid lines.
class GridCalculus final : public Calculus {
 public:
  GridCalculus(std::vector<double> periods, std::vector<int> resolution);

  std::size_t size() const override { return size_; }
  std::span<const double> weights() const override { return weights_; }
  void laplacian(std::span<const double> u, std::span<double> out) const override;
  void grad_sq(std::span<const double> u, std::span<double> out) const override;
  void stiffness_apply(std::span<const double> u, std::span<double> out) const override;
  const std::vector<std::array<double, 3>>& positions() const override { return positions_; }
  double mesh_size() const override;
  bool spectral() const override { return true; }

  const std::vector<double>& periods() const { return periods_; }
  const std::vector<int>& resolution() const { return resolution_; }

  /// First-derivative matrix along `axis` (row-major, n x n).
  const std::vector<double>& first_derivative(std::size_t axis) const { return d1_[axis]; }
  /// Second-derivative matrix along `axis` from its closed form.
  const std::vector<double>& second_derivative(std::size_t axis) const { return d2_[axis]; }

  /// Applies the first derivative along `axis`.
  void derivative(std::size_t axis, std::span<const double> u, std::span<double> out) const;

 private:
  template <typename LineOp>
  void for_each_line(std::size_t axis, std::span<const double> u, std::span<double> out,
                     bool accumulate, LineOp&& op) const;

  std::vector<double> periods_;
  std::vector<int> resolution_;
  std::size_t size_ = 0;
  std::vector<double> weights_;
  std::vector<std::vector<double>> d1_;
  std::vector<std::vector<double>> d1t_;
  std::vector<std::vector<double>> d2_;
  std::vector<std::array<double, 3>> positions_;
};

}  // namespace pscal::geometry
