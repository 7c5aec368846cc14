#include "pscal/geometry/grid_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pscal/error.hpp"
#include "pscal/simd/kernels.hpp"

namespace pscal::geometry {

namespace {

// Periodic spectral differentiation on n (odd) points of [0, period).
std::vector<double> first_derivative_matrix(int n, double period) {
  const double h = 2.0 * std::numbers::pi / n;
  const double scale = 2.0 * std::numbers::pi / period;
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d[static_cast<std::size_t>(i) * n + j] = scale * 0.5 * sign / std::sin(k * h / 2.0);
    }
  return d;
}

std::vector<double> second_derivative_matrix(int n, double period) {
  const double h = 2.0 * std::numbers::pi / n;
  const double scale = std::pow(2.0 * std::numbers::pi / period, 2);
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t at = static_cast<std::size_t>(i) * n + j;
      if (i == j) {
        d[at] = -scale * (static_cast<double>(n) * n - 1.0) / 12.0;
        continue;
      }
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double s = std::sin(k * h / 2.0);
      d[at] = -scale * 0.5 * sign * std::cos(k * h / 2.0) / (s * s);
    }
  return d;
}

}  // namespace

GridCalculus::GridCalculus(std::vector<double> periods, std::vector<int> resolution)
    : periods_(std::move(periods)), resolution_(std::move(resolution)) {
  if (periods_.empty() || periods_.size() > 3)
    throw UnsupportedError(fmt::format("spectral grid supports 1 to 3 axes, got {}", periods_.size()));
  if (resolution_.size() != periods_.size())
    throw InputError("grid resolution must list one point count per period");
  size_ = 1;
  double cell = 1.0;
  for (std::size_t a = 0; a < periods_.size(); ++a) {
    if (!(periods_[a] > 0.0)) throw DomainError("torus periods must be positive");
    if (resolution_[a] < 3 || resolution_[a] % 2 == 0)
      throw DomainError(fmt::format("grid resolution must be odd and >= 3, got {}", resolution_[a]));
    size_ *= static_cast<std::size_t>(resolution_[a]);
    cell *= periods_[a] / resolution_[a];
    d1_.push_back(first_derivative_matrix(resolution_[a], periods_[a]));
    d2_.push_back(second_derivative_matrix(resolution_[a], periods_[a]));
    const int n = resolution_[a];
    std::vector<double> t(d1_.back().size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j) * n + i] = d1_.back()[static_cast<std::size_t>(i) * n + j];
    d1t_.push_back(std::move(t));
  }
  weights_.assign(size_, cell);

  positions_.resize(size_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::size_t rem = idx;
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (std::size_t a = periods_.size(); a-- > 0;) {
      const auto n = static_cast<std::size_t>(resolution_[a]);
      p[a] = static_cast<double>(rem % n) * periods_[a] / static_cast<double>(n);
      rem /= n;
    }
    positions_[idx] = p;
  }
}

double GridCalculus::mesh_size() const {
  double h = 0.0;
  for (std::size_t a = 0; a < periods_.size(); ++a) h = std::max(h, periods_[a] / resolution_[a]);
  return h;
}

template <typename LineOp>
void GridCalculus::for_each_line(std::size_t axis, std::span<const double> u, std::span<double> out,
                                 bool accumulate, LineOp&& op) const {
  const auto n = static_cast<std::size_t>(resolution_[axis]);
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < periods_.size(); ++a) stride *= static_cast<std::size_t>(resolution_[a]);
  const std::size_t outer = size_ / (n * stride);

  std::vector<double> line_in(n), line_out(n);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * n * stride + s;
      for (std::size_t i = 0; i < n; ++i) line_in[i] = u[base + i * stride];
      op(line_in.data(), line_out.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        if (accumulate)
          out[base + i * stride] += line_out[i];
        else
          out[base + i * stride] = line_out[i];
      }
    }
}

void GridCalculus::derivative(std::size_t axis, std::span<const double> u, std::span<double> out) const {
  const double* d = d1_[axis].data();
  for_each_line(axis, u, out, false, [d](const double* in, double* res, std::size_t n) {
    simd::active().dense_diff_apply(d, in, res, n);
  });
}

void GridCalculus::laplacian(std::span<const double> u, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t a = 0; a < periods_.size(); ++a) {
    const double* d = d2_[a].data();
    for_each_line(a, u, out, true, [d](const double* in, double* res, std::size_t n) {
      simd::active().dense_diff_apply(d, in, res, n);
    });
  }
}

void GridCalculus::grad_sq(std::span<const double> u, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> du(size_);
  for (std::size_t a = 0; a < periods_.size(); ++a) {
    derivative(a, u, du);
    simd::active().add_square(du.data(), out.data(), size_);
  }
}

void GridCalculus::stiffness_apply(std::span<const double> u, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> du(size_);
  for (std::size_t a = 0; a < periods_.size(); ++a) {
    derivative(a, u, du);
    for (std::size_t i = 0; i < size_; ++i) du[i] *= weights_[i];
    const double* dt = d1t_[a].data();
    for_each_line(a, du, out, true, [dt](const double* in, double* res, std::size_t n) {
      simd::active().dense_apply(dt, in, res, n);
    });
  }
}

}  // namespace pscal::geometry
