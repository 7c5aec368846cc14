#include "pscal/geometry/spectrum.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "pscal/error.hpp"
#include "pscal/simd/kernels.hpp"

namespace pscal::geometry {

namespace {

using Vec = std::vector<double>;

void remove_mean(std::span<const double> w, double wsum, Vec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
  const double mean = s / wsum;
  for (double& v : x) v -= mean;
}

double w_norm(std::span<const double> w, const Vec& x) {
  return std::sqrt(simd::active().weighted_dot(w.data(), x.data(), x.data(), x.size()));
}

// Solves (K + sigma W) y = b for a matrix-free SPD operator by conjugate gradients.
class ShiftedCg {
 public:
  ShiftedCg(const Calculus& calc, double sigma, double tol) : calc_(calc), sigma_(sigma), tol_(tol) {}

  void solve(const Vec& b, Vec& y) const {
    const std::size_t n = b.size();
    const auto& k = simd::active();
    const auto w = calc_.weights();
    Vec r = b, p(n), ap(n), z(n);
    y.assign(n, 0.0);
    // Jacobi preconditioning by the mass part only; the stiffness diagonal is
    // not available matrix-free.
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / w[i];
    p = z;
    double rz = k.dot(r.data(), z.data(), n);
    const double bnorm = std::sqrt(k.dot(b.data(), b.data(), n));
    for (int it = 0; it < 20 * static_cast<int>(n) + 100; ++it) {
      apply(p, ap);
      const double alpha = rz / k.dot(p.data(), ap.data(), n);
      k.axpy(alpha, p.data(), y.data(), n);
      k.axpy(-alpha, ap.data(), r.data(), n);
      if (std::sqrt(k.dot(r.data(), r.data(), n)) <= tol_ * bnorm) return;
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / w[i];
      const double rz_new = k.dot(r.data(), z.data(), n);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NumericalError("conjugate gradients did not converge in the shifted eigen solve");
  }

  void apply(const Vec& x, Vec& out) const {
    calc_.stiffness_apply(x, out);
    const auto w = calc_.weights();
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += sigma_ * w[i] * x[i];
  }

 private:
  const Calculus& calc_;
  double sigma_;
  double tol_;
};

}  // namespace

double rayleigh_quotient(const Calculus& calc, const std::vector<double>& u) {
  Vec g(u.size());
  calc.grad_sq(u, g);
  const auto w = calc.weights();
  double num = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) num += w[i] * g[i];
  const double den = simd::active().weighted_dot(w.data(), u.data(), u.data(), u.size());
  return num / den;
}

Eigenpair first_eigenpair(const Calculus& calc, const EigenOptions& opts) {
  const std::size_t n = calc.size();
  if (n < 3) throw UnsupportedError("discrete spectrum needs a backend with at least three nodes");
  const auto w = calc.weights();
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  const double sigma = opts.shift > 0.0 ? opts.shift : 1.0 / wsum;

  std::optional<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt;
  std::optional<ShiftedCg> cg;
  if (const auto* k = calc.stiffness_matrix()) {
    Eigen::SparseMatrix<double> shifted = *k;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      shifted.coeffRef(ii, ii) += sigma * w[i];
    }
    ldlt.emplace(shifted);
    if (ldlt->info() != Eigen::Success) throw NumericalError("factorization of the shifted stiffness matrix failed");
  } else {
    cg.emplace(calc, sigma, opts.inner_tol);
  }

  Vec x(n), b(n), kx(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    x[i] = std::sin(1.6180339887 * t + 0.3) + 0.5 * std::cos(2.7182818284 * t * t + 1.1) +
           0.25 * std::sin(0.5772156649 * t);
  }
  remove_mean(w, wsum, x);
  {
    const double nrm = w_norm(w, x);
    for (double& v : x) v /= nrm;
  }

  Eigenpair out;
  double lambda = 0.0;
  double residual = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) b[i] = w[i] * x[i];
    if (ldlt) {
      Eigen::Map<const Eigen::VectorXd> bm(b.data(), static_cast<Eigen::Index>(n));
      Eigen::VectorXd y = ldlt->solve(bm);
      std::copy(y.data(), y.data() + n, x.begin());
    } else {
      Vec y;
      cg->solve(b, y);
      x = std::move(y);
    }
    remove_mean(w, wsum, x);
    const double nrm = w_norm(w, x);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw NumericalError(fmt::format("inverse iteration collapsed at iteration {}", it));
    for (double& v : x) v /= nrm;

    calc.stiffness_apply(x, kx);
    lambda = simd::active().dot(x.data(), kx.data(), n);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = kx[i] - lambda * w[i] * x[i];
      r2 += r * r / w[i];
    }
    residual = std::sqrt(r2) / std::abs(lambda);
    if (residual <= opts.tol) {
      out.value = lambda;
      out.vector = std::move(x);
      out.iterations = it;
      out.residual = residual;
      return out;
    }
  }
  throw NumericalError(fmt::format(
      "eigensolver did not converge after {} iterations (last Rayleigh quotient {:.17g}, relative residual {:.3e})",
      opts.max_iter, lambda, residual));
}

}  // namespace pscal::geometry
