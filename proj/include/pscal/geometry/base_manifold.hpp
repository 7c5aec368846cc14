#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pscal/geometry/calculus.hpp"
#include "pscal/geometry/spectrum.hpp"
#include "pscal/geometry/trimesh.hpp"

namespace pscal::geometry {

/// Round sphere S^n of the given radius.
///
/// S^1 is discretized on a periodic spectral grid of `resolution` points,
/// S^2 on an icosphere of `mesh_level` subdivisions. For n >= 3 only the
/// analytic constants are available and fields are single-valued (constants).
struct RoundSphere {
  int n = 2;
  double radius = 1.0;
  int mesh_level = 4;
  int resolution = 65;
};

/// Flat torus R^d / (L_1 Z x ... x L_d Z). Up to three axes get a spectral
/// grid; `resolution` lists points per axis (empty: 33 per axis, 17 in 3-D).
struct FlatTorus {
  std::vector<double> periods;
  std::vector<int> resolution;
};

struct MeshSurface {
  TriMesh mesh;
};

struct ProductSpec;
using BaseSpec = std::variant<RoundSphere, FlatTorus, MeshSurface, ProductSpec>;

/// Riemannian product of analytic factors. A product of circles and tori with
/// at most three axes in total is discretized on one spectral grid; any other
/// product supports constants only.
struct ProductSpec {
  std::vector<BaseSpec> factors;
};

enum class Backend { spectral_grid, mesh, constants_only };

class ScalarField;

/// Closed base manifold with its assembled calculus. Immutable after
/// construction and cheap to copy (shared state).
class BaseManifold {
 public:
  struct Impl;

  int dimension() const;
  std::size_t node_count() const;
  Backend backend() const;
  /// Human-readable backend description, e.g. "RoundSphere(n=2, r=1)".
  const std::string& description() const;

  const Calculus& calculus() const;
  const std::vector<std::array<double, 3>>& positions() const;
  std::span<const double> weights() const;
  double mesh_size() const;

  /// True when the constants below come from closed forms rather than the
  /// discretization.
  bool analytic() const;
  double volume() const;
  double first_eigenvalue() const;
  std::optional<double> ricci_lower_bound() const;
  /// Constant scalar curvature for analytic backends.
  std::optional<double> analytic_scalar_curvature() const;
  /// Shift used for the discrete eigen solve (about 1 / vol^{2/n}).
  double spectral_shift() const;

  bool same_as(const BaseManifold& other) const { return impl_ == other.impl_; }

  explicit BaseManifold(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Real values on the nodes of a base manifold.
class ScalarField {
 public:
  /// Throws MismatchError on a length mismatch and DomainError on non-finite entries.
  ScalarField(BaseManifold base, std::vector<double> values);

  const BaseManifold& base() const { return base_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double min() const;
  double max() const;

 private:
  BaseManifold base_;
  std::vector<double> values_;
};

BaseManifold build_base(const BaseSpec& spec);

double volume(const BaseManifold& b);
ScalarField scalar_curvature_field(const BaseManifold& b);
ScalarField laplacian(const BaseManifold& b, const ScalarField& u);
ScalarField gradient_sq_norm(const BaseManifold& b, const ScalarField& u);
double integrate(const BaseManifold& b, const ScalarField& u);
/// Closed-form value for analytic backends, discrete value for meshes.
double first_eigenvalue(const BaseManifold& b);
/// Discrete eigenpair of the assembled calculus on any backend.
Eigenpair discrete_first_eigenpair(const BaseManifold& b, const EigenOptions& opts = {});
std::optional<double> ricci_lower_bound(const BaseManifold& b);

ScalarField constant_field(const BaseManifold& b, double value);
/// Samples `fn` at node positions.
ScalarField sample_field(const BaseManifold& b, const std::function<double(const std::array<double, 3>&)>& fn);

/// Throws MismatchError unless the field lives on `b`.
void require_on(const BaseManifold& b, const ScalarField& u, const char* what = "field");

}  // namespace pscal::geometry
