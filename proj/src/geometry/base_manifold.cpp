#include "pscal/geometry/base_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "pscal/error.hpp"
#include "pscal/geometry/grid_calculus.hpp"
#include "pscal/geometry/mesh_calculus.hpp"

namespace pscal::geometry {

namespace {

// One node carrying the whole volume: represents constant functions exactly.
class ConstantCalculus final : public Calculus {
 public:
  explicit ConstantCalculus(double volume) : weight_{volume}, positions_{{0.0, 0.0, 0.0}} {}

  std::size_t size() const override { return 1; }
  std::span<const double> weights() const override { return weight_; }
  void laplacian(std::span<const double>, std::span<double> out) const override { out[0] = 0.0; }
  void grad_sq(std::span<const double>, std::span<double> out) const override { out[0] = 0.0; }
  void stiffness_apply(std::span<const double>, std::span<double> out) const override { out[0] = 0.0; }
  const std::vector<std::array<double, 3>>& positions() const override { return positions_; }
  double mesh_size() const override { return 0.0; }
  bool spectral() const override { return true; }

 private:
  std::array<double, 1> weight_;
  std::vector<std::array<double, 3>> positions_;
};

double sphere_volume(int n, double r) {
  const double m = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(m) * std::pow(r, n);
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += fmt::format("{}{:g}", i ? ", " : "", v[i]);
  return s;
}

int default_torus_resolution(std::size_t axes) { return axes == 3 ? 17 : 33; }

}  // namespace

struct BaseManifold::Impl {
  int dimension = 0;
  Backend backend = Backend::constants_only;
  std::string description;
  std::unique_ptr<Calculus> calculus;
  bool analytic = true;
  double volume = 0.0;
  std::optional<double> lambda1;
  std::optional<double> ricci;
  std::optional<double> scal;
  // Axes this base contributes to a merged product grid (circles and tori only).
  std::vector<double> grid_periods;
  std::vector<int> grid_resolution;
  bool mesh_factor = false;

  mutable std::once_flag lambda_once;
  mutable double discrete_lambda1 = 0.0;
};

namespace {

using ImplPtr = std::shared_ptr<BaseManifold::Impl>;

ImplPtr build_impl(const BaseSpec& spec);

ImplPtr build_sphere(const RoundSphere& s) {
  if (s.n < 1) throw DomainError(fmt::format("sphere dimension must be >= 1, got {}", s.n));
  if (!(s.radius > 0.0) || !std::isfinite(s.radius))
    throw DomainError(fmt::format("sphere radius must be positive, got {}", s.radius));
  auto impl = std::make_shared<BaseManifold::Impl>();
  const double r = s.radius;
  impl->dimension = s.n;
  impl->description = fmt::format("RoundSphere(n={}, r={:g})", s.n, r);
  impl->volume = sphere_volume(s.n, r);
  impl->scal = s.n * (s.n - 1) / (r * r);
  impl->lambda1 = s.n / (r * r);
  impl->ricci = (s.n - 1) / (r * r);
  if (s.n == 1) {
    impl->backend = Backend::spectral_grid;
    impl->grid_periods = {2.0 * std::numbers::pi * r};
    impl->grid_resolution = {s.resolution};
    impl->calculus = std::make_unique<GridCalculus>(impl->grid_periods, impl->grid_resolution);
  } else if (s.n == 2) {
    if (s.mesh_level < 0 || s.mesh_level > 8)
      throw DomainError(fmt::format("icosphere level must be in [0, 8], got {}", s.mesh_level));
    impl->backend = Backend::mesh;
    impl->calculus = std::make_unique<MeshCalculus>(make_icosphere(s.mesh_level, r), r);
  } else {
    impl->backend = Backend::constants_only;
    impl->calculus = std::make_unique<ConstantCalculus>(impl->volume);
  }
  return impl;
}

ImplPtr build_torus(const FlatTorus& t) {
  if (t.periods.empty()) throw DomainError("torus needs at least one period");
  for (double p : t.periods)
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError(fmt::format("torus periods must be positive, got {}", p));
  auto impl = std::make_shared<BaseManifold::Impl>();
  const std::size_t d = t.periods.size();
  impl->dimension = static_cast<int>(d);
  impl->description = fmt::format("FlatTorus({})", format_list(t.periods));
  impl->volume = std::accumulate(t.periods.begin(), t.periods.end(), 1.0, std::multiplies<>());
  impl->scal = 0.0;
  impl->ricci = 0.0;
  double lam = std::numeric_limits<double>::infinity();
  for (double p : t.periods) lam = std::min(lam, std::pow(2.0 * std::numbers::pi / p, 2));
  impl->lambda1 = lam;
  impl->grid_periods = t.periods;
  if (t.resolution.empty()) {
    impl->grid_resolution.assign(d, default_torus_resolution(d));
  } else if (t.resolution.size() == 1) {
    impl->grid_resolution.assign(d, t.resolution[0]);
  } else if (t.resolution.size() == d) {
    impl->grid_resolution = t.resolution;
  } else {
    throw InputError("torus resolution must give one value or one per period");
  }
  if (d <= 3) {
    impl->backend = Backend::spectral_grid;
    impl->calculus = std::make_unique<GridCalculus>(impl->grid_periods, impl->grid_resolution);
  } else {
    impl->backend = Backend::constants_only;
    impl->calculus = std::make_unique<ConstantCalculus>(impl->volume);
  }
  return impl;
}

ImplPtr build_mesh(const MeshSurface& m) {
  auto impl = std::make_shared<BaseManifold::Impl>();
  auto calc = std::make_unique<MeshCalculus>(m.mesh);
  impl->dimension = 2;
  impl->backend = Backend::mesh;
  impl->analytic = false;
  impl->mesh_factor = true;
  impl->volume = calc->surface_area();
  impl->description = fmt::format("TriMesh(vertices={}, faces={}, genus={})", calc->topology().vertices,
                                  calc->topology().faces, calc->topology().genus);
  impl->calculus = std::move(calc);
  return impl;
}

ImplPtr build_product(const ProductSpec& p) {
  if (p.factors.empty()) throw DomainError("product needs at least one factor");
  std::vector<ImplPtr> factors;
  for (const auto& f : p.factors) factors.push_back(build_impl(f));

  auto impl = std::make_shared<BaseManifold::Impl>();
  impl->volume = 1.0;
  impl->scal = 0.0;
  double lam = std::numeric_limits<double>::infinity();
  double ric = std::numeric_limits<double>::infinity();
  bool grid_mergeable = true;
  std::string names;
  for (const auto& f : factors) {
    if (f->mesh_factor) throw UnsupportedError("products with a triangle-mesh factor are not supported");
    impl->dimension += f->dimension;
    impl->volume *= f->volume;
    *impl->scal += *f->scal;
    lam = std::min(lam, *f->lambda1);
    ric = std::min(ric, *f->ricci);
    if (f->grid_periods.empty()) grid_mergeable = false;
    impl->grid_periods.insert(impl->grid_periods.end(), f->grid_periods.begin(), f->grid_periods.end());
    impl->grid_resolution.insert(impl->grid_resolution.end(), f->grid_resolution.begin(), f->grid_resolution.end());
    names += (names.empty() ? "" : " x ") + f->description;
  }
  impl->lambda1 = lam;
  impl->ricci = ric;
  impl->description = fmt::format("Product({})", names);
  if (!grid_mergeable) {
    impl->grid_periods.clear();
    impl->grid_resolution.clear();
  }
  if (grid_mergeable && impl->grid_periods.size() <= 3) {
    impl->backend = Backend::spectral_grid;
    impl->calculus = std::make_unique<GridCalculus>(impl->grid_periods, impl->grid_resolution);
  } else {
    impl->backend = Backend::constants_only;
    impl->calculus = std::make_unique<ConstantCalculus>(impl->volume);
  }
  return impl;
}

ImplPtr build_impl(const BaseSpec& spec) {
  return std::visit(
      [](const auto& s) -> ImplPtr {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RoundSphere>) return build_sphere(s);
        else if constexpr (std::is_same_v<T, FlatTorus>) return build_torus(s);
        else if constexpr (std::is_same_v<T, MeshSurface>) return build_mesh(s);
        else return build_product(s);
      },
      spec);
}

}  // namespace

BaseManifold build_base(const BaseSpec& spec) { return BaseManifold(build_impl(spec)); }

int BaseManifold::dimension() const { return impl_->dimension; }
std::size_t BaseManifold::node_count() const { return impl_->calculus->size(); }
Backend BaseManifold::backend() const { return impl_->backend; }
const std::string& BaseManifold::description() const { return impl_->description; }
const Calculus& BaseManifold::calculus() const { return *impl_->calculus; }
const std::vector<std::array<double, 3>>& BaseManifold::positions() const { return impl_->calculus->positions(); }
std::span<const double> BaseManifold::weights() const { return impl_->calculus->weights(); }
double BaseManifold::mesh_size() const { return impl_->calculus->mesh_size(); }
bool BaseManifold::analytic() const { return impl_->analytic; }
double BaseManifold::volume() const { return impl_->volume; }
std::optional<double> BaseManifold::ricci_lower_bound() const { return impl_->ricci; }
std::optional<double> BaseManifold::analytic_scalar_curvature() const { return impl_->scal; }

double BaseManifold::spectral_shift() const {
  return 1.0 / std::pow(impl_->volume, 2.0 / impl_->dimension);
}

double BaseManifold::first_eigenvalue() const {
  if (impl_->lambda1) return *impl_->lambda1;
  std::call_once(impl_->lambda_once, [this] {
    EigenOptions opts;
    opts.shift = spectral_shift();
    impl_->discrete_lambda1 = first_eigenpair(*impl_->calculus, opts).value;
  });
  return impl_->discrete_lambda1;
}

ScalarField::ScalarField(BaseManifold base, std::vector<double> values)
    : base_(std::move(base)), values_(std::move(values)) {
  if (values_.size() != base_.node_count())
    throw MismatchError(fmt::format("field has {} values but the base has {} nodes", values_.size(),
                                    base_.node_count()));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i])) throw DomainError(fmt::format("field value at node {} is not finite", i));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

void require_on(const BaseManifold& b, const ScalarField& u, const char* what) {
  if (!u.base().same_as(b)) throw MismatchError(fmt::format("{} is defined on a different base", what));
}

double volume(const BaseManifold& b) { return b.volume(); }

ScalarField scalar_curvature_field(const BaseManifold& b) {
  if (auto s = b.analytic_scalar_curvature()) return constant_field(b, *s);
  const auto& mc = dynamic_cast<const MeshCalculus&>(b.calculus());
  return ScalarField(b, mc.angle_defect_scalar_curvature());
}

ScalarField laplacian(const BaseManifold& b, const ScalarField& u) {
  require_on(b, u);
  std::vector<double> out(b.node_count());
  b.calculus().laplacian(u.values(), out);
  return ScalarField(b, std::move(out));
}

ScalarField gradient_sq_norm(const BaseManifold& b, const ScalarField& u) {
  require_on(b, u);
  std::vector<double> out(b.node_count());
  b.calculus().grad_sq(u.values(), out);
  return ScalarField(b, std::move(out));
}

double integrate(const BaseManifold& b, const ScalarField& u) {
  require_on(b, u);
  const auto w = b.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i];
  return s;
}

double first_eigenvalue(const BaseManifold& b) { return b.first_eigenvalue(); }

Eigenpair discrete_first_eigenpair(const BaseManifold& b, const EigenOptions& opts) {
  if (b.backend() == Backend::constants_only)
    throw UnsupportedError(fmt::format("{} has no assembled calculus for a discrete spectrum", b.description()));
  EigenOptions o = opts;
  if (o.shift <= 0.0) o.shift = b.spectral_shift();
  return first_eigenpair(b.calculus(), o);
}

std::optional<double> ricci_lower_bound(const BaseManifold& b) { return b.ricci_lower_bound(); }

ScalarField constant_field(const BaseManifold& b, double value) {
  return ScalarField(b, std::vector<double>(b.node_count(), value));
}

ScalarField sample_field(const BaseManifold& b, const std::function<double(const std::array<double, 3>&)>& fn) {
  const auto& pos = b.positions();
  std::vector<double> v(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) v[i] = fn(pos[i]);
  return ScalarField(b, std::move(v));
}

}  // namespace pscal::geometry
