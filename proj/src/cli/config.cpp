#include "pscal/cli/config.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pscal/cli/expression.hpp"
#include "pscal/cli/toml.hpp"
#include "pscal/error.hpp"
#include "pscal/geometry/field_io.hpp"

namespace pscal::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  throw InputError(fmt::format("{} {}", field, msg));
}

const json* find(const json& t, const char* key) {
  if (!t.is_object()) return nullptr;
  auto it = t.find(key);
  return it == t.end() ? nullptr : &*it;
}

double get_real(const json& t, const char* key, const std::string& field, std::optional<double> fallback) {
  const json* v = find(t, key);
  if (!v) {
    if (fallback) return *fallback;
    bad(field, "required");
  }
  if (!v->is_number()) bad(field, "must be a number");
  return v->get<double>();
}

int get_int(const json& t, const char* key, const std::string& field, std::optional<int> fallback) {
  const json* v = find(t, key);
  if (!v) {
    if (fallback) return *fallback;
    bad(field, "required");
  }
  if (!v->is_number_integer()) bad(field, "must be an integer");
  return v->get<int>();
}

std::string get_string(const json& t, const char* key, const std::string& field) {
  const json* v = find(t, key);
  if (!v) bad(field, "required");
  if (!v->is_string()) bad(field, "must be a string");
  return v->get<std::string>();
}

fs::path resolve(const fs::path& root, const std::string& p, const std::string& field) {
  fs::path path = fs::path(p).is_absolute() ? fs::path(p) : root / p;
  if (!fs::exists(path)) bad(field, fmt::format("refers to missing file {}", path.string()));
  return path;
}

FieldSource parse_field(const json& v, const std::string& field, const fs::path& root) {
  FieldSource src;
  if (v.is_number()) {
    src.value = v.get<double>();
    return src;
  }
  if (v.is_string()) {
    src.kind = FieldSource::Kind::expression;
    src.expr = v.get<std::string>();
    Expression::parse(src.expr);
    return src;
  }
  if (!v.is_object()) bad(field, "must be a number, an expression string or a table");
  const int given = (find(v, "value") ? 1 : 0) + (find(v, "expr") ? 1 : 0) + (find(v, "csv") ? 1 : 0);
  if (given != 1) bad(field, "needs exactly one of value, expr, csv");
  if (find(v, "value")) {
    src.value = get_real(v, "value", field + ".value", std::nullopt);
  } else if (find(v, "expr")) {
    src.kind = FieldSource::Kind::expression;
    src.expr = get_string(v, "expr", field + ".expr");
    Expression::parse(src.expr);
  } else {
    src.kind = FieldSource::Kind::csv;
    src.csv = resolve(root, get_string(v, "csv", field + ".csv"), field + ".csv");
    if (find(v, "column")) src.column = get_string(v, "column", field + ".column");
  }
  return src;
}

FieldSource required_field(const json& t, const char* key, const std::string& field, const fs::path& root) {
  const json* v = find(t, key);
  if (!v) bad(field, "required");
  return parse_field(*v, field, root);
}

geometry::BaseSpec parse_base(const json& t, const std::string& field, const fs::path& root) {
  if (!t.is_object()) bad(field, "must be a table");
  const std::string type = get_string(t, "type", field + ".type");
  if (type == "sphere") {
    geometry::RoundSphere s;
    s.n = get_int(t, "n", field + ".n", 2);
    s.radius = get_real(t, "radius", field + ".radius", 1.0);
    s.mesh_level = get_int(t, "mesh_level", field + ".mesh_level", 4);
    s.resolution = get_int(t, "resolution", field + ".resolution", 65);
    return s;
  }
  if (type == "torus") {
    geometry::FlatTorus tor;
    const json* p = find(t, "periods");
    if (!p || !p->is_array() || p->empty()) bad(field + ".periods", "required as a non-empty array");
    for (const auto& x : *p) {
      if (!x.is_number()) bad(field + ".periods", "must contain numbers");
      tor.periods.push_back(x.get<double>());
    }
    if (const json* r = find(t, "resolution")) {
      if (r->is_number_integer()) {
        tor.resolution.assign(tor.periods.size(), r->get<int>());
      } else if (r->is_array()) {
        for (const auto& x : *r) {
          if (!x.is_number_integer()) bad(field + ".resolution", "must contain integers");
          tor.resolution.push_back(x.get<int>());
        }
      } else {
        bad(field + ".resolution", "must be an integer or an array");
      }
    }
    return tor;
  }
  if (type == "mesh") {
    const auto path = resolve(root, get_string(t, "path", field + ".path"), field + ".path");
    return geometry::MeshSurface{geometry::read_mesh(path)};
  }
  if (type == "product") {
    const json* fac = find(t, "factors");
    if (!fac || !fac->is_array() || fac->empty()) bad(field + ".factors", "required as a non-empty array");
    geometry::ProductSpec prod;
    for (std::size_t i = 0; i < fac->size(); ++i)
      prod.factors.push_back(parse_base((*fac)[i], fmt::format("{}.factors[{}]", field, i), root));
    return prod;
  }
  bad(field + ".type", fmt::format("unknown base type '{}' (sphere, torus, mesh, product)", type));
}

}  // namespace

RunConfig parse_run_config(const json& doc, const fs::path& root) {
  if (!doc.is_object()) throw InputError("config must be a table");
  RunConfig cfg;
  cfg.echo = doc;

  const json* base = find(doc, "base");
  if (!base) bad("base", "required");
  cfg.base = parse_base(*base, "base", root);

  const json* fiber = find(doc, "fiber");
  if (!fiber || !fiber->is_object()) bad("fiber", "required");
  if (!find(*fiber, "k")) bad("fiber.k", "required");
  cfg.fiber.k = get_int(*fiber, "k", "fiber.k", std::nullopt);
  cfg.fiber.c = get_real(*fiber, "c", "fiber.c", std::nullopt);
  if (const json* r = find(*fiber, "scal_range")) {
    if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number() || !(*r)[1].is_number())
      bad("fiber.scal_range", "must be [min, max]");
    cfg.fiber.scal_range = std::pair{(*r)[0].get<double>(), (*r)[1].get<double>()};
  }
  try {
    cfg.fiber.validate();
  } catch (const DomainError& e) {
    bad("fiber", e.what());
  }

  cfg.f = required_field(doc, "f", "f", root);

  if (const json* m = find(doc, "mode")) {
    if (!m->is_string()) bad("mode", "must be \"product\" or \"general\"");
    const auto s = m->get<std::string>();
    if (s == "product")
      cfg.mode = solver::Mode::product;
    else if (s == "general")
      cfg.mode = solver::Mode::general;
    else
      bad("mode", fmt::format("unknown mode '{}' (product, general)", s));
  }

  if (const json* sub = find(doc, "submersion")) {
    SubmersionSource s;
    s.scal_g = required_field(*sub, "scal_g", "submersion.scal_g", root);
    s.a_horiz_sq = required_field(*sub, "a_horiz_sq", "submersion.a_horiz_sq", root);
    s.a_norm_sq = required_field(*sub, "a_norm_sq", "submersion.a_norm_sq", root);
    if (const json* h = find(*sub, "mean_curvature_pairing"))
      s.mean_curvature_pairing = parse_field(*h, "submersion.mean_curvature_pairing", root);
    if (const json* d = find(*sub, "delta_A")) s.delta_A = parse_field(*d, "submersion.delta_A", root);
    cfg.submersion = std::move(s);
  }
  if (cfg.mode == solver::Mode::general && !cfg.submersion) bad("submersion", "required in general mode");

  if (const json* s = find(doc, "solver")) {
    cfg.epsilon = get_real(*s, "epsilon", "solver.epsilon", cfg.epsilon);
    cfg.solver.epsilon0 = get_real(*s, "epsilon0", "solver.epsilon0", cfg.solver.epsilon0);
    cfg.solver.tol = get_real(*s, "tol", "solver.tol", cfg.solver.tol);
    cfg.solver.max_iter = get_int(*s, "max_iter", "solver.max_iter", cfg.solver.max_iter);
  }
  if (!(cfg.epsilon > 0.0)) bad("solver.epsilon", "must be positive");

  if (const json* s = find(doc, "scan")) {
    cfg.scan.t_min = get_real(*s, "t_min", "scan.t_min", cfg.scan.t_min);
    cfg.scan.points = get_int(*s, "points", "scan.points", cfg.scan.points);
    if (const json* v = find(*s, "scal_g_horiz")) cfg.scan.scal_g_horiz = parse_field(*v, "scan.scal_g_horiz", root);
    if (const json* v = find(*s, "a_norm_sq")) cfg.scan.a_norm_sq = parse_field(*v, "scan.a_norm_sq", root);
    if (!(cfg.scan.t_min < 0.0)) bad("scan.t_min", "must be negative");
    if (cfg.scan.points < 2) bad("scan.points", "must be at least 2");
  }

  if (const json* o = find(doc, "output")) {
    const auto dir = get_string(*o, "dir", "output.dir");
    cfg.output_dir = fs::path(dir).is_absolute() ? fs::path(dir) : root / dir;
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  if (!fs::exists(path)) throw InputError(fmt::format("config file {} not found", path.string()));
  const auto doc = load_config_file(path.string());
  return parse_run_config(doc, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

geometry::ScalarField materialize(const geometry::BaseManifold& b, const FieldSource& src,
                                  const geometry::ScalarField& scal_b) {
  switch (src.kind) {
    case FieldSource::Kind::constant:
      return geometry::constant_field(b, src.value);
    case FieldSource::Kind::csv:
      return geometry::read_field_csv(b, src.csv, src.column);
    case FieldSource::Kind::expression: {
      geometry::require_on(b, scal_b, "scal_B");
      const auto e = Expression::parse(src.expr);
      const auto& pos = b.positions();
      std::vector<double> v(b.node_count());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = e.evaluate({pos[i], scal_b[i]});
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
          throw DomainError(fmt::format("expression \"{}\" is not finite at node {}", src.expr, i));
      return geometry::ScalarField(b, std::move(v));
    }
  }
  throw InputError("unknown field source");
}

}  // namespace pscal::cli
