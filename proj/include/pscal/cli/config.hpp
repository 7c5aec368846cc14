#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pscal/curvature/scalar.hpp"
#include "pscal/geometry/base_manifold.hpp"
#include "pscal/solver/minimize.hpp"

namespace pscal::cli {

/// Source of a scalar field: a constant, an expression, or a CSV column.
struct FieldSource {
  enum class Kind { constant, expression, csv };
  Kind kind = Kind::constant;
  double value = 0.0;
  std::string expr;
  std::filesystem::path csv;
  std::string column = "value";
};

struct SubmersionSource {
  FieldSource scal_g;
  FieldSource a_horiz_sq;
  FieldSource a_norm_sq;
  FieldSource mean_curvature_pairing;  ///< defaults to zero
  std::optional<FieldSource> delta_A;  ///< checked against 3 a_horiz_sq - 2 a_norm_sq when given
};

struct ScanConfig {
  double t_min = -12.0;
  int points = 400;
  std::optional<FieldSource> scal_g_horiz;  ///< defaults to scal_B
  std::optional<FieldSource> a_norm_sq;     ///< defaults to zero
};

struct RunConfig {
  geometry::BaseSpec base;
  curvature::FiberSpec fiber;
  FieldSource f;
  solver::Mode mode = solver::Mode::product;
  std::optional<SubmersionSource> submersion;
  double epsilon = 0.1;
  solver::SolverConfig solver;
  ScanConfig scan;
  std::filesystem::path output_dir = ".";
  nlohmann::json echo;  ///< the parsed configuration document
};

/// Builds a RunConfig from a parsed document. Relative paths resolve against
/// `root`. Throws InputError naming the offending field.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& root = ".");

/// Reads a TOML (or JSON) file and parses it.
RunConfig load_run_config(const std::filesystem::path& path);

/// Evaluates a field source on the base; expressions see scal_B from `scal_b`.
geometry::ScalarField materialize(const geometry::BaseManifold& b, const FieldSource& src,
                                  const geometry::ScalarField& scal_b);

}  // namespace pscal::cli
