#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pscal/geometry/base_manifold.hpp"

namespace pscal::geometry {

/// Reads a CSV with a `node_id,value` header. Every node of `base` must appear
/// exactly once; ids may come in any order.
ScalarField read_field_csv(const BaseManifold& base, const std::filesystem::path& path,
                           const std::string& column = "value");

void write_field_csv(const ScalarField& field, const std::filesystem::path& path);

/// Writes `node_id` followed by the given columns, 17 significant digits.
void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                       const std::vector<const std::vector<double>*>& columns);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_real(double v);

}  // namespace pscal::geometry
