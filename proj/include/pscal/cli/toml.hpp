#pragma once

#include <string>

#include <json.hpp>

namespace pscal::cli {

/// Parses the TOML subset used by run configurations into JSON: tables,
/// arrays of tables, dotted keys, strings, integers, floats (including inf
/// and nan), booleans, arrays and inline tables. Dates are not supported.
/// Throws InputError with a line number on malformed input.
nlohmann::json parse_toml(const std::string& text);

/// Reads a config file: TOML, or JSON when the extension is .json or the
/// first non-blank character is '{'.
nlohmann::json load_config_file(const std::string& path);

}  // namespace pscal::cli
