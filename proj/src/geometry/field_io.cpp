#include "pscal/geometry/field_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::geometry {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_real(const std::string& s, const std::filesystem::path& path, int line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw InputError(fmt::format("{}:{}: cannot parse '{}' as a real", path.string(), line, s));
  return v;
}

}  // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

ScalarField read_field_csv(const BaseManifold& base, const std::filesystem::path& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open field file {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw InputError(fmt::format("{} is empty", path.string()));
  const auto header = split_csv(line);
  std::size_t id_col = header.size(), val_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "node_id") id_col = i;
    if (header[i] == column) val_col = i;
  }
  if (id_col == header.size() || val_col == header.size())
    throw InputError(fmt::format("{}: header must contain node_id and {}", path.string(), column));

  const std::size_t n = base.node_count();
  std::vector<double> values(n, 0.0);
  std::vector<bool> seen(n, false);
  int line_no = 1;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() <= std::max(id_col, val_col))
      throw InputError(fmt::format("{}:{}: too few columns", path.string(), line_no));
    const double id_real = parse_real(cells[id_col], path, line_no);
    const auto id = static_cast<long long>(id_real);
    if (static_cast<double>(id) != id_real || id < 0 || static_cast<std::size_t>(id) >= n)
      throw MismatchError(fmt::format("{}:{}: node id {} outside [0, {})", path.string(), line_no, cells[id_col], n));
    if (seen[id]) throw InputError(fmt::format("{}:{}: duplicate node id {}", path.string(), line_no, id));
    seen[id] = true;
    values[id] = parse_real(cells[val_col], path, line_no);
    ++count;
  }
  if (count != n)
    throw MismatchError(fmt::format("{} has {} rows but the base has {} nodes", path.string(), count, n));
  return ScalarField(base, std::move(values));
}

void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                       const std::vector<const std::vector<double>*>& columns) {
  if (names.size() != columns.size()) throw InputError("column names and data differ in count");
  const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
  for (const auto* c : columns)
    if (c->size() != rows) throw MismatchError("CSV columns differ in length");
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  out << "node_id";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    for (const auto* c : columns) out << ',' << format_real((*c)[i]);
    out << '\n';
  }
}

void write_field_csv(const ScalarField& field, const std::filesystem::path& path) {
  write_columns_csv(path, {"value"}, {&field.values()});
}

}  // namespace pscal::geometry
