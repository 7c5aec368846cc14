#include "pscal/cli/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::cli {

namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* current = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const bool array = peek(1) == '[';
        pos_ += array ? 2 : 1;
        skip_ws();
        auto path = parse_key_path();
        skip_ws();
        expect(']');
        if (array) expect(']');
        end_of_line();
        current = array ? &append_table(root, path) : &open_table(root, path);
        continue;
      }
      parse_key_value(*current);
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(fmt::format("config line {}: {}", line_, msg));
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
  char get() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (eof() || peek() != c) fail(fmt::format("expected '{}'", c));
    get();
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) get();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') get();
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }
  // Whitespace, comments and newlines, as allowed inside arrays.
  void skip_all() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') get();
    if (eof()) return;
    if (peek() != '\n') fail(fmt::format("unexpected '{}' after value", peek()));
    get();
  }

  std::string parse_key() {
    if (peek() == '"') return parse_basic_string();
    if (peek() == '\'') return parse_literal_string();
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      key.push_back(get());
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path{parse_key()};
    skip_ws();
    while (peek() == '.') {
      get();
      skip_ws();
      path.push_back(parse_key());
      skip_ws();
    }
    return path;
  }

  json& descend(json& table, const std::string& key) {
    if (!table.contains(key)) table[key] = json::object();
    json& next = table[key];
    if (next.is_array() && !next.empty() && next.back().is_object()) return next.back();
    if (!next.is_object()) fail(fmt::format("key '{}' is not a table", key));
    return next;
  }

  json& open_table(json& root, const std::vector<std::string>& path) {
    json* t = &root;
    for (const auto& k : path) t = &descend(*t, k);
    return *t;
  }

  json& append_table(json& root, const std::vector<std::string>& path) {
    json* t = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) t = &descend(*t, path[i]);
    json& arr = (*t)[path.back()];
    if (arr.is_null()) arr = json::array();
    if (!arr.is_array()) fail(fmt::format("key '{}' is not an array of tables", path.back()));
    arr.push_back(json::object());
    return arr.back();
  }

  void parse_key_value(json& table) {
    auto path = parse_key_path();
    skip_ws();
    expect('=');
    skip_ws();
    json* t = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) t = &descend(*t, path[i]);
    if (t->contains(path.back())) fail(fmt::format("duplicate key '{}'", path.back()));
    (*t)[path.back()] = parse_value();
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c == '\\') {
        const char e = get();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(fmt::format("unsupported escape '\\{}'", e));
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  std::string parse_literal_string() {
    expect('\'');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') break;
      out.push_back(c);
    }
    return out;
  }

  json parse_array() {
    expect('[');
    json arr = json::array();
    skip_all();
    while (peek() != ']') {
      arr.push_back(parse_value());
      skip_all();
      if (peek() == ',') {
        get();
        skip_all();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    get();
    return arr;
  }

  json parse_inline_table() {
    expect('{');
    json t = json::object();
    skip_ws();
    while (peek() != '}') {
      parse_key_value(t);
      skip_ws();
      if (peek() == ',') {
        get();
        skip_ws();
      } else if (peek() != '}') {
        fail("expected ',' or '}' in inline table");
      }
    }
    get();
    return t;
  }

  json parse_number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_'))
      tok.push_back(get());
    if (tok.empty()) fail("expected a value");
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean.push_back(ch);
    std::string body = clean;
    double sign = 1.0;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      sign = body[0] == '-' ? -1.0 : 1.0;
      body = body.substr(1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      long long v = 0;
      const char* b = clean.data() + (clean[0] == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(b, clean.data() + clean.size(), v);
      if (ec == std::errc() && p == clean.data() + clean.size()) return v;
      fail(fmt::format("cannot parse '{}' as a value", tok));
    }
    double v = 0.0;
    const char* b = clean.data() + (clean[0] == '+' ? 1 : 0);
    auto [p, ec] = std::from_chars(b, clean.data() + clean.size(), v);
    if (ec != std::errc() || p != clean.data() + clean.size()) fail(fmt::format("cannot parse '{}' as a number", tok));
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

nlohmann::json parse_toml(const std::string& text) { return Parser(text).parse(); }

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config file {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = (path.size() >= 5 && path.substr(path.size() - 5) == ".json") ||
                       (first != std::string::npos && text[first] == '{');
  if (is_json) {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(fmt::format("config {}: {}", path, e.what()));
    }
  }
  return parse_toml(text);
}

}  // namespace pscal::cli
