#include "pscal/cli/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::cli {

struct Expression::Node {
  enum class Kind { number, variable, unary_minus, binary, function, harmonic };
  Kind kind = Kind::number;
  double value = 0.0;
  std::string name;
  char op = 0;
  int l = 0;
  int m = 0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_function(const std::string& s) {
  return s == "sin" || s == "cos" || s == "tan" || s == "exp" || s == "log" || s == "sqrt" || s == "abs";
}

bool is_variable(const std::string& s) {
  return s == "x" || s == "y" || s == "z" || s == "scal_B" || s == "pi" || s == "e";
}

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    auto n = parse_sum();
    skip();
    if (pos_ != s_.size()) fail(fmt::format("unexpected '{}'", s_[pos_]));
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(fmt::format("expression \"{}\" at column {}: {}", s_, pos_ + 1, msg));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }

  NodePtr binary(char op, NodePtr a, NodePtr b) {
    Node n;
    n.kind = Node::Kind::binary;
    n.op = op;
    n.args = {std::move(a), std::move(b)};
    return make_node(std::move(n));
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    while (true) {
      if (accept('+'))
        lhs = binary('+', lhs, parse_product());
      else if (accept('-'))
        lhs = binary('-', lhs, parse_product());
      else
        return lhs;
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    while (true) {
      if (accept('*'))
        lhs = binary('*', lhs, parse_unary());
      else if (accept('/'))
        lhs = binary('/', lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      Node n;
    n.kind = Node::Kind::unary_minus;
      n.args = {parse_unary()};
      return make_node(std::move(n));
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_atom();
    if (accept('^')) return binary('^', base, parse_unary());
    return base;
  }

  int parse_int() {
    skip();
    const bool neg = accept('-');
    skip();
    int v = 0;
    auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected an integer");
    pos_ = static_cast<std::size_t>(p - s_.data());
    return neg ? -v : v;
  }

  NodePtr parse_atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = parse_sum();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("malformed number");
      pos_ = static_cast<std::size_t>(p - s_.data());
      Node n;
    n.kind = Node::Kind::number;
      n.value = v;
      return make_node(std::move(n));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        id.push_back(s_[pos_++]);
      if (id == "Y") {
        expect('(');
        Node n;
    n.kind = Node::Kind::harmonic;
        n.l = parse_int();
        expect(',');
        n.m = parse_int();
        expect(')');
        if (n.l < 0 || std::abs(n.m) > n.l) fail(fmt::format("Y({}, {}) needs |m| <= l", n.l, n.m));
        return make_node(std::move(n));
      }
      if (is_function(id)) {
        expect('(');
        Node n;
    n.kind = Node::Kind::function;
        n.name = id;
        n.args = {parse_sum()};
        expect(')');
        return make_node(std::move(n));
      }
      if (is_variable(id)) {
        Node n;
    n.kind = Node::Kind::variable;
        n.name = id;
        return make_node(std::move(n));
      }
      fail(fmt::format("unknown symbol '{}'", id));
    }
    fail(fmt::format("unexpected '{}'", c));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, const ExprPoint& p) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::variable:
      if (n.name == "x") return p.position[0];
      if (n.name == "y") return p.position[1];
      if (n.name == "z") return p.position[2];
      if (n.name == "scal_B") return p.scal_b;
      if (n.name == "pi") return std::numbers::pi;
      return std::numbers::e;
    case Node::Kind::unary_minus:
      return -eval(*n.args[0], p);
    case Node::Kind::binary: {
      const double a = eval(*n.args[0], p);
      const double b = eval(*n.args[1], p);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: return std::pow(a, b);
      }
    }
    case Node::Kind::function: {
      const double a = eval(*n.args[0], p);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "tan") return std::tan(a);
      if (n.name == "exp") return std::exp(a);
      if (n.name == "log") return std::log(a);
      if (n.name == "sqrt") return std::sqrt(a);
      return std::abs(a);
    }
    case Node::Kind::harmonic:
      return real_spherical_harmonic(n.l, n.m, p.position);
  }
  return 0.0;
}

double factorial_ratio(int l, int m) {
  // (l - m)! / (l + m)!
  double r = 1.0;
  for (int i = l - m + 1; i <= l + m; ++i) r /= i;
  return r;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = ExprParser(text).parse();
  return e;
}

double Expression::evaluate(const ExprPoint& p) const { return eval(*root_, p); }

double real_spherical_harmonic(int l, int m, const std::array<double, 3>& dir) {
  if (l < 0 || std::abs(m) > l) throw DomainError(fmt::format("Y({}, {}) needs |m| <= l", l, m));
  const double r = std::hypot(dir[0], dir[1], dir[2]);
  if (!(r > 0.0)) throw DomainError("spherical harmonic evaluated at the origin");
  const double ct = std::clamp(dir[2] / r, -1.0, 1.0);
  const double ph = std::atan2(dir[1], dir[0]);
  const int am = std::abs(m);
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * factorial_ratio(l, am));
  const double plm = std::assoc_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), ct);
  if (m == 0) return norm * plm;
  const double ang = m > 0 ? std::cos(am * ph) : std::sin(am * ph);
  return std::numbers::sqrt2 * norm * plm * ang;
}

}  // namespace pscal::cli
