#include "nfe/expr.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace nfe {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(fmt::format("{} at position {}", message, position)),
      position_(position) {}

UnknownFunctionError::UnknownFunctionError(const std::string& name,
                                           std::size_t position)
    : ParseError(fmt::format("unknown function '{}'", name), position) {}

UnboundParameterError::UnboundParameterError(const std::string& name)
    : EvalError(fmt::format("unbound parameter '{}'", name)), name_(name) {}

DomainError::DomainError(const std::string& what,
                         const std::string& subexpression)
    : EvalError(fmt::format("{} in '{}'", what, subexpression)),
      subexpression_(subexpression) {}

namespace {

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

NodePtr make(auto value) {
  return std::make_shared<const Node>(Node{std::move(value)});
}

const char* function_name(Function fn) {
  switch (fn) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Sqrt: return "sqrt";
    case Function::Abs: return "abs";
  }
  return "?";
}

char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

std::string render(const Node& node);

struct Renderer {
  std::string operator()(const Expr::Variable&) const { return "x"; }
  std::string operator()(const Expr::Number& n) const {
    if (!n.label.empty()) return n.label;
    std::string s = fmt::format("{:.17g}", n.value);
    return n.value < 0 ? "(" + s + ")" : s;
  }
  std::string operator()(const Expr::Parameter& p) const { return p.name; }
  std::string operator()(const Expr::Negate& n) const {
    return "(-" + render(*n.operand) + ")";
  }
  std::string operator()(const Expr::Binary& b) const {
    return "(" + render(*b.lhs) + " " + op_symbol(b.op) + " " +
           render(*b.rhs) + ")";
  }
  std::string operator()(const Expr::Call& c) const {
    return std::string(function_name(c.fn)) + "(" + render(*c.arg) + ")";
  }
};

std::string render(const Node& node) { return std::visit(Renderer{}, node.value); }

// Integer powers by repeated squaring; everything else through exp(y log x).
double power(double base, double exponent, const Node& node) {
  double integral = 0.0;
  if (std::modf(exponent, &integral) == 0.0 &&
      std::abs(exponent) <= static_cast<double>(1LL << 53)) {
    auto k = static_cast<long long>(std::abs(exponent));
    if (exponent < 0 && base == 0.0)
      throw DomainError("division by zero", render(node));
    double result = 1.0;
    double factor = base;
    while (k > 0) {
      if (k & 1) result *= factor;
      factor *= factor;
      k >>= 1;
    }
    return exponent < 0 ? 1.0 / result : result;
  }
  if (base < 0.0)
    throw DomainError("non-integer power of a negative number", render(node));
  if (base == 0.0) {
    if (exponent < 0.0) throw DomainError("division by zero", render(node));
    return 0.0;
  }
  return std::exp(exponent * std::log(base));
}

template <class Lookup>
double eval(const Node& node, const Lookup& lookup, double x) {
  double result = std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expr::Variable>) {
          return x;
        } else if constexpr (std::is_same_v<T, Expr::Number>) {
          return v.value;
        } else if constexpr (std::is_same_v<T, Expr::Parameter>) {
          return lookup(v.name);
        } else if constexpr (std::is_same_v<T, Expr::Negate>) {
          return -eval(*v.operand, lookup, x);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          double a = eval(*v.lhs, lookup, x);
          double b = eval(*v.rhs, lookup, x);
          switch (v.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div:
              if (b == 0.0) throw DomainError("division by zero", render(node));
              return a / b;
            case BinaryOp::Pow: return power(a, b, node);
          }
          return 0.0;
        } else {
          double a = eval(*v.arg, lookup, x);
          switch (v.fn) {
            case Function::Sin: return std::sin(a);
            case Function::Cos: return std::cos(a);
            case Function::Exp: return std::exp(a);
            case Function::Sqrt:
              if (a < 0.0)
                throw DomainError("square root of a negative number",
                                  render(node));
              return std::sqrt(a);
            case Function::Abs: return std::abs(a);
          }
          return 0.0;
        }
      },
      node.value);
  if (!std::isfinite(result))
    throw DomainError("non-finite result", render(node));
  return result;
}

void collect(const Node& node, std::set<std::string>& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expr::Parameter>) {
          out.insert(v.name);
        } else if constexpr (std::is_same_v<T, Expr::Negate>) {
          collect(*v.operand, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect(*v.lhs, out);
          collect(*v.rhs, out);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          collect(*v.arg, out);
        }
      },
      node.value);
}

// Replaces parameters with labelled constants.
NodePtr substitute(const NodePtr& node, const ParamMap& params) {
  return std::visit(
      [&](const auto& v) -> NodePtr {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Expr::Parameter>) {
          auto it = params.find(v.name);
          if (it == params.end()) throw UnboundParameterError(v.name);
          return make(Expr::Number{it->second, v.name});
        } else if constexpr (std::is_same_v<T, Expr::Negate>) {
          return make(Expr::Negate{substitute(v.operand, params)});
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return make(Expr::Binary{v.op, substitute(v.lhs, params),
                                   substitute(v.rhs, params)});
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          return make(Expr::Call{v.fn, substitute(v.arg, params)});
        } else {
          return node;
        }
      },
      node->value);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = expression();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError(fmt::format("unexpected '{}'", src_[pos_]), pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size())
        throw ParseError(fmt::format("expected '{}' but reached end of input", c),
                         pos_);
      throw ParseError(fmt::format("expected '{}'", c), pos_);
    }
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Expr::Binary{BinaryOp::Add, lhs, term()});
      } else if (accept('-')) {
        lhs = make(Expr::Binary{BinaryOp::Sub, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Expr::Binary{BinaryOp::Mul, lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Expr::Binary{BinaryOp::Div, lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Expr::Negate{unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Expr::Binary{BinaryOp::Pow, base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    throw ParseError(fmt::format("unexpected '{}'", c), pos_);
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      throw ParseError(fmt::format("malformed number '{}'", text), start);
    }
    if (used != text.size())
      throw ParseError(fmt::format("malformed number '{}'", text), start);
    if (pos_ < src_.size() &&
        (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      throw ParseError("implicit multiplication is not supported", pos_);
    return make(Expr::Number{value, {}});
  }

  NodePtr name() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string id(src_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      static const std::map<std::string, Function, std::less<>> functions = {
          {"sin", Function::Sin},   {"cos", Function::Cos},
          {"exp", Function::Exp},   {"sqrt", Function::Sqrt},
          {"abs", Function::Abs}};
      auto it = functions.find(id);
      if (it == functions.end()) throw UnknownFunctionError(id, start);
      ++pos_;
      NodePtr arg = expression();
      expect(')');
      return make(Expr::Call{it->second, arg});
    }
    if (id == "x") return make(Expr::Variable{});
    return make(Expr::Parameter{id});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

std::set<std::string> Expr::parameters() const {
  std::set<std::string> out;
  collect(*root_, out);
  return out;
}

double Expr::evaluate(const ParamMap& params, double x) const {
  auto lookup = [&](const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw UnboundParameterError(name);
    return it->second;
  };
  return eval(*root_, lookup, x);
}

std::function<double(double)> Expr::bind(const ParamMap& params) const {
  NodePtr bound = substitute(root_, params);
  return [bound](double x) {
    auto no_params = [](const std::string& name) -> double {
      throw UnboundParameterError(name);
    };
    return eval(*bound, no_params, x);
  };
}

std::string Expr::str() const { return render(*root_); }

Expr parse(std::string_view source) { return Expr(Parser(source).parse_all()); }

}  // namespace nfe
