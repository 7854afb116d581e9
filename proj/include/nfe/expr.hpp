#ifndef NFE_EXPR_HPP
#define NFE_EXPR_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace nfe {

// Small expression language for coefficient functions of one variable `x`.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          (right-associative)
//   primary := number | 'x' | name | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | sqrt | abs
//
// Unary minus binds below '^', so "-x^2" is -(x^2). There is no implicit
// multiplication: "2x" is rejected.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownFunctionError : public ParseError {
 public:
  UnknownFunctionError(const std::string& name, std::size_t position);
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundParameterError : public EvalError {
 public:
  explicit UnboundParameterError(const std::string& name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// sqrt of a negative, division by zero, non-finite results.
class DomainError : public EvalError {
 public:
  DomainError(const std::string& what, const std::string& subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Exp, Sqrt, Abs };

using ParamMap = std::map<std::string, double, std::less<>>;

class Expr {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Variable {};
  struct Number {
    double value;
    std::string label;  // parameter name when produced by bind()
  };
  struct Parameter {
    std::string name;
  };
  struct Negate {
    NodePtr operand;
  };
  struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
  };
  struct Call {
    Function fn;
    NodePtr arg;
  };

  struct Node {
    std::variant<Variable, Number, Parameter, Negate, Binary, Call> value;
  };

  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }

  // Names of all parameters referenced anywhere in the tree.
  std::set<std::string> parameters() const;

  double evaluate(const ParamMap& params, double x) const;

  // Resolves parameter names once and returns a closure over x. Throws
  // UnboundParameterError immediately if a parameter is missing.
  std::function<double(double)> bind(const ParamMap& params) const;

  // Fully parenthesised rendering that parses back to an equivalent tree.
  std::string str() const;

 private:
  NodePtr root_;
};

Expr parse(std::string_view source);

inline double evaluate(const Expr& e, const ParamMap& params, double x) {
  return e.evaluate(params, x);
}

inline std::string print(const Expr& e) { return e.str(); }

}  // namespace nfe

#endif  // NFE_EXPR_HPP
