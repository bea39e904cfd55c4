#pragma once

// Small expression language used for residuals, right-hand sides, condition
// data and user-defined mapping functions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?        (right associative)
//   primary := number | constant | name | func '(' expr ')' | '(' expr ')'
//
// Constants: pi, e. Functions: sin cos exp ln sqrt abs tanh.
// Names are identifiers; the form u_{k1,...,kp} is lexed as one name so
// that partial derivative symbols can be written directly.

#include <complex>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dlf::expr {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Exp, Ln, Sqrt, Abs, Tanh };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Type { Number, Constant, Variable, Negate, Binary, Call };

  Type type = Type::Number;
  double value = 0.0;   // Number, Constant
  std::string name;     // Constant, Variable
  BinaryOp op = BinaryOp::Add;
  Function func = Function::Sin;
  NodePtr lhs;          // Negate / Call operand, Binary left
  NodePtr rhs;          // Binary right
};

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  Expr();
  explicit Expr(NodePtr root);

  static Expr number(double value);
  static Expr variable(std::string name);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  /// Canonical text form; parse(str()) reproduces the same tree.
  std::string str() const;

  std::set<std::string> variables() const;
  bool depends_on(std::string_view var) const;
  bool is_constant() const { return variables().empty(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

using Env = std::unordered_map<std::string, double>;
using ComplexEnv = std::unordered_map<std::string, std::complex<double>>;

Expr parse_expr(std::string_view text);

double eval_expr(const Expr& expr, const Env& env);

/// Principal-branch complex evaluation. No domain checks.
std::complex<double> eval_expr(const Expr& expr, const ComplexEnv& env);

Expr diff_expr(const Expr& expr, std::string_view var, int order = 1);

/// Replaces every occurrence of the named variables.
Expr substitute(const Expr& expr, const std::unordered_map<std::string, Expr>& with);

/// True when the residual is affine in every name in `unknowns`, judged from
/// the syntax alone: no products, quotients, powers or function calls where
/// an unknown appears in a non-affine position.
bool is_affine_in(const Expr& expr, const std::set<std::string>& unknowns);

/// Expression compiled against a fixed list of variable slots, for tight
/// evaluation loops. Unbound names raise at construction.
class BoundExpr {
 public:
  BoundExpr() = default;
  BoundExpr(const Expr& expr, std::span<const std::string> slots);

  double operator()(std::span<const double> values) const;

 private:
  enum class Code : unsigned char {
    Const, Slot, Neg, Add, Sub, Mul, Div, Pow, Call
  };
  struct Instr {
    Code code;
    Function func;
    std::size_t slot;
    double value;
  };
  void emit(const Node& node, std::span<const std::string> slots);

  std::vector<Instr> program_;
  std::size_t depth_ = 0;
};

}  // namespace dlf::expr
