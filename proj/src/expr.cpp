#include "dlf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "dlf/error.hpp"

namespace dlf::expr {

namespace {

struct FunctionName {
  std::string_view name;
  Function func;
};

constexpr FunctionName kFunctions[] = {
    {"sin", Function::Sin},   {"cos", Function::Cos},   {"exp", Function::Exp},
    {"ln", Function::Ln},     {"sqrt", Function::Sqrt}, {"abs", Function::Abs},
    {"tanh", Function::Tanh},
};

std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return f.func;
  return std::nullopt;
}

std::string_view function_name(Function func) {
  for (const auto& f : kFunctions)
    if (f.func == func) return f.name;
  return "?";
}

std::optional<double> lookup_constant(std::string_view name) {
  if (name == "pi") return std::numbers::pi;
  if (name == "e") return std::numbers::e;
  return std::nullopt;
}

// ---- node construction with light simplification ----

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Number;
  n->value = v;
  return n;
}

NodePtr make_constant(std::string name, double v) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Constant;
  n->name = std::move(name);
  n->value = v;
  return n;
}

NodePtr make_variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Variable;
  n->name = std::move(name);
  return n;
}

NodePtr raw_negate(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Negate;
  n->lhs = std::move(a);
  return n;
}

NodePtr raw_binary(BinaryOp op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Binary;
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr raw_call(Function f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Call;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

bool is_number(const NodePtr& n, double v) {
  return n->type == Node::Type::Number && n->value == v;
}
bool is_number(const NodePtr& n) { return n->type == Node::Type::Number; }

NodePtr neg(NodePtr a) {
  if (is_number(a)) return make_number(-a->value);
  if (a->type == Node::Type::Negate) return a->lhs;
  return raw_negate(std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  if (is_number(a) && is_number(b)) return make_number(a->value + b->value);
  return raw_binary(BinaryOp::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return neg(std::move(b));
  if (is_number(a) && is_number(b)) return make_number(a->value - b->value);
  return raw_binary(BinaryOp::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (is_number(a, -1.0)) return neg(std::move(b));
  if (is_number(b, -1.0)) return neg(std::move(a));
  if (is_number(a) && is_number(b)) return make_number(a->value * b->value);
  return raw_binary(BinaryOp::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0) && !is_number(b, 0.0)) return make_number(0.0);
  if (is_number(b, 1.0)) return a;
  if (is_number(a) && is_number(b) && b->value != 0.0)
    return make_number(a->value / b->value);
  return raw_binary(BinaryOp::Div, std::move(a), std::move(b));
}

NodePtr pow(NodePtr a, NodePtr b) {
  if (is_number(b, 0.0)) return make_number(1.0);
  if (is_number(b, 1.0)) return a;
  if (is_number(a) && is_number(b)) {
    const double v = std::pow(a->value, b->value);
    if (std::isfinite(v)) return make_number(v);
  }
  return raw_binary(BinaryOp::Pow, std::move(a), std::move(b));
}

NodePtr call(Function f, NodePtr a) { return raw_call(f, std::move(a)); }

// ---- lexer / parser ----

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr result = parse_sum();
    skip_space();
    if (pos_ < text_.size())
      fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    throw Error(ErrorKind::SyntaxError,
                "syntax error at offset " + std::to_string(at) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = raw_binary(BinaryOp::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = raw_binary(BinaryOp::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = raw_binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = raw_binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return raw_negate(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return raw_binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    if (literal == ".") fail_at(start, "malformed number");
    return make_number(std::stod(literal));
  }

  NodePtr parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (!name.empty() && name.back() == '_' && pos_ < text_.size() && text_[pos_] == '{') {
      // u_{k1,...,kp}: whitespace inside the braces is dropped.
      ++pos_;
      name += '{';
      for (;;) {
        if (pos_ >= text_.size()) fail("unterminated '{' in derivative symbol");
        const char c = text_[pos_++];
        if (c == '}') break;
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != ',')
          fail_at(pos_ - 1, "derivative symbol indices must be digits");
        name += c;
      }
      name += '}';
      return make_variable(std::move(name));
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const auto func = lookup_function(name);
      if (!func)
        throw Error(ErrorKind::UnknownFunction, "unknown function '" + name +
                                                    "' at offset " + std::to_string(start));
      ++pos_;
      NodePtr arg = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return raw_call(*func, std::move(arg));
    }
    if (auto value = lookup_constant(name)) return make_constant(std::move(name), *value);
    return make_variable(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---- printing ----

int precedence(const Node& n) {
  switch (n.type) {
    case Node::Type::Number:
      return n.value < 0.0 ? 3 : 5;
    case Node::Type::Negate:
      return 3;
    case Node::Type::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 0;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int digits = 1; digits < 17; ++digits) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", digits, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

void print(const Node& n, std::string& out) {
  auto wrapped = [&out](const Node& child, bool parens) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
  };
  switch (n.type) {
    case Node::Type::Number:
      out += format_number(n.value);
      return;
    case Node::Type::Constant:
    case Node::Type::Variable:
      out += n.name;
      return;
    case Node::Type::Negate:
      out += '-';
      wrapped(*n.lhs, precedence(*n.lhs) < 3);
      return;
    case Node::Type::Call:
      out += function_name(n.func);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
    case Node::Type::Binary: {
      const int p = precedence(n);
      const int pl = precedence(*n.lhs);
      const int pr = precedence(*n.rhs);
      const bool pow = n.op == BinaryOp::Pow;
      wrapped(*n.lhs, pow ? pl <= p : pl < p);
      switch (n.op) {
        case BinaryOp::Add: out += " + "; break;
        case BinaryOp::Sub: out += " - "; break;
        case BinaryOp::Mul: out += '*'; break;
        case BinaryOp::Div: out += '/'; break;
        case BinaryOp::Pow: out += '^'; break;
      }
      wrapped(*n.rhs, pow ? pr < p : pr <= p);
      return;
    }
  }
}

bool equal(const Node& a, const Node& b) {
  if (a.type != b.type) return false;
  switch (a.type) {
    case Node::Type::Number:
      return a.value == b.value;
    case Node::Type::Constant:
    case Node::Type::Variable:
      return a.name == b.name;
    case Node::Type::Negate:
      return equal(*a.lhs, *b.lhs);
    case Node::Type::Call:
      return a.func == b.func && equal(*a.lhs, *b.lhs);
    case Node::Type::Binary:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

void collect_variables(const Node& n, std::set<std::string>& out) {
  if (n.type == Node::Type::Variable) out.insert(n.name);
  if (n.lhs) collect_variables(*n.lhs, out);
  if (n.rhs) collect_variables(*n.rhs, out);
}

bool mentions(const Node& n, std::string_view var) {
  if (n.type == Node::Type::Variable && n.name == var) return true;
  return (n.lhs && mentions(*n.lhs, var)) || (n.rhs && mentions(*n.rhs, var));
}

bool mentions_any(const Node& n, const std::set<std::string>& vars) {
  if (n.type == Node::Type::Variable && vars.count(n.name)) return true;
  return (n.lhs && mentions_any(*n.lhs, vars)) || (n.rhs && mentions_any(*n.rhs, vars));
}

// ---- evaluation ----

[[noreturn]] void math_domain(const std::string& what) {
  throw Error(ErrorKind::MathDomain, "domain error: " + what);
}

double apply_function(Function f, double a) {
  switch (f) {
    case Function::Sin: return std::sin(a);
    case Function::Cos: return std::cos(a);
    case Function::Exp: return std::exp(a);
    case Function::Ln:
      if (!(a > 0.0)) math_domain("ln of non-positive value " + format_number(a));
      return std::log(a);
    case Function::Sqrt:
      if (a < 0.0) math_domain("sqrt of negative value " + format_number(a));
      return std::sqrt(a);
    case Function::Abs: return std::abs(a);
    case Function::Tanh: return std::tanh(a);
  }
  return 0.0;
}

double apply_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div:
      if (b == 0.0) math_domain("division by zero");
      return a / b;
    case BinaryOp::Pow: {
      const double v = std::pow(a, b);
      if (std::isnan(v) && !std::isnan(a) && !std::isnan(b))
        math_domain(format_number(a) + "^" + format_number(b) + " is not real");
      return v;
    }
  }
  return 0.0;
}

double eval_node(const Node& n, const Env& env) {
  switch (n.type) {
    case Node::Type::Number:
    case Node::Type::Constant:
      return n.value;
    case Node::Type::Variable: {
      const auto it = env.find(n.name);
      if (it == env.end())
        throw Error(ErrorKind::UnboundVariable, "unbound variable '" + n.name + "'");
      return it->second;
    }
    case Node::Type::Negate:
      return -eval_node(*n.lhs, env);
    case Node::Type::Call:
      return apply_function(n.func, eval_node(*n.lhs, env));
    case Node::Type::Binary:
      return apply_binary(n.op, eval_node(*n.lhs, env), eval_node(*n.rhs, env));
  }
  return 0.0;
}

using cplx = std::complex<double>;

cplx apply_function(Function f, cplx a) {
  switch (f) {
    case Function::Sin: return std::sin(a);
    case Function::Cos: return std::cos(a);
    case Function::Exp: return std::exp(a);
    case Function::Ln: return std::log(a);
    case Function::Sqrt: return std::sqrt(a);
    case Function::Abs: return std::abs(a);
    case Function::Tanh: return std::tanh(a);
  }
  return 0.0;
}

cplx complex_pow(cplx a, cplx b) {
  if (b.imag() == 0.0 && b.real() == std::round(b.real()) && std::abs(b.real()) < 64) {
    int n = static_cast<int>(b.real());
    const bool invert = n < 0;
    n = std::abs(n);
    cplx result = 1.0, base = a;
    while (n) {
      if (n & 1) result *= base;
      base *= base;
      n >>= 1;
    }
    return invert ? 1.0 / result : result;
  }
  return std::pow(a, b);
}

cplx eval_node(const Node& n, const ComplexEnv& env) {
  switch (n.type) {
    case Node::Type::Number:
    case Node::Type::Constant:
      return n.value;
    case Node::Type::Variable: {
      const auto it = env.find(n.name);
      if (it == env.end())
        throw Error(ErrorKind::UnboundVariable, "unbound variable '" + n.name + "'");
      return it->second;
    }
    case Node::Type::Negate:
      return -eval_node(*n.lhs, env);
    case Node::Type::Call:
      return apply_function(n.func, eval_node(*n.lhs, env));
    case Node::Type::Binary: {
      const cplx a = eval_node(*n.lhs, env);
      const cplx b = eval_node(*n.rhs, env);
      switch (n.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: return complex_pow(a, b);
      }
    }
  }
  return 0.0;
}

// ---- differentiation ----

NodePtr derivative(const NodePtr& n, std::string_view var) {
  if (!mentions(*n, var)) return make_number(0.0);
  switch (n->type) {
    case Node::Type::Number:
    case Node::Type::Constant:
      return make_number(0.0);
    case Node::Type::Variable:
      return make_number(1.0);
    case Node::Type::Negate:
      return neg(derivative(n->lhs, var));
    case Node::Type::Call: {
      const NodePtr& a = n->lhs;
      const NodePtr da = derivative(a, var);
      switch (n->func) {
        case Function::Sin: return mul(call(Function::Cos, a), da);
        case Function::Cos: return mul(neg(call(Function::Sin, a)), da);
        case Function::Exp: return mul(n, da);
        case Function::Ln: return div(da, a);
        case Function::Sqrt: return div(da, mul(make_number(2.0), n));
        case Function::Tanh:
          return mul(sub(make_number(1.0), pow(n, make_number(2.0))), da);
        case Function::Abs:
          throw Error(ErrorKind::NotDifferentiable,
                      "abs() is not differentiable; cannot differentiate '" + Expr(n).str() + "'");
      }
      return make_number(0.0);
    }
    case Node::Type::Binary: {
      const NodePtr& a = n->lhs;
      const NodePtr& b = n->rhs;
      switch (n->op) {
        case BinaryOp::Add: return add(derivative(a, var), derivative(b, var));
        case BinaryOp::Sub: return sub(derivative(a, var), derivative(b, var));
        case BinaryOp::Mul:
          return add(mul(derivative(a, var), b), mul(a, derivative(b, var)));
        case BinaryOp::Div: {
          if (!mentions(*b, var)) return div(derivative(a, var), b);
          return div(sub(mul(derivative(a, var), b), mul(a, derivative(b, var))),
                     pow(b, make_number(2.0)));
        }
        case BinaryOp::Pow: {
          if (!mentions(*b, var)) {
            return mul(mul(b, pow(a, sub(b, make_number(1.0)))), derivative(a, var));
          }
          if (!mentions(*a, var)) {
            return mul(mul(n, call(Function::Ln, a)), derivative(b, var));
          }
          return mul(n, add(mul(derivative(b, var), call(Function::Ln, a)),
                            div(mul(b, derivative(a, var)), a)));
        }
      }
    }
  }
  return make_number(0.0);
}

bool affine(const Node& n, const std::set<std::string>& unknowns) {
  if (!mentions_any(n, unknowns)) return true;
  switch (n.type) {
    case Node::Type::Variable:
      return true;
    case Node::Type::Negate:
      return affine(*n.lhs, unknowns);
    case Node::Type::Call:
      return false;
    case Node::Type::Binary:
      switch (n.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return affine(*n.lhs, unknowns) && affine(*n.rhs, unknowns);
        case BinaryOp::Mul:
          if (!mentions_any(*n.lhs, unknowns)) return affine(*n.rhs, unknowns);
          if (!mentions_any(*n.rhs, unknowns)) return affine(*n.lhs, unknowns);
          return false;
        case BinaryOp::Div:
          return !mentions_any(*n.rhs, unknowns) && affine(*n.lhs, unknowns);
        case BinaryOp::Pow:
          return false;
      }
      return false;
    default:
      return true;
  }
}

NodePtr replace(const NodePtr& n, const std::unordered_map<std::string, Expr>& with) {
  switch (n->type) {
    case Node::Type::Variable: {
      const auto it = with.find(n->name);
      return it == with.end() ? n : it->second.root_ptr();
    }
    case Node::Type::Negate: return raw_negate(replace(n->lhs, with));
    case Node::Type::Call: return raw_call(n->func, replace(n->lhs, with));
    case Node::Type::Binary:
      return raw_binary(n->op, replace(n->lhs, with), replace(n->rhs, with));
    default: return n;
  }
}

}  // namespace

Expr::Expr() : root_(make_number(0.0)) {}
Expr::Expr(NodePtr root) : root_(std::move(root)) {}

Expr Expr::number(double value) { return Expr(make_number(value)); }
Expr Expr::variable(std::string name) { return Expr(make_variable(std::move(name))); }

std::string Expr::str() const {
  std::string out;
  print(*root_, out);
  return out;
}

std::set<std::string> Expr::variables() const {
  std::set<std::string> out;
  collect_variables(*root_, out);
  return out;
}

bool Expr::depends_on(std::string_view var) const { return mentions(*root_, var); }

bool operator==(const Expr& a, const Expr& b) { return equal(*a.root_, *b.root_); }

Expr parse_expr(std::string_view text) { return Expr(Parser(text).parse()); }

double eval_expr(const Expr& expr, const Env& env) { return eval_node(expr.root(), env); }

std::complex<double> eval_expr(const Expr& expr, const ComplexEnv& env) {
  return eval_node(expr.root(), env);
}

Expr diff_expr(const Expr& expr, std::string_view var, int order) {
  if (order < 1)
    throw Error(ErrorKind::InvalidParameter, "derivative order must be >= 1");
  NodePtr current = expr.root_ptr();
  for (int k = 0; k < order; ++k) current = derivative(current, var);
  return Expr(current);
}

Expr substitute(const Expr& expr, const std::unordered_map<std::string, Expr>& with) {
  return Expr(replace(expr.root_ptr(), with));
}

bool is_affine_in(const Expr& expr, const std::set<std::string>& unknowns) {
  return affine(expr.root(), unknowns);
}

BoundExpr::BoundExpr(const Expr& expr, std::span<const std::string> slots) {
  emit(expr.root(), slots);
  std::size_t depth = 0;
  for (const auto& ins : program_) {
    switch (ins.code) {
      case Code::Const:
      case Code::Slot:
        depth_ = std::max(depth_, ++depth);
        break;
      case Code::Neg:
      case Code::Call:
        break;
      default:
        --depth;
    }
  }
}

void BoundExpr::emit(const Node& node, std::span<const std::string> slots) {
  switch (node.type) {
    case Node::Type::Number:
    case Node::Type::Constant:
      program_.push_back({Code::Const, Function::Sin, 0, node.value});
      return;
    case Node::Type::Variable: {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] == node.name) {
          program_.push_back({Code::Slot, Function::Sin, i, 0.0});
          return;
        }
      }
      throw Error(ErrorKind::UnboundVariable, "unbound variable '" + node.name + "'");
    }
    case Node::Type::Negate:
      emit(*node.lhs, slots);
      program_.push_back({Code::Neg, Function::Sin, 0, 0.0});
      return;
    case Node::Type::Call:
      emit(*node.lhs, slots);
      program_.push_back({Code::Call, node.func, 0, 0.0});
      return;
    case Node::Type::Binary: {
      emit(*node.lhs, slots);
      emit(*node.rhs, slots);
      Code code = Code::Add;
      switch (node.op) {
        case BinaryOp::Add: code = Code::Add; break;
        case BinaryOp::Sub: code = Code::Sub; break;
        case BinaryOp::Mul: code = Code::Mul; break;
        case BinaryOp::Div: code = Code::Div; break;
        case BinaryOp::Pow: code = Code::Pow; break;
      }
      program_.push_back({code, Function::Sin, 0, 0.0});
      return;
    }
  }
}

double BoundExpr::operator()(std::span<const double> values) const {
  std::vector<double> stack;
  stack.reserve(depth_);
  for (const auto& ins : program_) {
    switch (ins.code) {
      case Code::Const:
        stack.push_back(ins.value);
        break;
      case Code::Slot:
        stack.push_back(values[ins.slot]);
        break;
      case Code::Neg:
        stack.back() = -stack.back();
        break;
      case Code::Call:
        stack.back() = apply_function(ins.func, stack.back());
        break;
      default: {
        const double b = stack.back();
        stack.pop_back();
        const double a = stack.back();
        BinaryOp op = BinaryOp::Add;
        switch (ins.code) {
          case Code::Sub: op = BinaryOp::Sub; break;
          case Code::Mul: op = BinaryOp::Mul; break;
          case Code::Div: op = BinaryOp::Div; break;
          case Code::Pow: op = BinaryOp::Pow; break;
          default: break;
        }
        stack.back() = apply_binary(op, a, b);
      }
    }
  }
  return stack.empty() ? 0.0 : stack.back();
}

}  // namespace dlf::expr
