#include "hamreal/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

namespace hamreal {

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  std::string name;
  std::vector<Expr> args;
};

namespace {

const std::string kEmpty;

}  // namespace

bool is_unary(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Exp:
    case Op::Ln:
    case Op::Sin:
    case Op::Cos:
    case Op::Sqrt:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return true;
    default:
      return false;
  }
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Constant: return "const";
    case Op::Variable: return "var";
    case Op::Parameter: return "param";
    case Op::Neg: return "neg";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
  }
  return "?";
}

Expr::Expr() : node_(nullptr) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Parameter;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  if (!is_unary(op)) throw Error(std::string("not a unary operator: ") + op_name(op));
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args.push_back(std::move(arg));
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw Error(std::string("not a binary operator: ") + op_name(op));
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args.push_back(std::move(lhs));
  n->args.push_back(std::move(rhs));
  return Expr(std::move(n));
}

// A default-constructed Expr has a null node and reads as the constant 0.
Op Expr::op() const { return node_ ? node_->op : Op::Constant; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
const std::string& Expr::name() const { return node_ ? node_->name : kEmpty; }
std::span<const Expr> Expr::args() const {
  if (!node_) return {};
  return {node_->args.data(), node_->args.size()};
}

// ---------------------------------------------------------------------------
// Numeric kernels shared by eval and constant folding.

namespace {

double apply_unary(Op op, double a) {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Exp: return std::exp(a);
    case Op::Ln:
      if (!(a > 0.0)) throw DomainError("ln of non-positive argument " + std::to_string(a));
      return std::log(a);
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Sqrt:
      if (a < 0.0) throw DomainError("sqrt of negative argument " + std::to_string(a));
      return std::sqrt(a);
    default: break;
  }
  throw Error("bad unary op");
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
      if (b == 0.0) throw DomainError("division by zero");
      return a / b;
    case Op::Pow:
      if (a < 0.0 && std::trunc(b) != b)
        throw DomainError("fractional power of negative base " + std::to_string(a));
      if (a == 0.0 && b < 0.0) throw DomainError("negative power of zero");
      return std::pow(a, b);
    default: break;
  }
  throw Error("bad binary op");
}

bool try_fold_unary(Op op, double a, double& out) {
  try {
    out = apply_unary(op, a);
    return std::isfinite(out);
  } catch (const DomainError&) {
    return false;
  }
}

bool try_fold_binary(Op op, double a, double b, double& out) {
  try {
    out = apply_binary(op, a, b);
    return std::isfinite(out);
  } catch (const DomainError&) {
    return false;
  }
}

// Local rewrite of a single node whose children are already rewritten.
Expr rewrite(Op op, const Expr& a) {
  double v = 0.0;
  if (a.is_constant() && try_fold_unary(op, a.value(), v)) return Expr::constant(v);
  if (op == Op::Neg && a.op() == Op::Neg) return a.arg(0);
  if (op == Op::Ln && a.op() == Op::Exp) return a.arg(0);
  return Expr::unary(op, a);
}

Expr rewrite(Op op, const Expr& a, const Expr& b) {
  double v = 0.0;
  if (a.is_constant() && b.is_constant() && try_fold_binary(op, a.value(), b.value(), v))
    return Expr::constant(v);
  switch (op) {
    case Op::Add:
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      if (b.op() == Op::Neg) return rewrite(Op::Sub, a, b.arg(0));
      break;
    case Op::Sub:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return rewrite(Op::Neg, b);
      if (structurally_equal(a, b)) return Expr::constant(0.0);
      if (b.op() == Op::Neg) return rewrite(Op::Add, a, b.arg(0));
      break;
    case Op::Mul:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(-1.0)) return rewrite(Op::Neg, b);
      if (b.is_constant(-1.0)) return rewrite(Op::Neg, a);
      if (a.op() == Op::Neg && b.op() == Op::Neg) return rewrite(Op::Mul, a.arg(0), b.arg(0));
      if (a.op() == Op::Neg) return rewrite(Op::Neg, rewrite(Op::Mul, a.arg(0), b));
      if (b.op() == Op::Neg) return rewrite(Op::Neg, rewrite(Op::Mul, a, b.arg(0)));
      break;
    case Op::Div:
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
      if (!b.is_constant(0.0) && structurally_equal(a, b)) return Expr::constant(1.0);
      if (b.is_constant(-1.0)) return rewrite(Op::Neg, a);
      if (a.op() == Op::Neg) return rewrite(Op::Neg, rewrite(Op::Div, a.arg(0), b));
      break;
    case Op::Pow:
      if (b.is_constant(0.0)) return Expr::constant(1.0);
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(1.0)) return Expr::constant(1.0);
      break;
    default:
      break;
  }
  return Expr::binary(op, a, b);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return rewrite(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return rewrite(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return rewrite(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return rewrite(Op::Div, a, b); }
Expr operator-(const Expr& a) { return rewrite(Op::Neg, a); }
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }
Expr pow(const Expr& base, const Expr& exponent) { return rewrite(Op::Pow, base, exponent); }
Expr pow(const Expr& base, double exponent) { return pow(base, Expr::constant(exponent)); }
Expr exp(const Expr& a) { return rewrite(Op::Exp, a); }
Expr ln(const Expr& a) { return rewrite(Op::Ln, a); }
Expr sin(const Expr& a) { return rewrite(Op::Sin, a); }
Expr cos(const Expr& a) { return rewrite(Op::Cos, a); }
Expr sqrt(const Expr& a) { return rewrite(Op::Sqrt, a); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Constant: return a.value() == b.value();
    case Op::Variable:
    case Op::Parameter: return a.name() == b.name();
    default: break;
  }
  auto xa = a.args();
  auto xb = b.args();
  if (xa.size() != xb.size()) return false;
  for (std::size_t i = 0; i < xa.size(); ++i)
    if (!structurally_equal(xa[i], xb[i])) return false;
  return true;
}

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const Expr& c : e.args()) collect_symbols(c, out);
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view symbol) {
  if (e.is_symbol()) return e.name() == symbol;
  for (const Expr& c : e.args())
    if (depends_on(c, symbol)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Constant: return e.value() < 0.0 || std::signbit(e.value()) ? kPrecNeg : kPrecAtom;
    case Op::Add:
    case Op::Sub: return kPrecAdd;
    case Op::Mul:
    case Op::Div: return kPrecMul;
    case Op::Neg: return kPrecNeg;
    case Op::Pow: return kPrecPow;
    default: return kPrecAtom;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(v));
  std::string s(buf, res.ptr);
  return std::signbit(v) ? "-" + s : s;
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& c, bool parens, std::string& out) {
  if (parens) out += '(';
  print(c, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  const Op op = e.op();
  switch (op) {
    case Op::Constant: out += format_number(e.value()); return;
    case Op::Variable:
    case Op::Parameter: out += e.name(); return;
    case Op::Neg:
      out += '-';
      print_child(e.arg(0), precedence(e.arg(0)) <= kPrecNeg, out);
      return;
    case Op::Exp:
    case Op::Ln:
    case Op::Sin:
    case Op::Cos:
    case Op::Sqrt:
      out += op_name(op);
      out += '(';
      print(e.arg(0), out);
      out += ')';
      return;
    case Op::Pow:
      print_child(e.arg(0), precedence(e.arg(0)) <= kPrecPow, out);
      out += '^';
      print_child(e.arg(1), precedence(e.arg(1)) < kPrecPow, out);
      return;
    default: break;
  }
  const int p = precedence(e);
  print_child(e.arg(0), precedence(e.arg(0)) < p, out);
  switch (op) {
    case Op::Add: out += " + "; break;
    case Op::Sub: out += " - "; break;
    case Op::Mul: out += '*'; break;
    case Op::Div: out += '/'; break;
    default: break;
  }
  print_child(e.arg(1), precedence(e.arg(1)) <= p, out);
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  if (e.is_symbol()) {
    auto it = replacements.find(e.name());
    return it == replacements.end() ? e : it->second;
  }
  if (is_unary(e.op())) return Expr::unary(e.op(), substitute(e.arg(0), replacements));
  if (is_binary(e.op()))
    return Expr::binary(e.op(), substitute(e.arg(0), replacements), substitute(e.arg(1), replacements));
  return e;
}

Expr diff(const Expr& e, std::string_view s) {
  switch (e.op()) {
    case Op::Constant: return Expr::constant(0.0);
    case Op::Variable:
    case Op::Parameter: return Expr::constant(e.name() == s ? 1.0 : 0.0);
    default: break;
  }
  const Expr& u = e.arg(0);
  const Expr du = diff(u, s);
  switch (e.op()) {
    case Op::Neg: return -du;
    case Op::Exp: return e * du;
    case Op::Ln: return du / u;
    case Op::Sin: return cos(u) * du;
    case Op::Cos: return -(sin(u) * du);
    case Op::Sqrt: return du / (2.0 * e);
    default: break;
  }
  const Expr& v = e.arg(1);
  const Expr dv = diff(v, s);
  switch (e.op()) {
    case Op::Add: return du + dv;
    case Op::Sub: return du - dv;
    case Op::Mul: return du * v + u * dv;
    case Op::Div: return du / v - u * dv / (v * v);
    case Op::Pow:
      if (!depends_on(v, s)) return v * pow(u, v - 1.0) * du;
      return e * (dv * ln(u) + v * du / u);
    default: break;
  }
  throw Error("diff: unexpected node");
}

Expr simplify(const Expr& e) {
  if (is_unary(e.op())) return rewrite(e.op(), simplify(e.arg(0)));
  if (is_binary(e.op())) return rewrite(e.op(), simplify(e.arg(0)), simplify(e.arg(1)));
  return e;
}

double eval(const Expr& e, const Point& pt) {
  switch (e.op()) {
    case Op::Constant: return e.value();
    case Op::Variable:
    case Op::Parameter: return pt.at(e.name());
    default: break;
  }
  if (is_unary(e.op())) return apply_unary(e.op(), eval(e.arg(0), pt));
  return apply_binary(e.op(), eval(e.arg(0), pt), eval(e.arg(1), pt));
}

// ---------------------------------------------------------------------------
// Point

Point::Point(std::initializer_list<std::pair<std::string, double>> values) {
  for (const auto& [k, v] : values) set(k, v);
}

void Point::set(std::string_view name, double value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                             [](const auto& entry, std::string_view n) { return entry.first < n; });
  if (it != entries_.end() && it->first == name) {
    it->second = value;
  } else {
    entries_.insert(it, {std::string(name), value});
  }
}

std::optional<double> Point::get(std::string_view name) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                             [](const auto& entry, std::string_view n) { return entry.first < n; });
  if (it != entries_.end() && it->first == name) return it->second;
  return std::nullopt;
}

double Point::at(std::string_view name) const {
  if (auto v = get(name)) return *v;
  throw MissingSymbol(std::string(name));
}

// ---------------------------------------------------------------------------
// Chart

namespace {

bool is_reserved(std::string_view s) {
  return s == "exp" || s == "ln" || s == "sin" || s == "cos" || s == "sqrt";
}

}  // namespace

Chart::Chart(std::vector<std::string> coordinates, std::optional<std::string> time,
             std::vector<Parameter> parameters)
    : coordinates_(std::move(coordinates)), time_(std::move(time)), parameters_(std::move(parameters)) {
  std::set<std::string> seen;
  auto claim = [&](const std::string& s) {
    if (s.empty()) throw ModelError("empty symbol name");
    if (is_reserved(s)) throw ModelError("symbol '" + s + "' is a reserved function name");
    if (!seen.insert(s).second) throw ModelError("symbol '" + s + "' declared twice");
  };
  for (const auto& c : coordinates_) claim(c);
  if (time_) claim(*time_);
  for (const auto& p : parameters_) claim(p.name);
}

SymbolKind Chart::kind(std::string_view symbol) const {
  for (const auto& c : coordinates_)
    if (c == symbol) return SymbolKind::Coordinate;
  if (time_ && *time_ == symbol) return SymbolKind::Time;
  for (const auto& p : parameters_)
    if (p.name == symbol) return SymbolKind::Parameter;
  return SymbolKind::Undeclared;
}

std::optional<double> Chart::parameter_value(std::string_view name) const {
  for (const auto& p : parameters_)
    if (p.name == name) return p.value;
  throw UndeclaredSymbol(std::string(name));
}

Chart Chart::with_parameters(const std::map<std::string, double, std::less<>>& values) const {
  Chart out = *this;
  for (const auto& [name, v] : values) {
    auto it = std::find_if(out.parameters_.begin(), out.parameters_.end(),
                           [&](const Parameter& p) { return p.name == name; });
    if (it == out.parameters_.end()) throw UndeclaredSymbol(name);
    it->value = v;
  }
  return out;
}

Chart Chart::with_coordinates(std::vector<std::string> coordinates) const {
  return Chart(std::move(coordinates), time_, parameters_);
}

Point Chart::point(std::span<const double> coordinates, std::optional<double> time) const {
  if (coordinates.size() != coordinates_.size())
    throw ModelError("point has " + std::to_string(coordinates.size()) + " coordinates, chart has " +
                     std::to_string(coordinates_.size()));
  Point pt;
  for (std::size_t i = 0; i < coordinates.size(); ++i) pt.set(coordinates_[i], coordinates[i]);
  if (time_ && time) pt.set(*time_, *time);
  for (const auto& p : parameters_) {
    if (!p.value) throw ModelError("parameter '" + p.name + "' has no value");
    pt.set(p.name, *p.value);
  }
  return pt;
}

Point Chart::parameter_point() const {
  Point pt;
  for (const auto& p : parameters_)
    if (p.value) pt.set(p.name, *p.value);
  return pt;
}

std::vector<Expr> grad(const Expr& e, const Chart& chart) {
  std::vector<Expr> out;
  out.reserve(chart.dimension());
  for (const auto& c : chart.coordinates()) out.push_back(diff(e, c));
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, const Chart& chart) : src_(src), chart_(chart) {}

  Expr parse_all() {
    Expr e = expression();
    skip_ws();
    if (pos_ < src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r' ||
                                  src_[pos_] == '\n'))
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
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = Expr::binary(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(Op::Mul, lhs, unary());
      else if (accept('/'))
        lhs = Expr::binary(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Op::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(Op::Pow, base, unary());
    return base;
  }

  static bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (digit(c) || c == '.') return number();
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      const std::string_view id = src_.substr(start, pos_ - start);
      if (is_reserved(id)) {
        Op op = id == "exp" ? Op::Exp : id == "ln" ? Op::Ln : id == "sin" ? Op::Sin : id == "cos" ? Op::Cos : Op::Sqrt;
        expect('(');
        Expr arg = expression();
        expect(')');
        return Expr::unary(op, arg);
      }
      switch (chart_.kind(id)) {
        case SymbolKind::Coordinate:
        case SymbolKind::Time: return Expr::variable(std::string(id));
        case SymbolKind::Parameter: return Expr::parameter(std::string(id));
        case SymbolKind::Undeclared: throw UndeclaredSymbol(std::string(id));
      }
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    bool digits = false;
    while (pos_ < src_.size() && digit(src_[pos_])) ++pos_, digits = true;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && digit(src_[pos_])) ++pos_, digits = true;
    }
    if (!digits) fail("malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p >= src_.size() || !digit(src_[p])) {
        pos_ = p;
        fail("malformed exponent");
      }
      while (p < src_.size() && digit(src_[p])) ++p;
      pos_ = p;
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("number out of range");
    }
    return Expr::constant(v);
  }

  std::string_view src_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, const Chart& chart) { return Parser(source, chart).parse_all(); }

}  // namespace hamreal
