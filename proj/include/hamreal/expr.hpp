#pragma once

// Symbolic scalar expressions over named coordinates, time and parameters.
//
// Expr is an immutable tree with shared subtrees. Derivatives are exact;
// numeric evaluation is IEEE double and raises DomainError instead of
// producing NaN.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hamreal/errors.hpp"

namespace hamreal {

enum class Op : unsigned char {
  Constant,
  Variable,
  Parameter,
  Neg,
  Exp,
  Ln,
  Sin,
  Cos,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

bool is_unary(Op op);
bool is_binary(Op op);
const char* op_name(Op op);

class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr parameter(std::string name);
  /// Raw node construction; no rewriting.
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const;
  /// Value of a Constant node (0 for anything else).
  double value() const;
  /// Name of a Variable or Parameter node (empty otherwise).
  const std::string& name() const;
  std::span<const Expr> args() const;
  const Expr& arg(std::size_t i) const { return args()[i]; }

  bool is_constant() const { return op() == Op::Constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }
  bool is_symbol() const { return op() == Op::Variable || op() == Op::Parameter; }

  /// Identity of the shared node, used for cheap equality short-cuts.
  const void* id() const { return node_.get(); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Arithmetic builders. These apply the local rewrites of simplify() to the
// node they create (constant folding, 0/1 identities), so derivative trees
// stay small. parse() builds raw nodes instead.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, double b);
Expr operator+(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator/(const Expr& a, double b);
Expr operator/(double a, const Expr& b);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);

/// Syntactic (tree) equality.
bool structurally_equal(const Expr& a, const Expr& b);

/// All Variable and Parameter names occurring in e.
std::set<std::string> free_symbols(const Expr& e);
bool depends_on(const Expr& e, std::string_view symbol);

/// Text that parse() reads back as a function-equal expression.
std::string to_string(const Expr& e);

/// Replace symbols by expressions (simultaneously).
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);

/// Exact partial derivative with respect to the named symbol.
Expr diff(const Expr& e, std::string_view symbol);

/// Constant folding, 0/1 identities, a-a -> 0 and a/a -> 1 for syntactically
/// identical subterms, double negation. Folding never hides a domain error:
/// an invalid constant operation is left unevaluated.
Expr simplify(const Expr& e);

// ---------------------------------------------------------------------------

/// A named parameter, optionally bound to a value.
struct Parameter {
  std::string name;
  std::optional<double> value;
};

enum class SymbolKind { Undeclared, Coordinate, Time, Parameter };

/// Assignment symbol -> value. Kept sorted by name.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<std::pair<std::string, double>> values);

  void set(std::string_view name, double value);
  std::optional<double> get(std::string_view name) const;
  /// Throws MissingSymbol.
  double at(std::string_view name) const;
  bool contains(std::string_view name) const { return get(name).has_value(); }
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

/// Coordinate system: ordered spatial coordinates, an optional distinguished
/// time symbol and declared parameters.
class Chart {
 public:
  Chart() = default;
  /// Throws ModelError if symbols collide.
  Chart(std::vector<std::string> coordinates, std::optional<std::string> time = std::string("t"),
        std::vector<Parameter> parameters = {});

  const std::vector<std::string>& coordinates() const { return coordinates_; }
  const std::optional<std::string>& time() const { return time_; }
  const std::vector<Parameter>& parameters() const { return parameters_; }
  std::size_t dimension() const { return coordinates_.size(); }

  SymbolKind kind(std::string_view symbol) const;
  bool declares(std::string_view symbol) const { return kind(symbol) != SymbolKind::Undeclared; }
  std::optional<double> parameter_value(std::string_view name) const;

  /// Copy with some parameter values replaced. Unknown names throw UndeclaredSymbol.
  Chart with_parameters(const std::map<std::string, double, std::less<>>& values) const;
  /// Same parameters and time, different coordinates.
  Chart with_coordinates(std::vector<std::string> coordinates) const;

  /// Point binding the given coordinates, time (when the chart has one) and
  /// every parameter. Throws ModelError if a parameter has no value.
  Point point(std::span<const double> coordinates, std::optional<double> time = std::nullopt) const;
  /// Point holding only the parameter values that are bound.
  Point parameter_point() const;

 private:
  std::vector<std::string> coordinates_;
  std::optional<std::string> time_;
  std::vector<Parameter> parameters_;
};

/// Parse text against a chart. Throws ParseError or UndeclaredSymbol.
///
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | symbol | func '(' expr ')' | '(' expr ')'
///   func    := exp | ln | sin | cos | sqrt
Expr parse(std::string_view source, const Chart& chart);

/// Throws DomainError or MissingSymbol.
double eval(const Expr& e, const Point& pt);

/// Spatial gradient (one entry per chart coordinate; time is excluded).
std::vector<Expr> grad(const Expr& e, const Chart& chart);

}  // namespace hamreal
