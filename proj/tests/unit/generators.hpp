#pragma once

// Hand-rolled random generators for property tests.

#include <cmath>
#include <vector>

#include "hamreal/expr.hpp"
#include "hamreal/forms.hpp"
#include "hamreal/residual.hpp"

namespace gen {

using hamreal::Expr;
using hamreal::Op;

inline hamreal::Chart test_chart() {
  return hamreal::Chart({"x", "y", "z"}, std::string("t"), {{"a", 1.3}, {"b", 0.7}});
}

class ExprGen {
 public:
  ExprGen(std::uint64_t seed, std::vector<std::string> vars, std::vector<std::string> params = {})
      : rng_(seed), vars_(std::move(vars)), params_(std::move(params)) {}

  /// Random expression, well defined on [0.5, 2]^n. Raw nodes, no folding.
  Expr any(int depth) { return make(depth, false); }
  /// Random expression that is positive on [0.5, 2]^n.
  Expr positive(int depth) { return make(depth, true); }

  /// Random polynomial of the given total degree with small integer coefficients.
  Expr polynomial(int degree) {
    Expr out = Expr::constant(coef());
    for (int term = 0; term < 4; ++term) {
      Expr mono = Expr::constant(coef());
      const int d = 1 + pick(degree);
      for (int k = 0; k < d; ++k) mono = mono * Expr::variable(vars_[pick(static_cast<int>(vars_.size()))]);
      out = out + mono;
    }
    return out;
  }

  double uniform(double lo, double hi) { return rng_.uniform(lo, hi); }
  int pick(int n) { return static_cast<int>(rng_.next() * n) % n; }

 private:
  double coef() { return static_cast<double>(pick(7) - 3); }

  Expr leaf(bool positive) {
    const int k = pick(4);
    if (k == 0) return Expr::constant(std::round(uniform(positive ? 0.5 : -2.0, 2.0) * 4.0) / 4.0);
    if (k == 1 && !params_.empty()) return Expr::parameter(params_[pick(static_cast<int>(params_.size()))]);
    return Expr::variable(vars_[pick(static_cast<int>(vars_.size()))]);
  }

  Expr make(int depth, bool positive) {
    if (depth <= 0 || rng_.next() < 0.2) {
      Expr e = leaf(positive);
      if (positive && e.is_constant() && e.value() <= 0.0) return Expr::constant(1.5);
      return e;
    }
    const int d = depth - 1;
    if (positive) {
      switch (pick(7)) {
        case 0: return Expr::binary(Op::Add, make(d, true), make(d, true));
        case 1: return Expr::binary(Op::Mul, make(d, true), make(d, true));
        case 2: return Expr::binary(Op::Div, make(d, true), make(d, true));
        case 3: return Expr::unary(Op::Exp, Expr::unary(Op::Sin, make(d, false)));
        case 4: return Expr::unary(Op::Sqrt, make(d, true));
        case 5: return Expr::binary(Op::Pow, make(d, true), Expr::constant(static_cast<double>(pick(5) - 2)));
        default: return Expr::binary(Op::Pow, make(d, true), Expr::unary(Op::Cos, make(d, false)));
      }
    }
    switch (pick(8)) {
      case 0: return Expr::binary(Op::Add, make(d, false), make(d, false));
      case 1: return Expr::binary(Op::Sub, make(d, false), make(d, false));
      case 2: return Expr::binary(Op::Mul, make(d, false), make(d, false));
      case 3: return Expr::binary(Op::Div, make(d, false), make(d, true));
      case 4: return Expr::unary(Op::Neg, make(d, false));
      case 5: return Expr::unary(pick(2) ? Op::Sin : Op::Cos, make(d, false));
      case 6: return Expr::unary(Op::Ln, make(d, true));
      default: return make(d, true);
    }
  }

  hamreal::UniformRng rng_;
  std::vector<std::string> vars_;
  std::vector<std::string> params_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace gen
