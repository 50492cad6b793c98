#include "hamreal/jlm.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace hamreal {

namespace {

constexpr int kGaussOrder = 16;

struct GaussRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

// Legendre roots by Newton iteration from the Chebyshev guesses.
const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    const int n = kGaussOrder;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[static_cast<std::size_t>(i)] = x;
      r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

template <class F>
double gauss16(const F& f, double a, double b) {
  const auto& r = gauss_rule();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kGaussOrder; ++i)
    sum += r.weights[static_cast<std::size_t>(i)] * f(mid + half * r.nodes[static_cast<std::size_t>(i)]);
  return half * sum;
}

template <class F>
double adaptive(const F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss16(f, a, mid), right = gauss16(f, mid, b);
  const double refined = left + right;
  if (!std::isfinite(refined)) throw PathSingularity("integrand is not finite on the path");
  if (std::abs(refined - whole) <= tol) return refined;
  if (depth >= 40) throw PathSingularity("quadrature did not converge on the path");
  return adaptive(f, a, mid, left, 0.5 * tol, depth + 1) + adaptive(f, mid, b, right, 0.5 * tol, depth + 1);
}

template <class F>
double integrate_segment(const F& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  try {
    return adaptive(f, a, b, gauss16(f, a, b), tol, 0);
  } catch (const DomainError& e) {
    throw PathSingularity(std::string("integrand undefined on the path: ") + e.what());
  }
}

void require_dim(const Chart& chart, std::size_t n, const char* what) {
  if (chart.dimension() != n) throw ChartMismatch(std::string(what) + " needs a " + std::to_string(n) + "D chart");
}

}  // namespace

MultiplierData MultiplierData::make(const Chart& chart, std::vector<Expr> dynamics, Expr multiplier,
                                    std::vector<Expr> auxiliary) {
  if (auxiliary.empty()) auxiliary.assign(chart.dimension(), Expr::constant(0.0));
  if (auxiliary.size() != chart.dimension()) throw ChartMismatch("one auxiliary function per coordinate");
  return {chart, VectorField(Frame::spatial(chart), std::move(dynamics)), std::move(multiplier), std::move(auxiliary)};
}

VectorField MultiplierData::reduced() const {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < dynamics.size(); ++i) comps.push_back(dynamics[i] - auxiliary[i]);
  return VectorField(dynamics.frame(), std::move(comps));
}

Expr jlm_expression(const Chart& chart, const VectorField& X, const Expr& M) {
  Expr out = X.apply(M) + M * X.divergence();
  if (chart.time()) out = diff(M, *chart.time()) + out;
  return out;
}

ResidualStats jlm_residual(const Chart& chart, const VectorField& X, const Expr& M, const SampleSet& pts,
                           double tol) {
  return residual_expr(jlm_expression(chart, X, M), pts, tol);
}

ResidualStats exactness_residual_2d(const MultiplierData& d, const SampleSet& pts, double tol) {
  require_dim(d.chart, 2, "exactness check");
  const VectorField r = d.reduced();
  const auto& c = d.chart.coordinates();
  const Expr e = diff(d.multiplier * r[0], c[0]) + diff(d.multiplier * r[1], c[1]);
  return residual_expr(e, pts, tol);
}

DifferentialForm hamiltonian_one_form_2d(const MultiplierData& d) {
  require_dim(d.chart, 2, "Hamiltonian one-form");
  const VectorField r = d.reduced();
  const Frame f = Frame::spatial(d.chart);
  return DifferentialForm::monomial(f, d.multiplier * r[0], {1}) - DifferentialForm::monomial(f, d.multiplier * r[1], {0});
}

ResidualStats hamiltonian_residual_2d(const MultiplierData& d, const Expr& H, const SampleSet& pts, double tol) {
  const Frame f = Frame::spatial(d.chart);
  return residual_form(hamiltonian_one_form_2d(d), DifferentialForm::differential(f, H), pts, tol);
}

Reconstruction reconstruct_hamiltonian_2d(const MultiplierData& d, const Point& base, const Point& target,
                                          double tol) {
  require_dim(d.chart, 2, "Hamiltonian reconstruction");
  const auto& c = d.chart.coordinates();
  const VectorField r = d.reduced();
  const Expr fx = -(d.multiplier * r[1]);  // dx coefficient
  const Expr fy = d.multiplier * r[0];     // dy coefficient
  const double x0 = base.at(c[0]), y0 = base.at(c[1]);
  const double x1 = target.at(c[0]), y1 = target.at(c[1]);

  auto along_x = [&](double y) {
    return [&, y](double x) {
      Point p = base;
      p.set(c[0], x);
      p.set(c[1], y);
      return eval(fx, p);
    };
  };
  auto along_y = [&](double x) {
    return [&, x](double y) {
      Point p = base;
      p.set(c[0], x);
      p.set(c[1], y);
      return eval(fy, p);
    };
  };
  Reconstruction out;
  out.value = integrate_segment(along_x(y0), x0, x1, tol) + integrate_segment(along_y(x1), y0, y1, tol);
  out.alternate = integrate_segment(along_y(x0), y0, y1, tol) + integrate_segment(along_x(y1), x0, x1, tol);
  return out;
}

MatchingResidual matching_residual_3d(const MultiplierData& d, const Expr& H1, const Expr& H2, const SampleSet& pts,
                                      double tol) {
  require_dim(d.chart, 3, "matching check");
  const Frame fe = Frame::extended(d.chart);
  const Frame fs = Frame::spatial(d.chart);
  const VectorField r = d.reduced();
  const Expr& M = d.multiplier;
  const DifferentialForm lhs = DifferentialForm::monomial(fs, M * r[0], {1, 2}) +
                               DifferentialForm::monomial(fs, M * r[1], {2, 0}) +
                               DifferentialForm::monomial(fs, M * r[2], {0, 1});
  const DifferentialForm pair =
      wedge(DifferentialForm::differential(fe, H1), DifferentialForm::differential(fe, H2));
  MatchingResidual out;
  out.spatial = residual_form(lhs, pair.without(*d.chart.time()), pts, tol);
  const int t_index = static_cast<int>(fe.size()) - 1;
  out.dt_slots = residual_form(pair, DifferentialForm(fe, 2), pts, tol, [t_index](const IndexTuple& idx) {
    return idx.back() == t_index;
  });
  return out;
}

Expr spatial_jacobian(const Chart& chart, const std::vector<Expr>& components) {
  const auto& c = chart.coordinates();
  const std::size_t n = c.size();
  if (components.size() != n) throw ChartMismatch("transform needs one component per coordinate");
  auto J = [&](std::size_t i, std::size_t j) { return diff(components[i], c[j]); };
  if (n == 2) return J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  if (n == 3)
    return J(0, 0) * (J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1)) - J(0, 1) * (J(1, 0) * J(2, 2) - J(1, 2) * J(2, 0)) +
           J(0, 2) * (J(1, 0) * J(2, 1) - J(1, 1) * J(2, 0));
  throw ChartMismatch("transform Jacobian needs a 2D or 3D chart");
}

DifferentialForm shifted_volume(const Chart& chart, const std::vector<Expr>& shifts) {
  const Frame fe = Frame::extended(chart);
  const int t_index = static_cast<int>(chart.dimension());
  DifferentialForm out = DifferentialForm::function(fe, Expr::constant(1.0));
  for (std::size_t i = 0; i < chart.dimension(); ++i) {
    const DifferentialForm factor = DifferentialForm::coordinate(fe, i) -
                                    DifferentialForm::monomial(fe, shifts[i], {t_index});
    out = wedge(out, factor);
  }
  return out;
}

DifferentialForm system_as_form(const Chart& chart, const VectorField& X) {
  return shifted_volume(chart, X.components());
}

ResidualStats transform_residual(const MultiplierData& d, const CoordinateTransform& T, const SampleSet& pts,
                                 double tol) {
  const std::size_t n = d.chart.dimension();
  if (T.components.size() != n || T.target.size() != n)
    throw ChartMismatch("transform must have one component per coordinate");
  const Expr jac = spatial_jacobian(d.chart, T.components);
  for (const auto& p : pts) {
    double v;
    try {
      v = eval(jac, p);
    } catch (const DomainError& e) {
      throw DegenerateStructure(std::string("transform Jacobian undefined at a sample point: ") + e.what());
    }
    if (v == 0.0 || !std::isfinite(v)) throw DegenerateStructure("transform Jacobian is singular at a sample point");
  }
  const Frame fe = Frame::extended(d.chart);
  DifferentialForm pullback = DifferentialForm::function(fe, Expr::constant(1.0));
  for (const auto& comp : T.components) pullback = wedge(pullback, DifferentialForm::differential(fe, comp));
  const DifferentialForm rhs = shifted_volume(d.chart, d.auxiliary).scaled(d.multiplier);
  return residual_form(pullback, rhs, pts, tol);
}

}  // namespace hamreal
