#include "hamreal/nambu3d.hpp"

#include <algorithm>
#include <cmath>

namespace hamreal {

namespace {

void require_3d(const Chart& chart) {
  if (chart.dimension() != 3) throw ChartMismatch("Nambu structure needs a 3D chart");
}

}  // namespace

DifferentialForm NambuData::volume() const {
  require_3d(chart);
  return DifferentialForm::monomial(frame(), multiplier, {0, 1, 2});
}

Expr partial_bracket(const Expr& f1, const Expr& f2, std::string_view a, std::string_view b) {
  return diff(f1, a) * diff(f2, b) - diff(f1, b) * diff(f2, a);
}

Expr nambu_bracket(const Expr& f1, const Expr& f2, const Expr& f3, const NambuData& d) {
  require_3d(d.chart);
  return dot(grad(f1, d.chart), cross(grad(f2, d.chart), grad(f3, d.chart))) / d.multiplier;
}

VectorField nambu_field(const HamiltonianPair& pair, const NambuData& d) {
  require_3d(d.chart);
  auto comps = cross(grad(pair.h1, d.chart), grad(pair.h2, d.chart));
  for (auto& c : comps) c = c / d.multiplier;
  return VectorField(d.frame(), std::move(comps));
}

VectorField poisson_field_3d(const VectorField& J, const Expr& H) {
  if (J.size() != 3) throw ChartMismatch("Poisson vector needs 3 components");
  std::vector<Expr> gh;
  for (std::size_t i = 0; i < 3; ++i) gh.push_back(diff(H, J.frame()[i]));
  return VectorField(J.frame(), cross(J.components(), gh));
}

Expr jacobi_expression(const VectorField& J) {
  if (J.size() != 3) throw ChartMismatch("Poisson vector needs 3 components");
  const Frame& f = J.frame();
  const std::vector<Expr> curl{diff(J[2], f[1]) - diff(J[1], f[2]), diff(J[0], f[2]) - diff(J[2], f[0]),
                               diff(J[1], f[0]) - diff(J[0], f[1])};
  return dot(J.components(), curl);
}

ResidualStats jacobi_residual(const VectorField& J, const SampleSet& pts, double tol) {
  return residual_expr(jacobi_expression(J), pts, tol);
}

Expr fundamental_identity_expression(const NambuData& d, const Expr& f1, const Expr& f2, const Expr& h1,
                                     const Expr& h2, const Expr& h3) {
  auto br = [&](const Expr& a, const Expr& b, const Expr& c) { return nambu_bracket(a, b, c, d); };
  const Expr lhs = br(f1, f2, br(h1, h2, h3));
  const Expr rhs = br(br(f1, f2, h1), h2, h3) + br(h1, br(f1, f2, h2), h3) + br(h1, h2, br(f1, f2, h3));
  return lhs - rhs;
}

ResidualStats fundamental_identity_residual(const NambuData& d, const Expr& f1, const Expr& f2, const Expr& h1,
                                            const Expr& h2, const Expr& h3, const SampleSet& pts, double tol) {
  return residual_expr(fundamental_identity_expression(d, f1, f2, h1, h2, h3), pts, tol);
}

VectorField sharp_map(const DifferentialForm& alpha, const NambuData& d) {
  require_3d(d.chart);
  if (alpha.degree() != 2) throw ChartMismatch("sharp map takes a 2-form");
  const DifferentialForm a = alpha.frame() == d.frame() ? alpha : alpha.without(d.chart.time().value_or(""));
  if (!(a.frame() == d.frame())) throw ChartMismatch("sharp map: form lives on another frame");
  const Expr& M = d.multiplier;
  return VectorField(d.frame(),
                     {a.coefficient({1, 2}) / M, -a.coefficient({0, 2}) / M, a.coefficient({0, 1}) / M});
}

VectorField evolution_field_nambu(const HamiltonianPair& pair, const NambuData& d) {
  const VectorField X = nambu_field(pair, d);
  const Frame fe = Frame::extended(d.chart);
  return VectorField(fe, {X[0], X[1], X[2], Expr::constant(1.0)});
}

DifferentialForm mu_H(const Chart& chart, const HamiltonianPair& pair) {
  require_3d(chart);
  const Frame fe = Frame::extended(chart);
  const auto mu = DifferentialForm::monomial(fe, Expr::constant(1.0), {0, 1, 2});
  const auto dh = wedge(DifferentialForm::differential(fe, pair.h1), DifferentialForm::differential(fe, pair.h2));
  return mu - wedge(dh, DifferentialForm::coordinate(fe, 3));
}

DifferentialForm beta_product(const Chart& chart, const HamiltonianPair& pair) {
  require_3d(chart);
  const auto& c = chart.coordinates();
  const Frame fe = Frame::extended(chart);
  const std::vector<Expr> coeff{partial_bracket(pair.h1, pair.h2, c[1], c[2]),
                                partial_bracket(pair.h1, pair.h2, c[2], c[0]),
                                partial_bracket(pair.h1, pair.h2, c[0], c[1])};
  DifferentialForm out = DifferentialForm::function(fe, Expr::constant(1.0));
  for (std::size_t i = 0; i < 3; ++i)
    out = wedge(out, DifferentialForm::coordinate(fe, i) - DifferentialForm::monomial(fe, coeff[i], {3}));
  return out;
}

MuHResidual mu_H_residual(const Chart& chart, const HamiltonianPair& pair, const SampleSet& pts, double tol) {
  const NambuData d{chart, Expr::constant(1.0)};
  const Frame fe = Frame::extended(chart);
  const auto muh = mu_H(chart, pair);
  const VectorField E = evolution_field_nambu(pair, d);
  const VectorField X = nambu_field(pair, d).embedded(fe);
  const auto eta = DifferentialForm::coordinate(fe, 3);
  MuHResidual out;
  out.decomposition = residual_form(muh, beta_product(chart, pair), pts, tol);
  out.annihilation = residual_form(interior(E, muh), DifferentialForm(fe, 2), pts, tol);
  const Expr eta_e = interior(E, eta).coefficient({});
  const Expr eta_x = interior(X, eta).coefficient({});
  out.eta = residual_scalar(
      [&](const Point& p) { return std::max(std::abs(eval(eta_e, p) - 1.0), std::abs(eval(eta_x, p))); }, pts, tol);
  return out;
}

DifferentialForm zeta_form(const Chart& chart, const ConformalParams& cp) {
  require_3d(chart);
  const Frame f = Frame::spatial(chart);
  const auto& c = chart.coordinates();
  return DifferentialForm::monomial(f, cp.a1 * Expr::variable(c[0]), {1, 2}) +
         DifferentialForm::monomial(f, cp.a2 * Expr::variable(c[1]), {2, 0}) +
         DifferentialForm::monomial(f, cp.a3 * Expr::variable(c[2]), {0, 1});
}

VectorField conformal_nambu_field(const Chart& chart, const Expr& f1, const Expr& f2, const ConformalParams& cp) {
  require_3d(chart);
  const auto& c = chart.coordinates();
  return VectorField(Frame::spatial(chart),
                     {partial_bracket(f1, f2, c[1], c[2]) + cp.a1 * Expr::variable(c[0]),
                      partial_bracket(f1, f2, c[2], c[0]) + cp.a2 * Expr::variable(c[1]),
                      partial_bracket(f1, f2, c[0], c[1]) + cp.a3 * Expr::variable(c[2])});
}

}  // namespace hamreal
