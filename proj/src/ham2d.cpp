#include "hamreal/ham2d.hpp"

#include <cmath>

namespace hamreal {

namespace {

void require_2d(const Chart& chart) {
  if (chart.dimension() != 2) throw ChartMismatch("planar structure needs a 2D chart");
}

}  // namespace

void require_nonvanishing(const Expr& f, const SampleSet& pts, std::string_view what) {
  for (const auto& p : pts) {
    double v;
    try {
      v = eval(f, p);
    } catch (const DomainError& e) {
      throw DegenerateStructure(std::string(what) + " undefined at a sample point: " + e.what());
    }
    if (v == 0.0 || !std::isfinite(v)) throw DegenerateStructure(std::string(what) + " vanishes at a sample point");
  }
}

SymplecticData2D SymplecticData2D::make(const Chart& chart, const Expr& multiplier) {
  require_2d(chart);
  const Frame f = Frame::spatial(chart);
  return {chart, multiplier, DifferentialForm::monomial(f, multiplier, {0, 1})};
}

VectorField hamiltonian_field_2d(const Chart& chart, const Expr& H, const Expr& M) {
  require_2d(chart);
  const auto& c = chart.coordinates();
  const Expr hx = diff(H, c[0]), hy = diff(H, c[1]);
  return VectorField(Frame::spatial(chart), {hy / M, -hx / M});
}

ConformalData2D ConformalData2D::make(const Chart& chart, DifferentialForm omega, DifferentialForm theta,
                                      VectorField liouville, double a, const SampleSet& pts, double tol) {
  require_2d(chart);
  const Frame f = Frame::spatial(chart);
  if (!(omega.frame() == f) || !(theta.frame() == f) || !(liouville.frame() == f))
    throw ChartMismatch("conformal data must live on the spatial frame");
  if (omega.degree() != 2 || theta.degree() != 1) throw ChartMismatch("conformal data needs a 2-form and a 1-form");
  require_nonvanishing(omega.coefficient({0, 1}), pts, "symplectic form");
  const auto exact = residual_form(omega, -ext_d(theta), pts, tol);
  if (!exact.pass) throw DegenerateStructure("omega != -d(theta) at sample points");
  const auto liou = residual_form(interior(liouville, omega), -theta, pts, tol);
  if (!liou.pass) throw DegenerateStructure("i_Z omega != -theta at sample points");
  return {chart, std::move(omega), std::move(theta), std::move(liouville), a};
}

VectorField conformal_field_2d(const Expr& H, double a, const ConformalData2D& data) {
  const VectorField xh = hamiltonian_field_2d(data.chart, H, data.density());
  return xh + data.liouville.scaled(Expr::constant(a));
}

CosymplecticData CosymplecticData::darboux(const Chart& chart) {
  require_2d(chart);
  const Frame f = Frame::extended(chart);
  return {chart, f, DifferentialForm::coordinate(f, 2), DifferentialForm::monomial(f, Expr::constant(1.0), {0, 1}),
          VectorField::coordinate(f, *chart.time())};
}

CosymplecticData CosymplecticData::make(const Chart& chart, DifferentialForm eta, DifferentialForm omega,
                                        const SampleSet& pts) {
  require_2d(chart);
  const Frame f = Frame::extended(chart);
  if (!(eta.frame() == f) || !(omega.frame() == f)) throw ChartMismatch("cosymplectic data must live on (x, y, t)");
  if (eta.degree() != 1 || omega.degree() != 2) throw ChartMismatch("cosymplectic data needs a 1-form and a 2-form");
  const Expr volume = wedge(eta, omega).coefficient({0, 1, 2});
  require_nonvanishing(volume, pts, "eta^omega");
  // The kernel of an antisymmetric 3x3 matrix is spanned by its dual vector.
  const std::vector<Expr> k{omega.coefficient({1, 2}), -omega.coefficient({0, 2}), omega.coefficient({0, 1})};
  Expr norm = Expr::constant(0.0);
  for (int i = 0; i < 3; ++i) norm = norm + eta.coefficient({i}) * k[static_cast<std::size_t>(i)];
  VectorField reeb(f, {k[0] / norm, k[1] / norm, k[2] / norm});
  return {chart, f, std::move(eta), std::move(omega), std::move(reeb)};
}

VectorField evolution_field_cosym(const Expr& H, const CosymplecticData& data) {
  const auto& c = data.chart.coordinates();
  return VectorField(data.frame, {diff(H, c[1]), -diff(H, c[0]), Expr::constant(1.0)});
}

DifferentialForm chi_map(const VectorField& X, const CosymplecticData& data) {
  const Expr eta_x = interior(X, data.eta).coefficient({});
  return interior(X, data.omega) + eta_x * data.eta;
}

VectorField gradient_field_cosym(const Expr& H, const CosymplecticData& data) {
  const auto& c = data.chart.coordinates();
  return VectorField(data.frame, {diff(H, c[1]), -diff(H, c[0]), data.reeb_derivative(H)});
}

}  // namespace hamreal
