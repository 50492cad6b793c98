#include <cmath>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "hamreal/integrate.hpp"
#include "hamreal/models.hpp"

using namespace hamreal;

namespace {

constexpr double kTwoPi = 6.283185307179586;

IntegrationOptions rk4(double dt) {
  IntegrationOptions o;
  o.method = Method::rk4;
  o.dt = dt;
  return o;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("harmonic round trip") {
  const auto& h = get_model("harmonic");
  const auto tr = integrate(h.field(), h.chart, {1, 0}, 0, kTwoPi);
  CHECK(max_diff(tr.states.back(), {1.0, 0.0}) <= 1e-7);
  // dense output against the closed form (cos t, -sin t)
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i)
    worst = std::max(worst, max_diff(tr.states[i], {std::cos(tr.times[i]), -std::sin(tr.times[i])}));
  CHECK(worst <= 1e-8);
  CHECK(monitor_first_integral(tr, *h.hamiltonian).stats.max_abs <= 1e-8);
}

TEST_CASE("grid layout") {
  const auto& h = get_model("harmonic");
  const auto tr = integrate(h.field(), h.chart, {1, 0}, 0, 1.05, rk4(0.1));
  CHECK(tr.size() == 12);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == 1.05);
  CHECK(tr.times[10] == doctest::Approx(1.0));
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
  CHECK(tr.states.size() == tr.times.size());
  for (const auto& s : tr.states) CHECK(s.size() == 2);
  const auto exact = integrate(h.field(), h.chart, {1, 0}, 0, 1.0, rk4(0.1));
  CHECK(exact.size() == 11);
}

TEST_CASE("zero field is constant") {
  const Chart ch({"x", "y", "z"});
  const auto tr = integrate(VectorField::zero(Frame::spatial(ch)), ch, {1, 2, 3}, 0, 2, {});
  for (const auto& s : tr.states) CHECK(s == std::vector<double>{1, 2, 3});
  CHECK(monitor_first_integral(tr, Expr::constant(4.0)).stats.max_abs == 0.0);
}

TEST_CASE("rk4 converges at fourth order") {
  const auto& h = get_model("harmonic");
  IntegrationOptions ref;
  ref.rtol = 1e-12;
  ref.atol = 1e-14;
  const auto reference = integrate(h.field(), h.chart, {1, 0}, 0, 2, ref).states.back();
  double prev = 0.0;
  for (double dt : {0.2, 0.1, 0.05}) {
    const double err = max_diff(integrate(h.field(), h.chart, {1, 0}, 0, 2, rk4(dt)).states.back(), reference);
    if (prev > 0.0) CHECK(prev / err >= 12.0);
    prev = err;
  }
}

TEST_CASE("lu: rk4 and rk45 agree") {
  const auto& lu = get_model("lu");
  const auto a = integrate(lu.field(), lu.chart, {1, 1, 1}, 0, 0.1, rk4(1e-4));
  IntegrationOptions o;
  o.dt = 1e-3;
  const auto b = integrate(lu.field(), lu.chart, {1, 1, 1}, 0, 0.1, o);
  CHECK(max_diff(a.states.back(), b.states.back()) <= 1e-6);
}

TEST_CASE("first integrals") {
  const auto& hp = get_model("host_parasite_reduced");
  const auto tr = integrate(hp.field(), hp.chart, {1, 2}, 0, 1, {});
  CHECK(monitor_first_integral(tr, *hp.hamiltonian).stats.max_abs <= 1e-6);

  // Nambu pair members of the 3D models along the reduced flows (t frozen at 0)
  for (const char* name : {"lu", "qi"}) {
    const auto& m = get_model(name);
    const auto& c = *m.conformal3d;
    const NambuData nd{m.chart, Expr::constant(1.0)};
    const auto X = nambu_field({c.f1, c.f2}, nd);
    const auto t = integrate(X, m.chart, {1, 1, 1}, 0, 1, {});
    CHECK_MESSAGE(monitor_first_integral(t, c.f1).stats.max_abs <= 1e-6, name);
    CHECK_MESSAGE(monitor_first_integral(t, c.f2).stats.max_abs <= 1e-6, name);
  }
}

TEST_CASE("evolution consistency") {
  SUBCASE("autonomous H reduces to conservation") {
    const auto& h = get_model("harmonic");
    const auto tr = integrate(h.field(), h.chart, {1, 0}, 0, 1, {});
    CHECK(evolution_consistency(tr, *h.hamiltonian).stats.max_abs <= 1e-6);
  }
  SUBCASE("standard-coordinate flows") {
    for (auto [name, which] : {std::pair{"lu", 1}, std::pair{"qi", 2}}) {
      const auto& m = get_model(name);
      const auto& t = *m.transform;
      IntegrationOptions o;
      o.dt = 1e-4;
      o.max_step = o.dt;
      const auto tr = integrate(VectorField(Frame::spatial(t.target_chart), t.flow), t.target_chart, {1, 1, 1}, 0,
                                0.5, o);
      const Expr& H = which == 1 ? t.pair->h1 : t.pair->h2;
      CHECK_MESSAGE(evolution_consistency(tr, H).stats.max_abs <= 1e-5, name);
    }
  }
  SUBCASE("short grids are rejected") {
    const auto& h = get_model("harmonic");
    const auto tr = integrate(h.field(), h.chart, {1, 0}, 0, 0.3, rk4(0.1));
    CHECK_THROWS_AS(evolution_consistency(tr, *h.hamiltonian), Error);
  }
}

TEST_CASE("variational equation and conformal factor") {
  const auto& lu = get_model("lu");
  const auto cp = lu.conformal_params();
  const auto X = conformal_nambu_field(lu.chart, lu.conformal3d->f1, lu.conformal3d->f2, cp);
  IntegrationOptions o;
  o.variational = true;
  const auto tr = integrate(X, lu.chart, {1, 1, 1}, 0, 0.1, o);
  CHECK(tr.jacobians.size() == tr.size());
  CHECK(log_jacobian(tr).back() == doctest::Approx(-19.0 * 0.1).epsilon(1e-6));
  const auto defect = conformal_volume_defect(tr, Expr::constant(1.0), cp.total());
  for (double d : defect) CHECK(std::abs(d) <= 1e-4);
  CHECK_THROWS_AS(log_jacobian(integrate(X, lu.chart, {1, 1, 1}, 0, 0.1, {})), Error);

  const auto sp = sample_points(lu.chart, lu.domain, 100, 1);
  CHECK(conformal_factor_check(X, Expr::constant(1.0), -19.0, sp).max_abs <= 1e-12);
  const auto& qi = get_model("qi");
  const auto Xq = conformal_nambu_field(qi.chart, qi.conformal3d->f1, qi.conformal3d->f2, qi.conformal_params());
  CHECK(conformal_factor_check(Xq, Expr::constant(1.0), -3.0, sp).max_abs <= 1e-12);
  CHECK(conformal_factor_check(nambu_field(*lu.pair, {lu.chart, lu.multiplier}), lu.multiplier, 0.0, sp).max_abs <=
        1e-10);

  // 2D: host-parasite area form 1/(x y^2), factor -c
  const auto& hp = get_model("host_parasite");
  const auto th = integrate(hp.field(), hp.chart, {1.2, 0.8}, 0, 1, o);
  for (double d : conformal_volume_defect(th, hp.conformal2d->omega, hp.conformal_factor())) CHECK(std::abs(d) <= 1e-7);
  // The JLM multiplier makes M det(D phi) constant.
  for (double d : conformal_volume_defect(th, hp.multiplier, 0.0)) CHECK(std::abs(d) <= 1e-7);
}

TEST_CASE("integration errors") {
  const Chart ch({"x"}, std::nullopt);
  // x' = x^2 blows up at t = 1 from x = 1
  const VectorField X(Frame::spatial(ch), {parse("x^2", ch)});
  try {
    integrate(X, ch, {1.0}, 0, 2, {});
    FAIL("expected an integration error");
  } catch (const IntegrationError& e) {
    CHECK(e.time() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(e.state().size() == 1);
  }
  // x^(3/2) = 1 - 3t/2 reaches 0 at t = 2/3, after which sqrt is undefined
  const VectorField L(Frame::spatial(ch), {parse("-1/sqrt(x)", ch)});
  CHECK_THROWS_AS(integrate(L, ch, {1.0}, 0, 2, rk4(0.01)), IntegrationError);
  CHECK_THROWS_AS(integrate(L, ch, {1.0, 2.0}, 0, 1, {}), Error);
  CHECK_THROWS_AS(integrate(L, ch, {1.0}, 1, 0, {}), Error);
  CHECK_THROWS_AS(parse_method("euler"), Error);
}

TEST_CASE("csv output") {
  const auto& h = get_model("harmonic");
  auto tr = integrate(h.field(), h.chart, {1, 0}, 0, 0.2, rk4(0.1));
  tr.add_monitor("drift_H", monitor_first_integral(tr, *h.hamiltonian).series);
  std::ostringstream out;
  write_csv(tr, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,y,drift_H");
  std::getline(in, line);
  CHECK(line == "0,1,0,0");
  std::getline(in, line);
  CHECK(line.rfind("0.10000000000000001,", 0) == 0);
  CHECK_THROWS_AS(tr.add_monitor("short", {1.0}), Error);
}

TEST_CASE("property: Hamiltonian flows conserve H") {
  gen::ExprGen g(71, {"x", "y"});
  const Chart ch({"x", "y"}, std::nullopt);
  for (int i = 0; i < 10; ++i) {
    const Expr H = g.polynomial(2);
    const VectorField X(Frame::spatial(ch), {diff(H, "y"), -diff(H, "x")});
    IntegrationOptions o;
    o.dt = 0.05;
    try {
      const auto tr = integrate(X, ch, {g.uniform(0.5, 1), g.uniform(0.5, 1)}, 0, 0.5, o);
      CHECK(monitor_first_integral(tr, H).stats.max_abs <= 1e-7 * (1 + std::abs(eval(H, tr.point(0)))));
    } catch (const IntegrationError&) {
      // quadratic fields can blow up in finite time; nothing to check then
    }
  }
}
