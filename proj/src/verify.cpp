#include "hamreal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hamreal/ham2d.hpp"
#include "json.hpp"

namespace hamreal {

namespace {

using PointFn = std::function<double(const Point&)>;

class Suite {
 public:
  Suite(const SampleSet& pts, double tol) : pts_(pts), tol_(tol) {}

  void add(std::string name, std::string anchor, ResidualStats stats) {
    checks_.push_back({std::move(name), std::move(anchor), std::move(stats)});
  }
  void scalar(std::string name, std::string anchor, const PointFn& f, const SampleSet* pts = nullptr) {
    add(std::move(name), std::move(anchor), residual_scalar(f, pts ? *pts : pts_, tol_));
  }
  void form(std::string name, std::string anchor, const DifferentialForm& a, const DifferentialForm& b,
            const SampleSet* pts = nullptr) {
    add(std::move(name), std::move(anchor), residual_form(a, b, pts ? *pts : pts_, tol_));
  }
  void field(std::string name, std::string anchor, const VectorField& a, const VectorField& b) {
    add(std::move(name), std::move(anchor), residual_field(a, b, pts_, tol_));
  }

  double tol() const { return tol_; }
  const SampleSet& pts() const { return pts_; }
  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  const SampleSet& pts_;
  double tol_;
  std::vector<CheckResult> checks_;
};

double max_gap(const std::vector<Expr>& a, const std::vector<double>& b, const Point& p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(eval(a[i], p) - b[i]);
    if (!(d <= worst)) worst = d;
  }
  return worst;
}

Point image_point(const ModelSpec& spec, const Point& p) {
  const auto& t = *spec.transform;
  std::vector<double> coords;
  for (const auto& c : t.map.components) coords.push_back(eval(c, p));
  std::optional<double> time;
  if (spec.chart.time()) time = p.at(*spec.chart.time());
  return t.target_chart.point(coords, time);
}

std::vector<Expr> pushforward_exprs(const ModelSpec& spec) {
  const VectorField X = spec.field();
  std::vector<Expr> out;
  for (const auto& c : spec.transform->map.components) {
    Expr e = X.apply(c);
    if (spec.chart.time()) e = diff(c, *spec.chart.time()) + e;
    out.push_back(e);
  }
  return out;
}

// Residual between the pushed-forward model flow and a field given in target coordinates.
PointFn flow_gap(const ModelSpec& spec, std::vector<Expr> target_field) {
  auto push = std::make_shared<std::vector<Expr>>(pushforward_exprs(spec));
  auto field = std::make_shared<std::vector<Expr>>(std::move(target_field));
  return [&spec, push, field](const Point& p) {
    const Point q = image_point(spec, p);
    std::vector<double> pushed;
    for (const auto& e : *push) pushed.push_back(eval(e, p));
    return max_gap(*field, pushed, q);
  };
}

void planar_checks(const ModelSpec& spec, Suite& s) {
  const MultiplierData md = spec.multiplier_data();
  const Frame fs = Frame::spatial(spec.chart);
  s.add("jlm.exactness", "d/dx[M(f - psi)] + d/dy[M(g - phi)] = 0", exactness_residual_2d(md, s.pts(), s.tol()));

  if (spec.hamiltonian) {
    const Expr& H = *spec.hamiltonian;
    s.add("jlm.hamiltonian_one_form", "M(f - psi) dy - M(g - phi) dx = dH",
          hamiltonian_residual_2d(md, H, s.pts(), s.tol()));
    const auto omega = SymplecticData2D::make(spec.chart, spec.multiplier).omega;
    s.form("symplectic.invariance", "L_X (M dx^dy) = 0 for the reduced field", lie_derivative(md.reduced(), omega),
           DifferentialForm(fs, 2));

    if (spec.chart.time()) {
      const auto cs = CosymplecticData::darboux(spec.chart);
      const auto E = evolution_field_cosym(H, cs);
      const Frame& fe = cs.frame;
      const auto rhs = DifferentialForm::differential(fe, H) - cs.reeb_derivative(H) * cs.eta;
      s.form("cosymplectic.evolution_omega", "i_E Omega = dH - xi(H) eta", interior(E, cs.omega), rhs);
      const Expr eta_e = interior(E, cs.eta).coefficient({});
      s.scalar("cosymplectic.evolution_eta", "i_E eta = 1", [eta_e](const Point& p) { return eval(eta_e, p) - 1.0; });
      const auto G = gradient_field_cosym(H, cs);
      const Expr eta_g = interior(G, cs.eta).coefficient({}) - cs.reeb_derivative(H);
      const auto iG = interior(G, cs.omega);
      s.scalar("cosymplectic.gradient", "i_grad eta = xi(H), i_grad Omega = dH - xi(H) eta",
               [eta_g, iG, rhs](const Point& p) { return std::max(std::abs(eval(eta_g, p)), form_difference(iG, rhs, p)); });
    }
  }

  if (spec.transform) {
    const auto& t = *spec.transform;
    s.add("canonical.transform", "dq^dp = M (dx - psi dt)^(dy - phi dt)",
          transform_residual(md, t.map, s.pts(), s.tol()));
    if (t.hamiltonian && spec.hamiltonian) {
      const Expr Hc = *t.hamiltonian;
      const Expr H = *spec.hamiltonian;
      s.scalar("canonical.hamiltonian_pullback", "H(q(x,y,t), p(x,y,t), t) = H(x, y, t)",
               [&spec, Hc, H](const Point& p) { return eval(Hc, image_point(spec, p)) - eval(H, p); });
      const auto& tc = t.target_chart.coordinates();
      s.scalar("canonical.hamilton_equations", "dq/dt = dH/dp, dp/dt = -dH/dq",
               flow_gap(spec, {diff(Hc, tc[1]), -diff(Hc, tc[0])}));
    }
    if (!t.flow.empty()) s.scalar("canonical.flow", "pushed-forward flow = stated flow", flow_gap(spec, t.flow));
  }

  if (spec.conformal2d) {
    const auto& c = *spec.conformal2d;
    const auto omega = DifferentialForm::monomial(fs, c.omega, {0, 1});
    const DifferentialForm theta = DifferentialForm::monomial(fs, c.theta[0], {0}) +
                                   DifferentialForm::monomial(fs, c.theta[1], {1});
    const VectorField Z(fs, c.liouville);
    const double a = spec.conformal_factor();
    s.form("conformal.potential", "Omega = -d theta", omega, -ext_d(theta));
    s.form("conformal.liouville", "i_Z Omega = -theta", interior(Z, omega), -theta);
    // Built without the validating constructor so that failures show up as residuals.
    const ConformalData2D data{spec.chart, omega, theta, Z, a};
    const VectorField gamma = conformal_field_2d(c.hamiltonian, a, data);
    s.form("conformal.hamilton_equations", "i_Gamma Omega = dH - a theta", interior(gamma, omega),
           DifferentialForm::differential(fs, c.hamiltonian) - Expr::constant(a) * theta);
    s.field("conformal.generates_dynamics", "X_H + a Z = model field", gamma, spec.field());
    s.form("conformal.lie_scaling", "L_Gamma Omega = a Omega", lie_derivative(gamma, omega),
           Expr::constant(a) * omega);
    const Expr div = spec.field().divergence(c.omega) - a;
    s.scalar("conformal.divergence", "div_Omega X = a", [div](const Point& p) { return eval(div, p); });
  }
}

void spatial_checks(const ModelSpec& spec, Suite& s) {
  const MultiplierData md = spec.multiplier_data();
  const Frame fs = Frame::spatial(spec.chart);
  if (spec.pair) {
    const auto& pair = *spec.pair;
    const auto m = matching_residual_3d(md, pair.h1, pair.h2, s.pts(), s.tol());
    s.add("jlm.matching", "M[(f-psi) dy^dz + (g-phi) dz^dx + (h-varphi) dx^dy] = dH1^dH2 (spatial part)", m.spatial);
    const VectorField red = md.reduced();
    s.add("nambu.conservation_H1", "X(H1) = 0 for the reduced field", residual_expr(red.apply(pair.h1), s.pts(), s.tol()));
    s.add("nambu.conservation_H2", "X(H2) = 0 for the reduced field", residual_expr(red.apply(pair.h2), s.pts(), s.tol()));
    const VectorField J1(fs, grad(pair.h1, spec.chart));
    const VectorField J2(fs, grad(pair.h2, spec.chart));
    const VectorField j1 = J1.scaled(1.0 / spec.multiplier), j2 = J2.scaled(1.0 / spec.multiplier);
    s.add("nambu.jacobi_J1", "J . curl J = 0 for J = (1/M) grad H1", jacobi_residual(j1, s.pts(), s.tol()));
    s.add("nambu.jacobi_J2", "J . curl J = 0 for J = (1/M) grad H2", jacobi_residual(j2, s.pts(), s.tol()));
    s.add("nambu.jacobi_pencil", "J . curl J = 0 for J = (1/M) grad (H1 + H2)",
          jacobi_residual(j1 + j2, s.pts(), s.tol()));
    const Expr vol = red.divergence(spec.multiplier);
    s.scalar("nambu.volume_preservation", "div(M X) = 0 for the reduced field", [vol](const Point& p) { return eval(vol, p); });
  }

  if (spec.transform) {
    const auto& t = *spec.transform;
    s.add("standard.transform", "du^dv^dw = M (dx - psi dt)^(dy - phi dt)^(dz - varphi dt)",
          transform_residual(md, t.map, s.pts(), s.tol()));
    if (!t.flow.empty()) s.scalar("standard.flow", "pushed-forward flow = stated flow", flow_gap(spec, t.flow));
    if (t.pair && spec.pair) {
      const HamiltonianPair sp = *t.pair, op = *spec.pair;
      s.scalar("standard.pair_pullback", "H_i(u(x,t), v(x,t), w(x,t), t) = H_i(x, y, z, t)",
               [&spec, sp, op](const Point& p) {
                 const Point q = image_point(spec, p);
                 return std::max(std::abs(eval(sp.h1, q) - eval(op.h1, p)), std::abs(eval(sp.h2, q) - eval(op.h2, p)));
               });
      const NambuData nd{t.target_chart, Expr::constant(1.0)};
      const VectorField X = nambu_field(sp, nd);
      s.scalar("standard.flow_matches_evolution", "pushed-forward flow = X_{H1,H2} in standard coordinates",
               flow_gap(spec, X.components()));

      const auto tpts = std::make_shared<SampleSet>(transform_points(spec, s.pts()));
      const Frame fe = Frame::extended(t.target_chart);
      const auto E = evolution_field_nambu(sp, nd);
      const auto eta = DifferentialForm::coordinate(fe, 3);
      const auto mu = DifferentialForm::monomial(fe, Expr::constant(1.0), {0, 1, 2});
      const auto d1 = DifferentialForm::differential(fe, sp.h1), d2 = DifferentialForm::differential(fe, sp.h2);
      const VectorField nu = VectorField::coordinate(fe, *t.target_chart.time());
      const auto rhs = wedge(d1, d2) - wedge(nu.apply(sp.h1) * eta, d2) - wedge(d1, nu.apply(sp.h2) * eta);
      s.form("nambu.evolution_mu", "i_E mu = dH1^dH2 - nu(H1) eta^dH2 - dH1^nu(H2) eta", interior(E, mu), rhs,
             tpts.get());
      const auto mh = mu_H_residual(t.target_chart, sp, *tpts, s.tol());
      s.add("nambu.evolution_eta", "i_E eta = 1, i_X eta = 0", mh.eta);
      s.add("nambu.mu_H_decomposition", "mu - dH1^dH2^dt = beta1^beta2^beta3", mh.decomposition);
      s.add("nambu.mu_H_annihilation", "i_E mu_H = 0", mh.annihilation);
    }
  }

  if (spec.conformal3d) {
    const auto& c = *spec.conformal3d;
    const ConformalParams cp = spec.conformal_params();
    const VectorField X = conformal_nambu_field(spec.chart, c.f1, c.f2, cp);
    s.field("conformal.generates_dynamics", "X_{F1,F2} + (a1 x, a2 y, a3 z) = model field", X, spec.field());
    const auto mu = DifferentialForm::monomial(fs, Expr::constant(1.0), {0, 1, 2});
    const auto rhs = wedge(DifferentialForm::differential(fs, c.f1), DifferentialForm::differential(fs, c.f2)) +
                     zeta_form(spec.chart, cp);
    s.form("conformal.nambu_identity", "i_X mu = dF1^dF2 + zeta", interior(X, mu), rhs);
    s.form("conformal.lie_scaling", "L_X mu = (a1 + a2 + a3) mu", lie_derivative(X, mu),
           Expr::constant(cp.total()) * mu);
    const Expr div = X.divergence() - cp.total();
    s.scalar("conformal.divergence", "div X = a1 + a2 + a3", [div](const Point& p) { return eval(div, p); });
  }
}

}  // namespace

SampleSet transform_points(const ModelSpec& spec, const SampleSet& pts) {
  if (!spec.transform) throw ModelError("model '" + spec.name + "' has no coordinate transform");
  SampleSet out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(image_point(spec, p));
  return out;
}

std::vector<double> pushed_forward(const ModelSpec& spec, const Point& pt) {
  if (!spec.transform) throw ModelError("model '" + spec.name + "' has no coordinate transform");
  std::vector<double> out;
  for (const auto& e : pushforward_exprs(spec)) out.push_back(eval(e, pt));
  return out;
}

Report verify_model(const ModelSpec& spec, const VerifyOptions& opts) {
  Report r;
  r.model = spec.name;
  r.seed = opts.seed;
  r.tol = opts.tol;
  for (const auto& p : spec.chart.parameters()) r.params.emplace_back(p.name, p.value.value_or(1.0));
  try {
    const SampleSet pts = sample_points(spec.chart, spec.domain, opts.samples, opts.seed);
    Suite s(pts, opts.tol);
    const Expr M = spec.multiplier;
    s.scalar("jlm.multiplier_nonvanishing", "M != 0 on the sample domain", [M](const Point& p) {
      const double v = eval(M, p);
      return v != 0.0 && std::isfinite(v) ? 0.0 : std::numeric_limits<double>::infinity();
    });
    s.add("jlm.multiplier_pde", "dM/dt + X(M) + M div X = 0", jlm_residual(spec.chart, spec.field(), M, pts, opts.tol));
    if (spec.dimension == 2)
      planar_checks(spec, s);
    else
      spatial_checks(spec, s);
    r.checks = s.take();
  } catch (const Error& e) {
    r.error = e.what();
  }
  std::sort(r.checks.begin(), r.checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  r.pass = !r.error && std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.stats.pass; });
  return r;
}

std::string report_json(const Report& report) {
  using nlohmann::ordered_json;
  auto number = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json j;
  j["model"] = report.model;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  j["params"] = params;
  j["seed"] = report.seed;
  j["tol"] = report.tol;
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["anchor"] = c.anchor;
    cj["samples"] = c.stats.count;
    cj["max"] = number(c.stats.max_abs);
    cj["mean"] = number(c.stats.mean_abs);
    ordered_json am = ordered_json::object();
    for (const auto& [k, v] : c.stats.argmax.entries()) am[k] = v;
    cj["argmax"] = am;
    cj["pass"] = c.stats.pass;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["pass"] = report.pass;
  if (report.error) j["error"] = *report.error;
  return j.dump(2) + "\n";
}

}  // namespace hamreal
