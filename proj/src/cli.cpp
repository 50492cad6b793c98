#include "hamreal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hamreal/ham2d.hpp"
#include "hamreal/integrate.hpp"
#include "hamreal/models.hpp"
#include "hamreal/verify.hpp"

namespace hamreal {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct ModelArgs {
  std::string positional;
  std::string model;
  std::string file;
  std::vector<std::string> params;

  void attach(CLI::App* app) {
    app->add_option("name", positional, "Registry model name");
    app->add_option("--model,-m", model, "Registry model name");
    app->add_option("--file,-f", file, "Model file");
    app->add_option("--param,-p", params, "Parameter override k=v (repeatable)");
  }

  ModelSpec load() const {
    const int given = !positional.empty() + !model.empty() + !file.empty();
    if (given != 1) throw UsageError("give exactly one of a model name, --model or --file");
    ModelSpec spec = file.empty() ? get_model(model.empty() ? positional : model) : load_model(file);
    std::map<std::string, double, std::less<>> values;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--param expects k=v, got '" + kv + "'");
      values[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return values.empty() ? spec : spec.with_parameters(values);
  }
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) throw UsageError(std::string("bad number '") + item + "' in " + what);
    out.push_back(v);
  }
  return out;
}

template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  write(f);
}

int cmd_list(std::ostream& out) {
  for (const auto& name : list_models()) {
    const auto& m = get_model(name);
    out << name << "  dim=" << m.dimension;
    if (m.transform) out << "  " << m.transform->kind;
    if (m.conformal2d || m.conformal3d) out << "  conformal";
    if (!m.errata.empty()) out << "  errata=" << m.errata.size();
    out << '\n';
  }
  return kExitOk;
}

int cmd_verify(const ModelSpec& spec, const VerifyOptions& opts, const std::string& path, std::ostream& out,
               std::ostream& err) {
  const Report r = verify_model(spec, opts);
  with_output(path, out, [&](std::ostream& o) { o << report_json(r); });
  if (r.error) {
    err << "verify: " << *r.error << '\n';
    return kExitUsage;
  }
  for (const auto& c : r.checks)
    if (!c.stats.pass) err << "FAIL " << c.name << "  max=" << c.stats.max_abs << "  (" << c.anchor << ")\n";
  return r.pass ? kExitOk : kExitCheckFailed;
}

struct IntegrateArgs {
  std::string init;
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-2;
  double max_step = 0.0;
  std::string method = "rk45";
  std::string coords = "source";
  std::vector<std::string> monitors;
  std::string out;
};

// Field, chart and first integrals to integrate for the chosen coordinates.
struct FlowSetup {
  Chart chart;
  VectorField field;
  std::map<std::string, Expr> integrals;
  std::optional<std::pair<Expr, double>> conformal;
  Expr multiplier = Expr::constant(1.0);
};

FlowSetup flow_setup(const ModelSpec& spec, const std::string& coords) {
  FlowSetup s;
  if (coords == "source") {
    s.chart = spec.chart;
    s.field = spec.field();
    s.multiplier = spec.multiplier;
    if (spec.hamiltonian) s.integrals["H"] = *spec.hamiltonian;
    if (spec.pair) {
      s.integrals["H1"] = spec.pair->h1;
      s.integrals["H2"] = spec.pair->h2;
    }
    if (spec.conformal2d) s.conformal = {{spec.conformal2d->omega, spec.conformal_factor()}};
    if (spec.conformal3d) s.conformal = {{Expr::constant(1.0), spec.conformal_params().total()}};
    return s;
  }
  if (coords != "target") throw UsageError("--coords must be source or target");
  if (!spec.transform) throw UsageError("model '" + spec.name + "' has no coordinate transform");
  const auto& t = *spec.transform;
  s.chart = t.target_chart;
  const Frame f = Frame::spatial(s.chart);
  if (!t.flow.empty())
    s.field = VectorField(f, t.flow);
  else if (t.pair)
    s.field = nambu_field(*t.pair, NambuData{s.chart, Expr::constant(1.0)});
  else if (t.hamiltonian)
    s.field = hamiltonian_field_2d(s.chart, *t.hamiltonian, Expr::constant(1.0));
  else
    throw UsageError("model '" + spec.name + "' defines no dynamics in target coordinates");
  if (t.hamiltonian) s.integrals["H"] = *t.hamiltonian;
  if (t.pair) {
    s.integrals["H1"] = t.pair->h1;
    s.integrals["H2"] = t.pair->h2;
  }
  return s;
}

int cmd_integrate(const ModelSpec& spec, const IntegrateArgs& a, std::ostream& out, std::ostream& err) {
  const FlowSetup s = flow_setup(spec, a.coords);
  const auto x0 = parse_list(a.init, "--init");
  if (x0.size() != s.chart.dimension())
    throw UsageError("--init needs " + std::to_string(s.chart.dimension()) + " values, got " +
                     std::to_string(x0.size()));

  IntegrationOptions o;
  o.method = parse_method(a.method);
  o.dt = a.dt;
  o.max_step = a.max_step;
  for (const auto& m : a.monitors)
    if (m == "logdet" || m == "conformal" || m == "multiplier") o.variational = true;
  // Validate monitor names before integrating.
  for (const auto& m : a.monitors) {
    auto integral = [&](std::string_view prefix) {
      const std::string key = m.substr(prefix.size());
      if (!s.integrals.count(key)) throw UsageError("monitor '" + m + "': no first integral named " + key);
    };
    if (m.rfind("drift_", 0) == 0)
      integral("drift_");
    else if (m.rfind("evolution_", 0) == 0)
      integral("evolution_");
    else if (m == "conformal" && !s.conformal)
      throw UsageError("monitor 'conformal' needs a conformal block (source coordinates)");
    else if (m != "logdet" && m != "conformal" && m != "multiplier")
      throw UsageError("unknown monitor '" + m + "'");
  }
  if (!(a.dt > 0.0) || !(a.t1 > a.t0)) throw UsageError("need dt > 0 and t1 > t0");

  Trajectory tr;
  try {
    tr = integrate(s.field, s.chart, x0, a.t0, a.t1, o);
    for (const auto& m : a.monitors) {
      if (m.rfind("drift_", 0) == 0) {
        tr.add_monitor(m, monitor_first_integral(tr, s.integrals.at(m.substr(6))).series);
      } else if (m.rfind("evolution_", 0) == 0) {
        tr.add_monitor(m, evolution_consistency(tr, s.integrals.at(m.substr(10))).series);
      } else if (m == "logdet") {
        tr.add_monitor(m, log_jacobian(tr));
      } else if (m == "conformal") {
        tr.add_monitor(m, conformal_volume_defect(tr, s.conformal->first, s.conformal->second));
      } else {
        tr.add_monitor(m, conformal_volume_defect(tr, s.multiplier, 0.0));
      }
    }
  } catch (const IntegrationError& e) {
    err << "integrate: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const DomainError& e) {
    err << "integrate: monitor undefined: " << e.what() << '\n';
    return kExitRuntime;
  }
  with_output(a.out, out, [&](std::ostream& o) { write_csv(tr, o); });
  return kExitOk;
}

struct ReconstructArgs {
  std::string base;
  std::string target;
  double time = 0.0;
};

int cmd_reconstruct(const ModelSpec& spec, const ReconstructArgs& a, std::ostream& out, std::ostream& err) {
  if (spec.dimension != 2) {
    err << "reconstruct: only planar models are supported\n";
    return kExitUsage;
  }
  const auto b = parse_list(a.base, "--base"), t = parse_list(a.target, "--target");
  if (b.size() != 2 || t.size() != 2) throw UsageError("--base and --target need two values");
  std::optional<double> time;
  if (spec.chart.time()) time = a.time;
  const Point pb = spec.chart.point(b, time), pt = spec.chart.point(t, time);
  Reconstruction r;
  try {
    r = reconstruct_hamiltonian_2d(spec.multiplier_data(), pb, pt);
  } catch (const PathSingularity& e) {
    err << "reconstruct: " << e.what() << '\n';
    return kExitRuntime;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "reconstructed dH = %.12g\n", r.value);
  out << buf;
  std::snprintf(buf, sizeof buf, "alternate path  = %.12g\n", r.alternate);
  out << buf;
  if (!spec.hamiltonian) return kExitOk;
  double expected;
  try {
    expected = eval(*spec.hamiltonian, pt) - eval(*spec.hamiltonian, pb);
  } catch (const DomainError& e) {
    err << "reconstruct: registry Hamiltonian undefined: " << e.what() << '\n';
    return kExitRuntime;
  }
  const double diff = r.value - expected;
  std::snprintf(buf, sizeof buf, "registry dH      = %.12g\ndifference       = %.3e\n", expected, diff);
  out << buf;
  return std::abs(diff) <= 1e-6 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Hamiltonian realizations via the Jacobi last multiplier", "hamreal");
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the built-in models");

  auto* verify = app.add_subcommand("verify", "Run every applicable residual check and write a JSON report");
  ModelArgs vm;
  vm.attach(verify);
  VerifyOptions vo;
  std::string vout;
  verify->add_option("--samples", vo.samples, "Number of sample points")->capture_default_str();
  verify->add_option("--seed", vo.seed, "Sampling seed")->capture_default_str();
  verify->add_option("--tol", vo.tol, "Residual tolerance")->capture_default_str();
  verify->add_option("--out,-o", vout, "Report path (default stdout)");

  auto* integ = app.add_subcommand("integrate", "Integrate a model and write a CSV trajectory");
  ModelArgs im;
  im.attach(integ);
  IntegrateArgs ia;
  integ->add_option("--init", ia.init, "Initial state, comma separated")->required();
  integ->add_option("--t0", ia.t0)->capture_default_str();
  integ->add_option("--t1", ia.t1)->capture_default_str();
  integ->add_option("--dt", ia.dt, "Output grid spacing (rk4 step)")->capture_default_str();
  integ->add_option("--max-step", ia.max_step, "Largest rk45 step (0: unlimited)")->capture_default_str();
  integ->add_option("--method", ia.method)->check(CLI::IsMember({"rk4", "rk45"}))->capture_default_str();
  integ->add_option("--coords", ia.coords, "source, or target for canonical/standard coordinates")
      ->check(CLI::IsMember({"source", "target"}))
      ->capture_default_str();
  integ->add_option("--monitor", ia.monitors,
                    "drift_<F>, evolution_<F> (F in H, H1, H2), logdet, multiplier, conformal");
  integ->add_option("--out,-o", ia.out, "CSV path (default stdout)");

  auto* recon = app.add_subcommand("reconstruct", "Rebuild a planar Hamiltonian by line integration");
  ModelArgs rm;
  rm.attach(recon);
  ReconstructArgs ra;
  recon->add_option("--base", ra.base, "Base point x,y")->required();
  recon->add_option("--target", ra.target, "Target point x,y")->required();
  recon->add_option("--time", ra.time, "Time at which to integrate")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << e.what() << '\n' << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list(out);
    if (verify->parsed()) {
      ModelSpec spec;
      try {
        spec = vm.load();
      } catch (const Error& e) {
        err << "verify: " << e.what() << '\n';
        return kExitUsage;
      }
      return cmd_verify(spec, vo, vout, out, err);
    }
    if (integ->parsed()) return cmd_integrate(im.load(), ia, out, err);
    if (recon->parsed()) return cmd_reconstruct(rm.load(), ra, out, err);
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "bad number: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hamreal
