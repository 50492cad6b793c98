#include "hamreal/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hamreal {

Method parse_method(std::string_view name) {
  if (name == "rk4") return Method::rk4;
  if (name == "rk45") return Method::rk45;
  throw Error("unknown integration method '" + std::string(name) + "' (expected rk4 or rk45)");
}

const char* method_name(Method m) { return m == Method::rk4 ? "rk4" : "rk45"; }

Point Trajectory::point(std::size_t i) const {
  std::optional<double> t;
  if (chart.time()) t = times[i];
  return chart.point(states[i], t);
}

void Trajectory::add_monitor(std::string name, std::vector<double> series) {
  if (series.size() != times.size()) throw Error("monitor '" + name + "' does not match the time grid");
  monitors.emplace_back(std::move(name), std::move(series));
}

namespace {

using State = std::vector<double>;

// Right-hand side of the (possibly augmented) system with a reusable point.
class Rhs {
 public:
  Rhs(const VectorField& X, const Chart& chart, bool variational)
      : chart_(chart), components_(X.components()), n_(X.size()), variational_(variational) {
    if (components_.size() != chart.dimension()) throw ChartMismatch("vector field does not match the chart");
    const std::vector<double> zeros(n_, 0.0);
    point_ = chart.point(zeros, chart.time() ? std::optional<double>(0.0) : std::nullopt);
    if (variational_)
      for (const auto& c : components_)
        for (const auto& v : chart.coordinates()) jacobian_.push_back(diff(c, v));
  }

  std::size_t size() const { return variational_ ? n_ + n_ * n_ : n_; }

  void operator()(double t, const State& y, State& dy) {
    for (std::size_t i = 0; i < n_; ++i) point_.set(chart_.coordinates()[i], y[i]);
    if (chart_.time()) point_.set(*chart_.time(), t);
    dy.resize(size());
    try {
      for (std::size_t i = 0; i < n_; ++i) dy[i] = eval(components_[i], point_);
      if (variational_) {
        std::vector<double> J(n_ * n_);
        for (std::size_t k = 0; k < J.size(); ++k) J[k] = eval(jacobian_[k], point_);
        // d(Phi)/dt = DX Phi, Phi row-major after the state.
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = 0; j < n_; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n_; ++k) s += J[i * n_ + k] * y[n_ + k * n_ + j];
            dy[n_ + i * n_ + j] = s;
          }
      }
    } catch (const DomainError& e) {
      throw IntegrationError(std::string("vector field undefined: ") + e.what(), t, State(y.begin(), y.begin() + n_));
    }
    for (double v : dy)
      if (!std::isfinite(v)) throw IntegrationError("vector field not finite", t, State(y.begin(), y.begin() + n_));
  }

 private:
  const Chart& chart_;
  std::vector<Expr> components_;
  std::vector<Expr> jacobian_;
  std::size_t n_;
  bool variational_;
  Point point_;
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (const auto& [c, k] : terms) s += c * (*k)[i];
    out[i] += h * s;
  }
  return out;
}

std::vector<double> make_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("time step must be positive");
  if (!(t1 > t0)) throw Error("t1 must be greater than t0");
  const double span = (t1 - t0) / dt;
  const auto n = static_cast<std::size_t>(std::ceil(span - 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) grid.push_back(t0 + static_cast<double>(k) * dt);
  grid.push_back(t1);
  return grid;
}

void record(Trajectory& tr, std::size_t n, double t, const State& y) {
  tr.times.push_back(t);
  tr.states.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  if (y.size() > n) tr.jacobians.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
}

void run_rk4(Rhs& f, Trajectory& tr, std::size_t n, State y, const std::vector<double>& grid) {
  record(tr, n, grid[0], y);
  State k1, k2, k3, k4;
  for (std::size_t s = 1; s < grid.size(); ++s) {
    const double t = grid[s - 1], h = grid[s] - t;
    f(t, y, k1);
    f(t + h / 2, axpy(y, h / 2, {{1.0, &k1}}), k2);
    f(t + h / 2, axpy(y, h / 2, {{1.0, &k2}}), k3);
    f(t + h, axpy(y, h, {{1.0, &k3}}), k4);
    y = axpy(y, h / 6, {{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}});
    record(tr, n, grid[s], y);
  }
}

// Dormand-Prince 5(4) tableau and Hairer's continuous extension.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

void run_dopri(Rhs& f, Trajectory& tr, std::size_t n, State y, const std::vector<double>& grid,
               const IntegrationOptions& o) {
  const double t1 = grid.back();
  double t = grid[0];
  record(tr, n, t, y);
  std::size_t next = 1;

  State k1, k2, k3, k4, k5, k6, k7;
  f(t, y, k1);
  double h = std::min(o.dt, t1 - t);
  {
    // Conservative starting step from the size of the derivative.
    double d0 = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double sc = o.atol + o.rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      dd = std::max(dd, std::abs(k1[i]) / sc);
    }
    if (dd > 1e-5 && d0 > 1e-5) h = std::min(h, 0.01 * d0 / dd);
    h = std::max(h, 1e-12 * std::max(1.0, std::abs(t)));
  }

  double err_prev = 1e-4;
  std::size_t steps = 0;
  while (next < grid.size()) {
    if (++steps > o.max_steps) throw IntegrationError("step limit exceeded", t, State(y.begin(), y.begin() + n));
    if (o.max_step > 0.0) h = std::min(h, o.max_step);
    if (t + h > t1) h = t1 - t;
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw IntegrationError("step size underflow", t, State(y.begin(), y.begin() + n));

    f(t + c2 * h, axpy(y, h, {{a21, &k1}}), k2);
    f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}), k3);
    f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), k4);
    f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), k5);
    f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), k6);
    const State y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    f(t + h, y1, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(y.size()));

    if (err <= 1.0) {
      const double tn = t + h >= t1 ? t1 : t + h;
      while (next < grid.size() && grid[next] <= tn) {
        const double g = grid[next];
        if (g == tn) {
          record(tr, n, g, y1);
        } else {
          const double th = (g - t) / h, th1 = 1.0 - th;
          State yi(y.size());
          for (std::size_t i = 0; i < y.size(); ++i) {
            const double r2 = y1[i] - y[i];
            const double r3 = h * k1[i] - r2;
            const double r4 = r2 - h * k7[i] - r3;
            const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            yi[i] = y[i] + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
          }
          record(tr, n, g, yi);
        }
        ++next;
      }
      t = tn;
      y = y1;
      k1 = k7;
      // PI step-size controller.
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      fac = std::clamp(fac, 0.2, 10.0);
      err_prev = std::max(err, 1e-4);
      h *= fac;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
}

double log_abs_det(std::vector<double> a, std::size_t n) {
  double log_det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    if (a[p * n + c] == 0.0) return -std::numeric_limits<double>::infinity();
    if (p != c)
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[p * n + k]);
    log_det += std::log(std::abs(a[c * n + c]));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= m * a[c * n + k];
    }
  }
  return log_det;
}

ResidualStats series_stats(const Trajectory& traj, const std::vector<double>& series, double tol) {
  SampleSet pts;
  pts.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    pts.push_back(traj.point(i));
  }
  std::size_t i = 0;
  return residual_scalar([&](const Point&) { return series[i++]; }, pts, tol);
}

// Weights of the derivative at x of the Lagrange interpolant through nodes.
std::vector<double> derivative_weights(const std::vector<double>& nodes, double x) {
  const std::size_t m = nodes.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double denom = 1.0;
    for (std::size_t k = 0; k < m; ++k)
      if (k != j) denom *= nodes[j] - nodes[k];
    double num = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      if (l == j) continue;
      double prod = 1.0;
      for (std::size_t k = 0; k < m; ++k)
        if (k != j && k != l) prod *= x - nodes[k];
      num += prod;
    }
    w[j] = num / denom;
  }
  return w;
}

}  // namespace

Trajectory integrate(const VectorField& X, const Chart& chart, const std::vector<double>& x0, double t0, double t1,
                     const IntegrationOptions& opts) {
  const std::size_t n = chart.dimension();
  if (x0.size() != n)
    throw Error("initial state has " + std::to_string(x0.size()) + " entries, expected " + std::to_string(n));
  const auto grid = make_grid(t0, t1, opts.dt);
  Rhs f(X, chart, opts.variational);
  State y = x0;
  if (opts.variational) {
    y.resize(n + n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) y[n + i * n + i] = 1.0;
  }
  Trajectory tr;
  tr.chart = chart;
  if (opts.method == Method::rk4)
    run_rk4(f, tr, n, std::move(y), grid);
  else
    run_dopri(f, tr, n, std::move(y), grid, opts);
  return tr;
}

std::vector<double> log_jacobian(const Trajectory& traj) {
  if (traj.jacobians.size() != traj.size()) throw Error("trajectory was integrated without the variational equation");
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& J : traj.jacobians) out.push_back(log_abs_det(J, traj.dimension()));
  return out;
}

MonitorResult monitor_first_integral(const Trajectory& traj, const Expr& F, double tol) {
  MonitorResult r;
  const double f0 = eval(F, traj.point(0));
  for (std::size_t i = 0; i < traj.size(); ++i) r.series.push_back(eval(F, traj.point(i)) - f0);
  r.stats = series_stats(traj, r.series, tol);
  return r;
}

MonitorResult evolution_consistency(const Trajectory& traj, const Expr& H, double tol) {
  const std::size_t n = traj.size();
  if (n < 5) throw Error("evolution consistency needs at least 5 grid points");
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = eval(H, traj.point(i));
  const Expr dHdt = traj.chart.time() ? diff(H, *traj.chart.time()) : Expr::constant(0.0);
  MonitorResult r;
  for (std::size_t i = 0; i < n; ++i) {
    // Five-point stencil, centred where possible.
    const std::size_t lo = std::min(i >= 2 ? i - 2 : 0, n - 5);
    std::vector<double> nodes(traj.times.begin() + static_cast<std::ptrdiff_t>(lo),
                              traj.times.begin() + static_cast<std::ptrdiff_t>(lo + 5));
    const auto w = derivative_weights(nodes, traj.times[i]);
    double d = 0.0;
    for (std::size_t k = 0; k < 5; ++k) d += w[k] * h[lo + k];
    r.series.push_back(d - eval(dHdt, traj.point(i)));
  }
  r.stats = series_stats(traj, r.series, tol);
  return r;
}

ResidualStats conformal_factor_check(const VectorField& X, const Expr& density, double expected_a,
                                     const SampleSet& pts, double tol) {
  return residual_expr(X.divergence(density) - expected_a, pts, tol);
}

std::vector<double> conformal_volume_defect(const Trajectory& traj, const Expr& density, double a) {
  const auto logdet = log_jacobian(traj);
  const double rho0 = eval(density, traj.point(0));
  std::vector<double> out;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double rho = eval(density, traj.point(i));
    out.push_back(std::log(std::abs(rho / rho0)) + logdet[i] - a * (traj.times[i] - traj.times[0]));
  }
  return out;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << 't';
  for (const auto& c : traj.chart.coordinates()) out << ',' << c;
  for (const auto& m : traj.monitors) out << ',' << m.first;
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < traj.size(); ++i) {
    put(traj.times[i]);
    for (double v : traj.states[i]) out << ',', put(v);
    for (const auto& m : traj.monitors) out << ',', put(m.second[i]);
    out << '\n';
  }
}

}  // namespace hamreal
