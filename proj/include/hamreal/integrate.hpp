#pragma once

// Trajectory integration (classical RK4 and adaptive Dormand-Prince 5(4)
// with dense output) plus invariant monitors evaluated along the result.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hamreal/forms.hpp"
#include "hamreal/residual.hpp"

namespace hamreal {

enum class Method { rk4, rk45 };

/// "rk4" or "rk45"; anything else throws Error.
Method parse_method(std::string_view name);
const char* method_name(Method m);

struct IntegrationOptions {
  Method method = Method::rk45;
  /// Output grid spacing; also the fixed step of rk4.
  double dt = 1e-2;
  double rtol = 1e-9;
  double atol = 1e-12;
  /// Upper bound on the rk45 step; 0 leaves it to the error control.
  double max_step = 0.0;
  /// Integrate the variational equation for the flow-map Jacobian as well.
  bool variational = false;
  std::size_t max_steps = 5'000'000;
};

struct Trajectory {
  Chart chart;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  /// Row-major flow-map Jacobians on the grid; empty unless variational.
  std::vector<std::vector<double>> jacobians;
  std::vector<std::pair<std::string, std::vector<double>>> monitors;

  std::size_t size() const { return times.size(); }
  std::size_t dimension() const { return chart.dimension(); }
  /// Grid point i as a Point binding coordinates, time and parameters.
  Point point(std::size_t i) const;
  void add_monitor(std::string name, std::vector<double> series);
};

/// Integrates dx/dt = X(x, t) from t0 to t1 and samples the solution on the
/// grid t0, t0 + dt, ..., t1 (the last interval may be shorter). Domain errors
/// and step-size underflow raise IntegrationError with the failing time.
Trajectory integrate(const VectorField& X, const Chart& chart, const std::vector<double>& x0, double t0, double t1,
                     const IntegrationOptions& opts = {});

/// log |det D phi_t| on the grid. Requires a variational trajectory.
std::vector<double> log_jacobian(const Trajectory& traj);

struct MonitorResult {
  std::vector<double> series;
  ResidualStats stats;
};

/// F(x(t), t) - F(x(t0), t0).
MonitorResult monitor_first_integral(const Trajectory& traj, const Expr& F, double tol = 1e-6);

/// d/dt H(x(t), t) by 4th-order finite differences minus dH/dt. Needs at least 5 grid points.
MonitorResult evolution_consistency(const Trajectory& traj, const Expr& H, double tol = 1e-5);

/// div_rho X - a with div_rho X = (1/rho) sum_i d(rho X^i)/dx^i.
ResidualStats conformal_factor_check(const VectorField& X, const Expr& density, double expected_a,
                                     const SampleSet& pts, double tol = 1e-12);

/// log(rho(x(t))/rho(x0)) + log|det D phi_t| - a (t - t0): zero when the flow
/// scales rho dV at the constant rate a. Requires a variational trajectory.
std::vector<double> conformal_volume_defect(const Trajectory& traj, const Expr& density, double a);

/// Header "t,<coords>,<monitors>", one row per grid point, 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);

}  // namespace hamreal
