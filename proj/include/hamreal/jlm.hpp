#pragma once

// Jacobi last multiplier method: defining PDE, exactness and matching
// conditions, Hamiltonian reconstruction and coordinate-transform checks.

#include <string>
#include <vector>

#include "hamreal/forms.hpp"
#include "hamreal/residual.hpp"

namespace hamreal {

struct MultiplierData {
  Chart chart;
  /// Right-hand side on the spatial frame (components may depend on t).
  VectorField dynamics;
  Expr multiplier;
  /// psi, phi (2D) or psi, phi, varphi (3D); subtracted from the matching component.
  std::vector<Expr> auxiliary;

  /// Data with zero auxiliary functions.
  static MultiplierData make(const Chart& chart, std::vector<Expr> dynamics, Expr multiplier,
                             std::vector<Expr> auxiliary = {});

  /// The reduced system X - (psi, phi[, varphi]).
  VectorField reduced() const;
};

struct CoordinateTransform {
  std::vector<std::string> target;
  /// Target coordinates as expressions in the source coordinates and t.
  std::vector<Expr> components;
};

/// dM/dt + X(M) + M div X.
Expr jlm_expression(const Chart& chart, const VectorField& X, const Expr& M);
ResidualStats jlm_residual(const Chart& chart, const VectorField& X, const Expr& M, const SampleSet& pts,
                           double tol = kDefaultTolerance);

/// d/dx[M(f - psi)] + d/dy[M(g - phi)].
ResidualStats exactness_residual_2d(const MultiplierData& d, const SampleSet& pts, double tol = kDefaultTolerance);

/// The one-form M(f - psi) dy - M(g - phi) dx on the spatial frame.
DifferentialForm hamiltonian_one_form_2d(const MultiplierData& d);

/// Spatial dH against the one-form above.
ResidualStats hamiltonian_residual_2d(const MultiplierData& d, const Expr& H, const SampleSet& pts,
                                      double tol = kDefaultTolerance);

struct Reconstruction {
  /// Along base -> (target.x, base.y) -> target.
  double value = 0.0;
  /// Along base -> (base.x, target.y) -> target.
  double alternate = 0.0;
};

/// Line integral of hamiltonian_one_form_2d with t and parameters taken from
/// `base`. Adaptive 16-point Gauss-Legendre, absolute tolerance per segment.
/// Throws PathSingularity if the integrand is undefined on a path or the
/// quadrature does not converge.
Reconstruction reconstruct_hamiltonian_2d(const MultiplierData& d, const Point& base, const Point& target,
                                          double tol = 1e-9);

struct MatchingResidual {
  /// Purely spatial slots of M[(f-psi) dy^dz + (g-phi) dz^dx + (h-varphi) dx^dy] - dH1^dH2.
  ResidualStats spatial;
  /// Size of the dt-slots of dH1^dH2 (reported, not gated).
  ResidualStats dt_slots;
};

MatchingResidual matching_residual_3d(const MultiplierData& d, const Expr& H1, const Expr& H2,
                                      const SampleSet& pts, double tol = kDefaultTolerance);

/// Pullback of the target volume (dq^dp or du^dv^dw) against
/// M wedge_i (dx_i - psi_i dt) on the extended frame, every slot compared.
/// Throws DegenerateStructure if the spatial Jacobian is singular at a point.
ResidualStats transform_residual(const MultiplierData& d, const CoordinateTransform& T, const SampleSet& pts,
                                 double tol = kDefaultTolerance);

/// wedge_i (dx_i - f_i dt) on the extended frame.
DifferentialForm system_as_form(const Chart& chart, const VectorField& X);

/// wedge_i (dx_i - a_i dt) for arbitrary expressions a_i.
DifferentialForm shifted_volume(const Chart& chart, const std::vector<Expr>& shifts);

/// Determinant of d(components)/d(coordinates), spatial block only.
Expr spatial_jacobian(const Chart& chart, const std::vector<Expr>& components);

}  // namespace hamreal
