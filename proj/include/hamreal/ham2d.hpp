#pragma once

// Planar structures: multiplier-weighted symplectic forms, conformal
// Hamiltonian systems and the Darboux cosymplectic structure on (x, y, t).

#include "hamreal/forms.hpp"
#include "hamreal/residual.hpp"

namespace hamreal {

/// Throws DegenerateStructure if f vanishes (or cannot be evaluated) at a sample point.
void require_nonvanishing(const Expr& f, const SampleSet& pts, std::string_view what);

struct SymplecticData2D {
  Chart chart;
  Expr multiplier;
  /// M dx^dy on the spatial frame; i_X omega = dH for X = hamiltonian_field_2d(H, M).
  DifferentialForm omega;

  static SymplecticData2D make(const Chart& chart, const Expr& multiplier);
};

/// ((1/M) H_y, -(1/M) H_x) on the spatial frame of a 2D chart.
VectorField hamiltonian_field_2d(const Chart& chart, const Expr& H, const Expr& M);

struct ConformalData2D {
  Chart chart;
  DifferentialForm omega;
  DifferentialForm theta;
  VectorField liouville;
  double a = 0.0;

  /// Validates omega = -d(theta) and i_Z omega = -theta at the sample points
  /// (tolerance 1e-10) and that omega is nondegenerate there.
  static ConformalData2D make(const Chart& chart, DifferentialForm omega, DifferentialForm theta,
                              VectorField liouville, double a, const SampleSet& pts, double tol = 1e-10);

  /// rho in omega = rho dx^dy.
  Expr density() const { return omega.coefficient({0, 1}); }
};

/// Hamiltonian field of H for the data's omega plus a Z; i_X omega = dH - a theta.
VectorField conformal_field_2d(const Expr& H, double a, const ConformalData2D& data);

struct CosymplecticData {
  Chart chart;
  /// Spatial coordinates followed by t.
  Frame frame;
  DifferentialForm eta;
  DifferentialForm omega;
  VectorField reeb;

  /// eta = dt, omega = dx^dy, reeb = d/dt.
  static CosymplecticData darboux(const Chart& chart);
  /// General closed pair on the extended frame of a 2D chart. The Reeb field
  /// is the kernel direction of omega normalized by eta; eta^omega must not
  /// vanish at the sample points.
  static CosymplecticData make(const Chart& chart, DifferentialForm eta, DifferentialForm omega,
                               const SampleSet& pts);

  /// xi(H).
  Expr reeb_derivative(const Expr& H) const { return reeb.apply(H); }
};

/// E_H = d/dt + H_y d/dx - H_x d/dy on the extended frame.
VectorField evolution_field_cosym(const Expr& H, const CosymplecticData& data);

/// chi(X) = i_X omega + eta(X) eta.
DifferentialForm chi_map(const VectorField& X, const CosymplecticData& data);

/// grad H = xi(H) d/dt + H_y d/dx - H_x d/dy.
VectorField gradient_field_cosym(const Expr& H, const CosymplecticData& data);

}  // namespace hamreal
