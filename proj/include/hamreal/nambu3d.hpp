#pragma once

// Three-dimensional Nambu-Poisson structures given by a volume form
// mu = M dx^dy^dz.

#include "hamreal/forms.hpp"
#include "hamreal/residual.hpp"

namespace hamreal {

struct NambuData {
  Chart chart;
  Expr multiplier = Expr::constant(1.0);

  Frame frame() const { return Frame::spatial(chart); }
  /// mu = M dx^dy^dz on the spatial frame.
  DifferentialForm volume() const;
};

struct HamiltonianPair {
  Expr h1;
  Expr h2;
};

struct ConformalParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  double total() const { return a1 + a2 + a3; }
};

/// {F1,F2}_{a,b} = dF1/da dF2/db - dF1/db dF2/da.
Expr partial_bracket(const Expr& f1, const Expr& f2, std::string_view a, std::string_view b);

/// (1/M) grad F1 . (grad F2 x grad F3).
Expr nambu_bracket(const Expr& f1, const Expr& f2, const Expr& f3, const NambuData& d);

/// (1/M) grad H1 x grad H2 on the spatial frame.
VectorField nambu_field(const HamiltonianPair& pair, const NambuData& d);

/// J x grad H.
VectorField poisson_field_3d(const VectorField& J, const Expr& H);

/// J . curl J.
Expr jacobi_expression(const VectorField& J);
ResidualStats jacobi_residual(const VectorField& J, const SampleSet& pts, double tol = 1e-10);

/// {F1,F2,{H1,H2,H3}} minus the three-term expansion.
Expr fundamental_identity_expression(const NambuData& d, const Expr& f1, const Expr& f2, const Expr& h1,
                                     const Expr& h2, const Expr& h3);
ResidualStats fundamental_identity_residual(const NambuData& d, const Expr& f1, const Expr& f2, const Expr& h1,
                                            const Expr& h2, const Expr& h3, const SampleSet& pts,
                                            double tol = 1e-8);

/// For alpha = A dy^dz + B dz^dx + C dx^dy returns (1/M)(A, B, C).
VectorField sharp_map(const DifferentialForm& alpha, const NambuData& d);

/// d/dt + X_{H1,H2} on the extended frame, X with the bracket components.
VectorField evolution_field_nambu(const HamiltonianPair& pair, const NambuData& d);

/// mu_H = mu - dH1^dH2^dt on the extended frame (M = 1).
DifferentialForm mu_H(const Chart& chart, const HamiltonianPair& pair);
/// beta(1)^beta(2)^beta(3), beta(i) = dx_i - X^i dt with X the bracket field.
DifferentialForm beta_product(const Chart& chart, const HamiltonianPair& pair);

struct MuHResidual {
  /// mu_H against the beta product.
  ResidualStats decomposition;
  /// i_E mu_H for the evolution field E.
  ResidualStats annihilation;
  /// i_E eta - 1 and i_X eta for the spatial part X.
  ResidualStats eta;
};

MuHResidual mu_H_residual(const Chart& chart, const HamiltonianPair& pair, const SampleSet& pts,
                          double tol = kDefaultTolerance);

/// zeta = a1 x dy^dz + a2 y dz^dx + a3 z dx^dy.
DifferentialForm zeta_form(const Chart& chart, const ConformalParams& cp);

/// ({F1,F2}_{y,z} + a1 x, {F1,F2}_{z,x} + a2 y, {F1,F2}_{x,y} + a3 z).
VectorField conformal_nambu_field(const Chart& chart, const Expr& f1, const Expr& f2, const ConformalParams& cp);

}  // namespace hamreal
