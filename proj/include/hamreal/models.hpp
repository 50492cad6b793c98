#pragma once

// Model records: built-in registry and a line-oriented model-file format.
//
//   [model]      name, dim, vars, params (k=v or bare k for 1), time
//   [define]     name = expr; substituted into every later expression
//   [domain]     symbol = lo, hi
//   [dynamics]   one key per coordinate
//   [structure]  multiplier, psi, phi, varphi, H | H1 + H2, printed_multiplier
//   [canonical] / [standard]
//                vars, one key per target coordinate, optional H | H1 + H2
//                and flow_<target> (all in target coordinates and t)
//   [conformal]  2D: omega, theta_<x>, liouville_<x>, factor, H
//                3D: params = a1, a2, a3 and F1, F2
//   [errata]     note = text (repeatable)

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamreal/jlm.hpp"
#include "hamreal/nambu3d.hpp"
#include "hamreal/residual.hpp"

namespace hamreal {

struct TransformSpec {
  /// "canonical" (2D) or "standard" (3D).
  std::string kind;
  CoordinateTransform map;
  /// Target coordinates with the source's time and parameters.
  Chart target_chart;
  std::optional<Expr> hamiltonian;
  std::optional<HamiltonianPair> pair;
  /// Optional right-hand side in target coordinates.
  std::vector<Expr> flow;
};

struct Conformal2DSpec {
  /// rho in omega = rho dx^dy.
  Expr omega;
  std::vector<Expr> theta;
  std::vector<Expr> liouville;
  Expr factor;
  Expr hamiltonian;
};

struct Conformal3DSpec {
  std::vector<Expr> params;
  Expr f1;
  Expr f2;
};

struct ModelSpec {
  std::string name;
  int dimension = 0;
  Chart chart;
  SampleDomain domain;
  std::vector<Expr> dynamics;
  Expr multiplier = Expr::constant(1.0);
  std::vector<Expr> auxiliary;
  /// Multiplier as originally published, when it had to be corrected.
  std::optional<Expr> printed_multiplier;
  std::optional<Expr> hamiltonian;
  std::optional<HamiltonianPair> pair;
  std::optional<TransformSpec> transform;
  std::optional<Conformal2DSpec> conformal2d;
  std::optional<Conformal3DSpec> conformal3d;
  std::vector<std::string> errata;

  VectorField field() const { return VectorField(Frame::spatial(chart), dynamics); }
  MultiplierData multiplier_data() const { return {chart, field(), multiplier, auxiliary}; }
  /// Copy with parameter values replaced. Unknown names throw UndeclaredSymbol.
  ModelSpec with_parameters(const std::map<std::string, double, std::less<>>& values) const;
  /// Conformal parameters evaluated at the bound parameter values.
  ConformalParams conformal_params() const;
  /// Conformal factor (2D) evaluated at the bound parameter values.
  double conformal_factor() const;
};

/// Parse model-file text. Throws ModelError (with line number), ParseError or UndeclaredSymbol.
ModelSpec parse_model(std::string_view text);
ModelSpec load_model(const std::string& path);
/// Model-file text that parse_model reads back to a function-equal record.
std::string format_model(const ModelSpec& spec);

/// Throws ModelError listing the available names.
const ModelSpec& get_model(std::string_view name);
/// Alphabetical.
std::vector<std::string> list_models();
/// Raw registry text of a built-in model.
std::string_view registry_source(std::string_view name);

}  // namespace hamreal
