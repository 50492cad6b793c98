#pragma once

// Verification suites over registry models and the JSON report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamreal/models.hpp"

namespace hamreal {

struct CheckResult {
  std::string name;
  /// The identity being checked, in words.
  std::string anchor;
  ResidualStats stats;
};

struct VerifyOptions {
  std::size_t samples = 500;
  std::uint64_t seed = 42;
  double tol = kDefaultTolerance;
};

struct Report {
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  std::uint64_t seed = 0;
  double tol = kDefaultTolerance;
  /// Sorted by name.
  std::vector<CheckResult> checks;
  bool pass = false;
  /// Set when a check could not be evaluated at all.
  std::optional<std::string> error;
};

/// Runs every check that applies to the model. Deterministic for fixed options.
Report verify_model(const ModelSpec& spec, const VerifyOptions& opts = {});

/// Pretty-printed JSON, byte-stable for a given report.
std::string report_json(const Report& report);

/// Images of source sample points in the target chart of a transform.
SampleSet transform_points(const ModelSpec& spec, const SampleSet& pts);

/// d/dt of the target coordinates along the model flow, at a source point.
std::vector<double> pushed_forward(const ModelSpec& spec, const Point& pt);

}  // namespace hamreal
