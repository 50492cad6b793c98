#pragma once

// Pointwise residual statistics and seeded sample generation.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hamreal/expr.hpp"
#include "hamreal/forms.hpp"

namespace hamreal {

inline constexpr double kDefaultTolerance = 1e-9;

struct ResidualStats {
  std::size_t count = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  /// Sample point at which max_abs was attained.
  Point argmax;
  double tolerance = kDefaultTolerance;
  bool pass = true;

  /// Recomputes pass against a new tolerance.
  ResidualStats with_tolerance(double tol) const;
};

using SampleSet = std::vector<Point>;

struct Interval {
  double lo = 0.5;
  double hi = 2.0;
};

/// Per-symbol sampling boxes. Coordinates default to [0.5, 2], time to [0, 1].
struct SampleDomain {
  std::map<std::string, Interval, std::less<>> boxes;
  Interval coordinate_default{0.5, 2.0};
  Interval time_default{0.0, 1.0};

  Interval box(std::string_view symbol, bool is_time) const;
};

/// n points with every coordinate, the time symbol (when the chart has one)
/// and all parameters bound. Deterministic for a given seed on every platform.
SampleSet sample_points(const Chart& chart, const SampleDomain& domain, std::size_t n, std::uint64_t seed);

/// Portable uniform deviates in [0, 1).
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed);
  double next();
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

/// Statistics of |f(p)| over the sample set. A DomainError at a point counts
/// as an infinite residual there.
ResidualStats residual_scalar(const std::function<double(const Point&)>& f, const SampleSet& pts,
                              double tol = kDefaultTolerance);
ResidualStats residual_expr(const Expr& e, const SampleSet& pts, double tol = kDefaultTolerance);
/// |a - b| for two expressions.
ResidualStats residual_expr(const Expr& a, const Expr& b, const SampleSet& pts, double tol = kDefaultTolerance);

/// Coefficientwise |a - b|; per point the maximum over slots is taken.
/// `slot_filter`, when given, restricts the comparison to accepted slots.
ResidualStats residual_form(const DifferentialForm& a, const DifferentialForm& b, const SampleSet& pts,
                            double tol = kDefaultTolerance,
                            const std::function<bool(const IndexTuple&)>& slot_filter = {});

/// max over slots of |a - b| at one point.
double form_difference(const DifferentialForm& a, const DifferentialForm& b, const Point& pt);

/// Componentwise |X - Y|.
ResidualStats residual_field(const VectorField& x, const VectorField& y, const SampleSet& pts,
                             double tol = kDefaultTolerance);

}  // namespace hamreal
