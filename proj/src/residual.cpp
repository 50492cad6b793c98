#include "hamreal/residual.hpp"

#include <cmath>
#include <limits>

namespace hamreal {

namespace {

// Running maximum of |d| that lets a NaN through.
double worse(double worst, double d) {
  const double a = std::abs(d);
  return a <= worst ? worst : a;
}

}  // namespace

ResidualStats ResidualStats::with_tolerance(double tol) const {
  ResidualStats out = *this;
  out.tolerance = tol;
  out.pass = std::isfinite(max_abs) && max_abs <= tol;
  return out;
}

Interval SampleDomain::box(std::string_view symbol, bool is_time) const {
  auto it = boxes.find(symbol);
  if (it != boxes.end()) return it->second;
  return is_time ? time_default : coordinate_default;
}

UniformRng::UniformRng(std::uint64_t seed) : engine_(seed) {}

// 53 random bits scaled into [0, 1); std::mt19937_64 output is fully
// specified, unlike the standard distributions.
double UniformRng::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

SampleSet sample_points(const Chart& chart, const SampleDomain& domain, std::size_t n, std::uint64_t seed) {
  UniformRng rng(seed);
  SampleSet out;
  out.reserve(n);
  std::vector<double> coords(chart.dimension());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const Interval b = domain.box(chart.coordinates()[i], false);
      coords[i] = rng.uniform(b.lo, b.hi);
    }
    std::optional<double> t;
    if (chart.time()) {
      const Interval b = domain.box(*chart.time(), true);
      t = rng.uniform(b.lo, b.hi);
    }
    out.push_back(chart.point(coords, t));
  }
  return out;
}

ResidualStats residual_scalar(const std::function<double(const Point&)>& f, const SampleSet& pts, double tol) {
  ResidualStats s;
  s.tolerance = tol;
  double sum = 0.0;
  bool first = true;
  for (const auto& p : pts) {
    double r;
    try {
      r = std::abs(f(p));
      if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
      r = std::numeric_limits<double>::infinity();
    }
    ++s.count;
    sum += r;
    if (first || r > s.max_abs) {
      s.max_abs = r;
      s.argmax = p;
      first = false;
    }
  }
  s.mean_abs = s.count ? sum / static_cast<double>(s.count) : 0.0;
  return s.with_tolerance(tol);
}

ResidualStats residual_expr(const Expr& e, const SampleSet& pts, double tol) {
  return residual_scalar([&](const Point& p) { return eval(e, p); }, pts, tol);
}

ResidualStats residual_expr(const Expr& a, const Expr& b, const SampleSet& pts, double tol) {
  return residual_scalar([&](const Point& p) { return eval(a, p) - eval(b, p); }, pts, tol);
}

ResidualStats residual_form(const DifferentialForm& a, const DifferentialForm& b, const SampleSet& pts, double tol,
                            const std::function<bool(const IndexTuple&)>& slot_filter) {
  if (!(a.frame() == b.frame())) throw ChartMismatch("residual_form: operands live on different frames");
  if (a.degree() != b.degree()) throw ChartMismatch("residual_form: degree mismatch");
  std::vector<std::pair<Expr, Expr>> slots;
  std::map<IndexTuple, std::pair<Expr, Expr>> merged;
  for (const auto& [idx, c] : a.terms()) merged[idx].first = c;
  for (const auto& [idx, c] : b.terms()) merged[idx].second = c;
  for (const auto& [idx, pair] : merged)
    if (!slot_filter || slot_filter(idx)) slots.push_back(pair);
  return residual_scalar(
      [&](const Point& p) {
        double worst = 0.0;
        for (const auto& [ca, cb] : slots) worst = worse(worst, eval(ca, p) - eval(cb, p));
        return worst;
      },
      pts, tol);
}

double form_difference(const DifferentialForm& a, const DifferentialForm& b, const Point& pt) {
  if (!(a.frame() == b.frame()) || a.degree() != b.degree())
    throw ChartMismatch("form_difference: operands are not comparable");
  double worst = 0.0;
  for (const auto& [idx, c] : a.terms()) worst = worse(worst, eval(c, pt) - eval(b.coefficient(idx), pt));
  for (const auto& [idx, c] : b.terms())
    if (!a.terms().count(idx)) worst = worse(worst, eval(c, pt));
  return worst;
}

ResidualStats residual_field(const VectorField& x, const VectorField& y, const SampleSet& pts, double tol) {
  if (!(x.frame() == y.frame())) throw ChartMismatch("residual_field: operands live on different frames");
  return residual_scalar(
      [&](const Point& p) {
        double worst = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) worst = worse(worst, eval(x[i], p) - eval(y[i], p));
        return worst;
      },
      pts, tol);
}

}  // namespace hamreal
