#pragma once

// Exterior calculus in a single coordinate frame.
//
// A Frame is an ordered list of coordinate names. Forms on the extended
// space simply use a frame whose last entry is the time symbol; dropping
// that coordinate (projection) is always explicit.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hamreal/expr.hpp"

namespace hamreal {

class Frame {
 public:
  Frame() : coords_(std::make_shared<const std::vector<std::string>>()) {}
  explicit Frame(std::vector<std::string> coords);

  /// Spatial coordinates of the chart.
  static Frame spatial(const Chart& chart);
  /// Spatial coordinates followed by the time symbol. Throws if the chart has no time.
  static Frame extended(const Chart& chart);

  std::size_t size() const { return coords_->size(); }
  const std::string& operator[](std::size_t i) const { return (*coords_)[i]; }
  const std::vector<std::string>& names() const { return *coords_; }
  /// Index of a coordinate, or -1.
  int index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name) >= 0; }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.coords_ == b.coords_ || *a.coords_ == *b.coords_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> coords_;
};

/// Strictly increasing coordinate indices, e.g. {0, 2} for dx^dz.
using IndexTuple = std::vector<int>;

class DifferentialForm {
 public:
  DifferentialForm() = default;
  /// The zero k-form.
  DifferentialForm(Frame frame, int degree);

  static DifferentialForm function(Frame frame, Expr f);
  /// d(coordinate i), a constant 1-form.
  static DifferentialForm coordinate(Frame frame, std::size_t i);
  static DifferentialForm coordinate(Frame frame, std::string_view name);
  /// df for a function f.
  static DifferentialForm differential(Frame frame, const Expr& f);
  /// Form with a single term c dx^{I}; I may be in any order (the sign is
  /// absorbed, repeated indices give zero).
  static DifferentialForm monomial(Frame frame, const Expr& c, IndexTuple indices);

  const Frame& frame() const { return frame_; }
  int degree() const { return degree_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<IndexTuple, Expr>& terms() const { return coeffs_; }
  Expr coefficient(const IndexTuple& indices) const;

  /// Adds c to the coefficient of the (sorted) tuple.
  void add_term(const IndexTuple& indices, const Expr& c);

  DifferentialForm simplified() const;
  DifferentialForm scaled(const Expr& f) const;
  /// Drops every term containing the coordinate and removes it from the frame.
  DifferentialForm without(std::string_view coordinate) const;
  /// Re-expresses the form in a frame containing all of this frame's coordinates.
  DifferentialForm embedded(const Frame& target) const;

  std::map<IndexTuple, double> evaluate(const Point& pt) const;
  std::string to_string() const;

  friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a);

 private:
  Frame frame_;
  int degree_ = 0;
  std::map<IndexTuple, Expr> coeffs_;
};

DifferentialForm operator*(const Expr& f, const DifferentialForm& a);

class VectorField {
 public:
  VectorField() = default;
  VectorField(Frame frame, std::vector<Expr> components);

  static VectorField zero(Frame frame);
  /// The coordinate field d/d(name).
  static VectorField coordinate(Frame frame, std::string_view name);

  const Frame& frame() const { return frame_; }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& operator[](std::size_t i) const { return components_[i]; }
  std::size_t size() const { return components_.size(); }

  /// X(F) = sum_i X^i dF/dx^i.
  Expr apply(const Expr& f) const;
  /// sum_i dX^i/dx^i over the frame coordinates.
  Expr divergence() const;
  /// Divergence relative to the density rho: (1/rho) sum_i d(rho X^i)/dx^i.
  Expr divergence(const Expr& density) const;

  VectorField simplified() const;
  VectorField scaled(const Expr& f) const;
  /// Same components in a larger frame; new coordinates get component 0.
  VectorField embedded(const Frame& target) const;
  /// Drops the component along the named coordinate.
  VectorField without(std::string_view coordinate) const;

  std::vector<double> evaluate(const Point& pt) const;
  std::string to_string() const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);

 private:
  Frame frame_;
  std::vector<Expr> components_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm ext_d(const DifferentialForm& a);
/// Contraction i_X a. Throws ChartMismatch for a 0-form.
DifferentialForm interior(const VectorField& x, const DifferentialForm& a);
/// Cartan: L_X a = d(i_X a) + i_X(da).
DifferentialForm lie_derivative(const VectorField& x, const DifferentialForm& a);

/// Cross product of 3-component expression vectors.
std::vector<Expr> cross(const std::vector<Expr>& a, const std::vector<Expr>& b);
Expr dot(const std::vector<Expr>& a, const std::vector<Expr>& b);

}  // namespace hamreal
