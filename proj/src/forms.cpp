#include "hamreal/forms.hpp"

#include <algorithm>

namespace hamreal {

namespace {

void require_same_frame(const Frame& a, const Frame& b, const char* what) {
  if (!(a == b)) throw ChartMismatch(std::string(what) + ": operands live on different frames");
}

// Sorts indices in place; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(IndexTuple& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

}  // namespace

// ---------------------------------------------------------------------------
// Frame

Frame::Frame(std::vector<std::string> coords)
    : coords_(std::make_shared<const std::vector<std::string>>(std::move(coords))) {}

Frame Frame::spatial(const Chart& chart) { return Frame(chart.coordinates()); }

Frame Frame::extended(const Chart& chart) {
  if (!chart.time()) throw ChartMismatch("chart has no time coordinate");
  auto names = chart.coordinates();
  names.push_back(*chart.time());
  return Frame(std::move(names));
}

int Frame::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < coords_->size(); ++i)
    if ((*coords_)[i] == name) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// DifferentialForm

DifferentialForm::DifferentialForm(Frame frame, int degree) : frame_(std::move(frame)), degree_(degree) {
  if (degree < 0) throw ChartMismatch("negative form degree");
}

DifferentialForm DifferentialForm::function(Frame frame, Expr f) {
  DifferentialForm out(std::move(frame), 0);
  out.add_term({}, f);
  return out;
}

DifferentialForm DifferentialForm::coordinate(Frame frame, std::size_t i) {
  if (i >= frame.size()) throw ChartMismatch("coordinate index out of range");
  DifferentialForm out(std::move(frame), 1);
  out.add_term({static_cast<int>(i)}, Expr::constant(1.0));
  return out;
}

DifferentialForm DifferentialForm::coordinate(Frame frame, std::string_view name) {
  const int i = frame.index_of(name);
  if (i < 0) throw ChartMismatch("frame has no coordinate '" + std::string(name) + "'");
  return coordinate(std::move(frame), static_cast<std::size_t>(i));
}

DifferentialForm DifferentialForm::differential(Frame frame, const Expr& f) {
  return ext_d(function(std::move(frame), f));
}

DifferentialForm DifferentialForm::monomial(Frame frame, const Expr& c, IndexTuple indices) {
  DifferentialForm out(std::move(frame), static_cast<int>(indices.size()));
  const int sign = sort_with_sign(indices);
  if (sign != 0) out.add_term(indices, sign > 0 ? c : -c);
  return out;
}

Expr DifferentialForm::coefficient(const IndexTuple& indices) const {
  auto it = coeffs_.find(indices);
  return it == coeffs_.end() ? Expr::constant(0.0) : it->second;
}

void DifferentialForm::add_term(const IndexTuple& indices, const Expr& c) {
  if (static_cast<int>(indices.size()) != degree_) throw ChartMismatch("term degree does not match form degree");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= static_cast<int>(frame_.size()))
      throw ChartMismatch("coordinate index out of range");
    if (i > 0 && indices[i - 1] >= indices[i]) throw ChartMismatch("index tuple not strictly increasing");
  }
  if (c.is_constant(0.0)) return;
  auto it = coeffs_.find(indices);
  if (it == coeffs_.end()) {
    coeffs_.emplace(indices, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_constant(0.0)) coeffs_.erase(it);
  }
}

DifferentialForm DifferentialForm::simplified() const {
  DifferentialForm out(frame_, degree_);
  for (const auto& [idx, c] : coeffs_) out.add_term(idx, simplify(c));
  return out;
}

DifferentialForm DifferentialForm::scaled(const Expr& f) const {
  DifferentialForm out(frame_, degree_);
  for (const auto& [idx, c] : coeffs_) out.add_term(idx, f * c);
  return out;
}

DifferentialForm DifferentialForm::without(std::string_view coordinate) const {
  const int drop = frame_.index_of(coordinate);
  if (drop < 0) return *this;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < frame_.size(); ++i)
    if (static_cast<int>(i) != drop) names.push_back(frame_[i]);
  DifferentialForm out(Frame(std::move(names)), degree_);
  for (const auto& [idx, c] : coeffs_) {
    if (std::find(idx.begin(), idx.end(), drop) != idx.end()) continue;
    IndexTuple shifted;
    for (int i : idx) shifted.push_back(i > drop ? i - 1 : i);
    out.add_term(shifted, c);
  }
  return out;
}

DifferentialForm DifferentialForm::embedded(const Frame& target) const {
  if (target == frame_) return *this;
  DifferentialForm out(target, degree_);
  for (const auto& [idx, c] : coeffs_) {
    IndexTuple mapped;
    for (int i : idx) {
      const int j = target.index_of(frame_[static_cast<std::size_t>(i)]);
      if (j < 0) throw ChartMismatch("target frame lacks coordinate '" + frame_[static_cast<std::size_t>(i)] + "'");
      mapped.push_back(j);
    }
    const int sign = sort_with_sign(mapped);
    out.add_term(mapped, sign > 0 ? c : -c);
  }
  return out;
}

std::map<IndexTuple, double> DifferentialForm::evaluate(const Point& pt) const {
  std::map<IndexTuple, double> out;
  for (const auto& [idx, c] : coeffs_) out[idx] = eval(c, pt);
  return out;
}

std::string DifferentialForm::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [idx, c] : coeffs_) {
    if (!out.empty()) out += " + ";
    out += "(" + hamreal::to_string(c) + ")";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out += i == 0 ? " d" : "^d";
      out += frame_[static_cast<std::size_t>(idx[i])];
    }
  }
  return out;
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_frame(a.frame_, b.frame_, "form addition");
  if (a.degree_ != b.degree_) throw ChartMismatch("form addition: degree mismatch");
  DifferentialForm out = a;
  for (const auto& [idx, c] : b.coeffs_) out.add_term(idx, c);
  return out;
}

DifferentialForm operator-(const DifferentialForm& a) {
  DifferentialForm out(a.frame_, a.degree_);
  for (const auto& [idx, c] : a.coeffs_) out.add_term(idx, -c);
  return out;
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) { return a + (-b); }

DifferentialForm operator*(const Expr& f, const DifferentialForm& a) { return a.scaled(f); }

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_frame(a.frame(), b.frame(), "wedge");
  DifferentialForm out(a.frame(), a.degree() + b.degree());
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      IndexTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      const int sign = sort_with_sign(idx);
      if (sign == 0) continue;
      const Expr c = ca * cb;
      out.add_term(idx, sign > 0 ? c : -c);
    }
  }
  return out;
}

DifferentialForm ext_d(const DifferentialForm& a) {
  const Frame& frame = a.frame();
  DifferentialForm out(frame, a.degree() + 1);
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const Expr dc = diff(c, frame[j]);
      if (dc.is_constant(0.0)) continue;
      IndexTuple full{static_cast<int>(j)};
      full.insert(full.end(), idx.begin(), idx.end());
      const int sign = sort_with_sign(full);
      if (sign == 0) continue;
      out.add_term(full, sign > 0 ? dc : -dc);
    }
  }
  return out;
}

DifferentialForm interior(const VectorField& x, const DifferentialForm& a) {
  require_same_frame(x.frame(), a.frame(), "interior product");
  if (a.degree() == 0) throw ChartMismatch("interior product of a 0-form");
  DifferentialForm out(a.frame(), a.degree() - 1);
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const Expr& comp = x[static_cast<std::size_t>(idx[r])];
      if (comp.is_constant(0.0)) continue;
      IndexTuple rest;
      for (std::size_t s = 0; s < idx.size(); ++s)
        if (s != r) rest.push_back(idx[s]);
      const Expr term = comp * c;
      out.add_term(rest, r % 2 == 0 ? term : -term);
    }
  }
  return out;
}

DifferentialForm lie_derivative(const VectorField& x, const DifferentialForm& a) {
  require_same_frame(x.frame(), a.frame(), "Lie derivative");
  DifferentialForm out = interior(x, ext_d(a));
  if (a.degree() > 0) out = out + ext_d(interior(x, a));
  return out;
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(Frame frame, std::vector<Expr> components)
    : frame_(std::move(frame)), components_(std::move(components)) {
  if (components_.size() != frame_.size())
    throw ChartMismatch("vector field needs one component per frame coordinate");
}

VectorField VectorField::zero(Frame frame) {
  std::vector<Expr> comps(frame.size(), Expr::constant(0.0));
  return VectorField(std::move(frame), std::move(comps));
}

VectorField VectorField::coordinate(Frame frame, std::string_view name) {
  const int i = frame.index_of(name);
  if (i < 0) throw ChartMismatch("frame has no coordinate '" + std::string(name) + "'");
  std::vector<Expr> comps(frame.size(), Expr::constant(0.0));
  comps[static_cast<std::size_t>(i)] = Expr::constant(1.0);
  return VectorField(std::move(frame), std::move(comps));
}

Expr VectorField::apply(const Expr& f) const {
  Expr out = Expr::constant(0.0);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].is_constant(0.0)) continue;
    out = out + components_[i] * diff(f, frame_[i]);
  }
  return out;
}

Expr VectorField::divergence() const {
  Expr out = Expr::constant(0.0);
  for (std::size_t i = 0; i < components_.size(); ++i) out = out + diff(components_[i], frame_[i]);
  return out;
}

Expr VectorField::divergence(const Expr& density) const {
  Expr out = Expr::constant(0.0);
  for (std::size_t i = 0; i < components_.size(); ++i) out = out + diff(density * components_[i], frame_[i]);
  return out / density;
}

VectorField VectorField::simplified() const {
  std::vector<Expr> comps;
  for (const auto& c : components_) comps.push_back(simplify(c));
  return VectorField(frame_, std::move(comps));
}

VectorField VectorField::scaled(const Expr& f) const {
  std::vector<Expr> comps;
  for (const auto& c : components_) comps.push_back(f * c);
  return VectorField(frame_, std::move(comps));
}

VectorField VectorField::embedded(const Frame& target) const {
  if (target == frame_) return *this;
  std::vector<Expr> comps(target.size(), Expr::constant(0.0));
  for (std::size_t i = 0; i < frame_.size(); ++i) {
    const int j = target.index_of(frame_[i]);
    if (j < 0) throw ChartMismatch("target frame lacks coordinate '" + frame_[i] + "'");
    comps[static_cast<std::size_t>(j)] = components_[i];
  }
  return VectorField(target, std::move(comps));
}

VectorField VectorField::without(std::string_view coordinate) const {
  const int drop = frame_.index_of(coordinate);
  if (drop < 0) return *this;
  std::vector<std::string> names;
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < frame_.size(); ++i) {
    if (static_cast<int>(i) == drop) continue;
    names.push_back(frame_[i]);
    comps.push_back(components_[i]);
  }
  return VectorField(Frame(std::move(names)), std::move(comps));
}

std::vector<double> VectorField::evaluate(const Point& pt) const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(eval(c, pt));
  return out;
}

std::string VectorField::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ", ";
    out += hamreal::to_string(components_[i]);
  }
  return out + ")";
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_frame(a.frame_, b.frame_, "vector field addition");
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < a.size(); ++i) comps.push_back(a[i] + b[i]);
  return VectorField(a.frame_, std::move(comps));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_frame(a.frame_, b.frame_, "vector field subtraction");
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < a.size(); ++i) comps.push_back(a[i] - b[i]);
  return VectorField(a.frame_, std::move(comps));
}

std::vector<Expr> cross(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != 3 || b.size() != 3) throw ChartMismatch("cross product needs 3-vectors");
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Expr dot(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) throw ChartMismatch("dot product of vectors of different length");
  Expr out = Expr::constant(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out = out + a[i] * b[i];
  return out;
}

}  // namespace hamreal
