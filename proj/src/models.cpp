#include "hamreal/models.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace hamreal {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = s.find(',');
    out.emplace_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line); }

double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ModelError("expected a number, got '" + std::string(s) + "'", line);
  return v;
}

std::string format_number(double v) { return to_string(Expr::constant(v)); }

struct Entry {
  std::string key;
  std::string value;
  std::size_t line;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

class SectionReader {
 public:
  SectionReader(const Section* s, std::string name) : section_(s), name_(std::move(name)) {
    if (s)
      for (const auto& e : s->entries) {
        if (e.key == "note") continue;
        if (!seen_.insert(e.key).second) throw ModelError("duplicate key '" + e.key + "' in [" + name_ + "]", e.line);
      }
  }

  bool present() const { return section_ != nullptr; }
  std::size_t line() const { return section_ ? section_->line : 0; }

  const Entry* find(std::string_view key) {
    if (!section_) return nullptr;
    for (const auto& e : section_->entries)
      if (e.key == key) {
        used_.insert(e.key);
        return &e;
      }
    return nullptr;
  }

  const Entry& require(std::string_view key) {
    const Entry* e = find(key);
    if (!e) throw ModelError("section [" + name_ + "] is missing key '" + std::string(key) + "'", line());
    return *e;
  }

  /// Rejects keys nobody asked for.
  void finish() const {
    if (!section_) return;
    for (const auto& e : section_->entries)
      if (!used_.count(e.key)) throw ModelError("unknown key '" + e.key + "' in [" + name_ + "]", e.line);
  }

  void mark_used(const std::string& key) { used_.insert(key); }

 private:
  const Section* section_;
  std::string name_;
  std::set<std::string> seen_;
  std::set<std::string> used_;
};

// Charts used while parsing: the model chart extended by [define] names so
// that definitions can be referenced, then substituted away.
class ExprContext {
 public:
  explicit ExprContext(const Chart& chart) : chart_(chart) {}

  void define(const std::string& name, const std::string& text, std::size_t line) {
    if (chart_.declares(name) || defines_.count(name)) throw ModelError("definition of '" + name + "' collides", line);
    Expr e = parse_at(text, line, chart_);
    defines_.emplace(name, e);
    names_.push_back(name);
  }

  Expr parse_at(const std::string& text, std::size_t line) const { return parse_at(text, line, chart_); }

  Expr parse_at(const std::string& text, std::size_t line, const Chart& base) const {
    std::vector<Parameter> params = base.parameters();
    for (const auto& n : names_) params.push_back({n, std::nullopt});
    const Chart ch(base.coordinates(), base.time(), params);
    Expr e;
    try {
      e = parse(text, ch);
    } catch (const ParseError& err) {
      throw ModelError(std::string("syntax error: ") + err.what(), line);
    } catch (const UndeclaredSymbol& err) {
      throw UndeclaredSymbol(err.symbol(), where(line));
    }
    return defines_.empty() ? e : substitute(e, defines_);
  }

 private:
  Chart chart_;
  std::map<std::string, Expr, std::less<>> defines_;
  std::vector<std::string> names_;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ModelError("malformed section header", lineno);
      Section s;
      s.name = std::string(trim(line.substr(1, line.size() - 2)));
      s.line = lineno;
      for (const auto& other : sections)
        if (other.name == s.name) throw ModelError("duplicate section [" + s.name + "]", lineno);
      sections.push_back(std::move(s));
      continue;
    }
    if (sections.empty()) throw ModelError("content before the first section", lineno);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ModelError("expected 'key = value'", lineno);
    Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), lineno};
    if (e.key.empty()) throw ModelError("empty key", lineno);
    if (e.value.empty()) throw ModelError("empty value for '" + e.key + "'", lineno);
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

const std::set<std::string>& known_sections() {
  static const std::set<std::string> names{"model",   "define",    "domain",    "dynamics",
                                           "structure", "canonical", "standard", "conformal", "errata"};
  return names;
}

}  // namespace

ModelSpec parse_model(std::string_view text) {
  const auto sections = split_sections(text);
  std::map<std::string, const Section*> by_name;
  for (const auto& s : sections) {
    if (!known_sections().count(s.name)) throw ModelError("unknown section [" + s.name + "]", s.line);
    by_name[s.name] = &s;
  }
  auto section = [&](const std::string& n) -> const Section* {
    auto it = by_name.find(n);
    return it == by_name.end() ? nullptr : it->second;
  };
  for (const char* required : {"model", "dynamics", "structure"})
    if (!section(required)) throw ModelError(std::string("missing required section [") + required + "]");

  ModelSpec spec;

  // [model]
  SectionReader model(section("model"), "model");
  spec.name = model.require("name").value;
  const Entry& dim = model.require("dim");
  spec.dimension = static_cast<int>(parse_number(dim.value, dim.line));
  if (spec.dimension != 2 && spec.dimension != 3) throw ModelError("dim must be 2 or 3", dim.line);
  const Entry& vars = model.require("vars");
  const auto coords = split_list(vars.value);
  if (coords.size() != static_cast<std::size_t>(spec.dimension))
    throw ModelError("vars must list " + std::to_string(spec.dimension) + " coordinates", vars.line);
  std::optional<std::string> time = std::string("t");
  if (const Entry* t = model.find("time")) time = t->value == "none" ? std::nullopt : std::optional(t->value);
  std::vector<Parameter> params;
  if (const Entry* p = model.find("params")) {
    for (const auto& item : split_list(p->value)) {
      const auto eq = item.find('=');
      Parameter par;
      par.name = std::string(trim(std::string_view(item).substr(0, eq)));
      par.value = eq == std::string::npos ? 1.0 : parse_number(std::string_view(item).substr(eq + 1), p->line);
      params.push_back(par);
    }
  }
  model.finish();
  try {
    spec.chart = Chart(coords, time, params);
  } catch (const ModelError& e) {
    throw ModelError(e.what(), vars.line);
  }
  const auto& cs = spec.chart.coordinates();

  ExprContext ctx(spec.chart);

  // [define]
  if (const Section* s = section("define"))
    for (const auto& e : s->entries) ctx.define(e.key, e.value, e.line);

  // [domain]
  if (const Section* s = section("domain")) {
    for (const auto& e : s->entries) {
      const SymbolKind kind = spec.chart.kind(e.key);
      if (kind != SymbolKind::Coordinate && kind != SymbolKind::Time)
        throw ModelError("domain entry '" + e.key + "' is not a coordinate or time", e.line);
      const auto bounds = split_list(e.value);
      if (bounds.size() != 2) throw ModelError("domain entry needs 'lo, hi'", e.line);
      Interval iv{parse_number(bounds[0], e.line), parse_number(bounds[1], e.line)};
      if (!(iv.lo < iv.hi)) throw ModelError("domain interval must have lo < hi", e.line);
      if (!spec.domain.boxes.emplace(e.key, iv).second) throw ModelError("duplicate domain entry", e.line);
    }
  }

  // [dynamics]
  SectionReader dyn(section("dynamics"), "dynamics");
  for (const auto& c : cs) {
    const Entry* e = dyn.find(c);
    if (!e) throw ModelError("section [dynamics] is missing the equation for '" + c + "'", dyn.line());
    spec.dynamics.push_back(ctx.parse_at(e->value, e->line));
  }
  dyn.finish();

  // [structure]
  SectionReader st(section("structure"), "structure");
  const Entry& m = st.require("multiplier");
  spec.multiplier = ctx.parse_at(m.value, m.line);
  if (const Entry* e = st.find("printed_multiplier")) spec.printed_multiplier = ctx.parse_at(e->value, e->line);
  const std::vector<std::string> aux_keys = spec.dimension == 2 ? std::vector<std::string>{"psi", "phi"}
                                                                : std::vector<std::string>{"psi", "phi", "varphi"};
  for (const auto& k : aux_keys) {
    const Entry* e = st.find(k);
    spec.auxiliary.push_back(e ? ctx.parse_at(e->value, e->line) : Expr::constant(0.0));
  }
  auto read_hamiltonians = [&](SectionReader& r, const auto& parse_fn, std::optional<Expr>& H,
                               std::optional<HamiltonianPair>& pair) {
    if (spec.dimension == 2) {
      if (const Entry* e = r.find("H")) H = parse_fn(*e);
    } else {
      const Entry* h1 = r.find("H1");
      const Entry* h2 = r.find("H2");
      if (h1 || h2) {
        if (!h1 || !h2) throw ModelError("H1 and H2 must be given together", r.line());
        pair = HamiltonianPair{parse_fn(*h1), parse_fn(*h2)};
      }
    }
  };
  auto in_source = [&](const Entry& e) { return ctx.parse_at(e.value, e.line); };
  read_hamiltonians(st, in_source, spec.hamiltonian, spec.pair);
  st.finish();

  // [canonical] / [standard]
  const std::string tkind = spec.dimension == 2 ? "canonical" : "standard";
  const std::string wrong = spec.dimension == 2 ? "standard" : "canonical";
  if (const Section* s = section(wrong))
    throw ModelError("section [" + wrong + "] does not apply to a " + std::to_string(spec.dimension) + "D model",
                     s->line);
  if (const Section* s = section(tkind)) {
    SectionReader tr(s, tkind);
    const Entry& tv = tr.require("vars");
    const auto targets = split_list(tv.value);
    if (targets.size() != cs.size()) throw ModelError("vars must list " + std::to_string(cs.size()) + " names", tv.line);
    TransformSpec t;
    t.kind = tkind;
    t.map.target = targets;
    try {
      t.target_chart = Chart(targets, time, params);
    } catch (const ModelError& e) {
      throw ModelError(e.what(), tv.line);
    }
    for (const auto& name : targets) t.map.components.push_back(in_source(tr.require(name)));
    auto in_target = [&](const Entry& e) { return ctx.parse_at(e.value, e.line, t.target_chart); };
    read_hamiltonians(tr, in_target, t.hamiltonian, t.pair);
    std::vector<const Entry*> flow;
    for (const auto& name : targets) flow.push_back(tr.find("flow_" + name));
    const bool any = std::any_of(flow.begin(), flow.end(), [](const Entry* e) { return e != nullptr; });
    if (any) {
      for (std::size_t i = 0; i < flow.size(); ++i) {
        if (!flow[i]) throw ModelError("missing flow_" + targets[i], tr.line());
        t.flow.push_back(in_target(*flow[i]));
      }
    }
    tr.finish();
    spec.transform = std::move(t);
  }

  // [conformal]
  if (const Section* s = section("conformal")) {
    SectionReader cr(s, "conformal");
    if (spec.dimension == 2) {
      Conformal2DSpec c;
      c.omega = in_source(cr.require("omega"));
      for (const auto& v : cs) {
        const Entry* th = cr.find("theta_" + v);
        c.theta.push_back(th ? in_source(*th) : Expr::constant(0.0));
        const Entry* z = cr.find("liouville_" + v);
        c.liouville.push_back(z ? in_source(*z) : Expr::constant(0.0));
      }
      c.factor = in_source(cr.require("factor"));
      c.hamiltonian = in_source(cr.require("H"));
      spec.conformal2d = std::move(c);
    } else {
      Conformal3DSpec c;
      const Entry& p = cr.require("params");
      const auto items = split_list(p.value);
      if (items.size() != 3) throw ModelError("conformal params needs three entries", p.line);
      for (const auto& item : items) c.params.push_back(ctx.parse_at(item, p.line));
      c.f1 = in_source(cr.require("F1"));
      c.f2 = in_source(cr.require("F2"));
      spec.conformal3d = std::move(c);
    }
    cr.finish();
  }

  // [errata]
  if (const Section* s = section("errata"))
    for (const auto& e : s->entries) {
      if (e.key != "note") throw ModelError("unknown key '" + e.key + "' in [errata]", e.line);
      spec.errata.push_back(e.value);
    }

  return spec;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string format_model(const ModelSpec& spec) {
  std::ostringstream out;
  const auto& cs = spec.chart.coordinates();
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  out << "[model]\nname = " << spec.name << "\ndim = " << spec.dimension << "\nvars = " << join(cs) << "\n";
  out << "time = " << spec.chart.time().value_or("none") << "\n";
  if (!spec.chart.parameters().empty()) {
    std::vector<std::string> ps;
    for (const auto& p : spec.chart.parameters()) ps.push_back(p.name + "=" + format_number(p.value.value_or(1.0)));
    out << "params = " << join(ps) << "\n";
  }
  if (!spec.domain.boxes.empty()) {
    out << "\n[domain]\n";
    for (const auto& [k, iv] : spec.domain.boxes)
      out << k << " = " << format_number(iv.lo) << ", " << format_number(iv.hi) << "\n";
  }
  out << "\n[dynamics]\n";
  for (std::size_t i = 0; i < cs.size(); ++i) out << cs[i] << " = " << to_string(spec.dynamics[i]) << "\n";

  const std::vector<std::string> aux_keys{"psi", "phi", "varphi"};
  out << "\n[structure]\nmultiplier = " << to_string(spec.multiplier) << "\n";
  if (spec.printed_multiplier) out << "printed_multiplier = " << to_string(*spec.printed_multiplier) << "\n";
  for (std::size_t i = 0; i < spec.auxiliary.size(); ++i)
    out << aux_keys[i] << " = " << to_string(spec.auxiliary[i]) << "\n";
  if (spec.hamiltonian) out << "H = " << to_string(*spec.hamiltonian) << "\n";
  if (spec.pair) out << "H1 = " << to_string(spec.pair->h1) << "\nH2 = " << to_string(spec.pair->h2) << "\n";

  if (spec.transform) {
    const auto& t = *spec.transform;
    out << "\n[" << t.kind << "]\nvars = " << join(t.map.target) << "\n";
    for (std::size_t i = 0; i < t.map.target.size(); ++i)
      out << t.map.target[i] << " = " << to_string(t.map.components[i]) << "\n";
    if (t.hamiltonian) out << "H = " << to_string(*t.hamiltonian) << "\n";
    if (t.pair) out << "H1 = " << to_string(t.pair->h1) << "\nH2 = " << to_string(t.pair->h2) << "\n";
    for (std::size_t i = 0; i < t.flow.size(); ++i)
      out << "flow_" << t.map.target[i] << " = " << to_string(t.flow[i]) << "\n";
  }
  if (spec.conformal2d) {
    const auto& c = *spec.conformal2d;
    out << "\n[conformal]\nomega = " << to_string(c.omega) << "\n";
    for (std::size_t i = 0; i < cs.size(); ++i) out << "theta_" << cs[i] << " = " << to_string(c.theta[i]) << "\n";
    for (std::size_t i = 0; i < cs.size(); ++i)
      out << "liouville_" << cs[i] << " = " << to_string(c.liouville[i]) << "\n";
    out << "factor = " << to_string(c.factor) << "\nH = " << to_string(c.hamiltonian) << "\n";
  }
  if (spec.conformal3d) {
    const auto& c = *spec.conformal3d;
    out << "\n[conformal]\nparams = " << to_string(c.params[0]) << ", " << to_string(c.params[1]) << ", "
        << to_string(c.params[2]) << "\nF1 = " << to_string(c.f1) << "\nF2 = " << to_string(c.f2) << "\n";
  }
  if (!spec.errata.empty()) {
    out << "\n[errata]\n";
    for (const auto& n : spec.errata) out << "note = " << n << "\n";
  }
  return out.str();
}

ModelSpec ModelSpec::with_parameters(const std::map<std::string, double, std::less<>>& values) const {
  ModelSpec out = *this;
  out.chart = chart.with_parameters(values);
  if (out.transform) out.transform->target_chart = transform->target_chart.with_parameters(values);
  return out;
}

ConformalParams ModelSpec::conformal_params() const {
  if (!conformal3d) throw ModelError("model '" + name + "' has no 3D conformal block");
  const Point p = chart.parameter_point();
  return {eval(conformal3d->params[0], p), eval(conformal3d->params[1], p), eval(conformal3d->params[2], p)};
}

double ModelSpec::conformal_factor() const {
  if (!conformal2d) throw ModelError("model '" + name + "' has no 2D conformal block");
  return eval(conformal2d->factor, chart.parameter_point());
}

}  // namespace hamreal
