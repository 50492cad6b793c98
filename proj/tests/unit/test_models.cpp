#include <algorithm>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "hamreal/models.hpp"
#include "hamreal/verify.hpp"

using namespace hamreal;

namespace {

constexpr const char* kMinimal = R"([model]
name = tiny
dim = 2
vars = x, y
params = k=2

[dynamics]
x = k*y
y = -x

[structure]
multiplier = 1
H = (x^2 + k*y^2)/2
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

template <class E>
std::string error_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

// Max |a - b| over the spatial field, multiplier and first integrals.
double model_distance(const ModelSpec& a, const ModelSpec& b, const SampleSet& pts) {
  double worst = residual_field(a.field(), b.field(), pts).max_abs;
  worst = std::max(worst, residual_expr(a.multiplier, b.multiplier, pts).max_abs);
  if (a.hamiltonian) worst = std::max(worst, residual_expr(*a.hamiltonian, *b.hamiltonian, pts).max_abs);
  if (a.pair) {
    worst = std::max(worst, residual_expr(a.pair->h1, b.pair->h1, pts).max_abs);
    worst = std::max(worst, residual_expr(a.pair->h2, b.pair->h2, pts).max_abs);
  }
  for (std::size_t i = 0; i < a.auxiliary.size(); ++i)
    worst = std::max(worst, residual_expr(a.auxiliary[i], b.auxiliary[i], pts).max_abs);
  return worst;
}

}  // namespace

TEST_CASE("get_model examples") {
  const auto& lu = get_model("lu");
  const SampleSet sp = sample_points(lu.chart, lu.domain, 50, 1);
  CHECK(residual_expr(lu.multiplier, parse("exp((alpha + beta - gamma)*t)", lu.chart), sp).max_abs == 0.0);
  CHECK(get_model("harmonic").multiplier.is_constant(1.0));

  const auto& qi = get_model("qi");
  REQUIRE(qi.transform);
  CHECK(qi.transform->kind == "standard");
  const SampleSet qp = sample_points(qi.chart, qi.domain, 50, 1);
  const std::vector<const char*> expected{"x*exp(t)", "y*exp(t)", "z*exp(beta*t)"};
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(residual_expr(qi.transform->map.components[i], parse(expected[i], qi.chart), qp).max_abs == 0.0);

  CHECK_THROWS_WITH_AS(get_model("lorenz"), doctest::Contains("harmonic"), ModelError);
}

TEST_CASE("list_models") {
  const auto names = list_models();
  CHECK(names.size() >= 8);
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(std::count(names.begin(), names.end(), "lu") == 1);
  CHECK(std::count(names.begin(), names.end(), "harmonic") == 1);
  for (const auto& n : names) CHECK(get_model(n).name == n);
}

TEST_CASE("registry parameter defaults") {
  const auto& lu = get_model("lu");
  CHECK(*lu.chart.parameter_value("alpha") == 36.0);
  CHECK(*lu.chart.parameter_value("beta") == 3.0);
  CHECK(*lu.chart.parameter_value("gamma") == 20.0);
  for (const auto& p : get_model("host_parasite").chart.parameters()) CHECK(p.value == 1.0);
}

TEST_CASE("errata notes are recorded") {
  for (const char* name : {"host_parasite", "gompertz", "kermack_mckendrick", "qi", "lu"})
    CHECK_MESSAGE(!get_model(name).errata.empty(), name);
  CHECK(get_model("harmonic").errata.empty());
}

TEST_CASE("parse_model minimal") {
  const auto m = parse_model(kMinimal);
  CHECK(m.name == "tiny");
  CHECK(m.dimension == 2);
  CHECK(m.chart.time() == std::optional<std::string>("t"));
  CHECK(*m.chart.parameter_value("k") == 2.0);
  CHECK(m.hamiltonian.has_value());
  CHECK(m.auxiliary.size() == 2);
  const auto r = verify_model(m, {100, 1, 1e-9});
  CHECK(r.pass);
}

TEST_CASE("parse_model errors") {
  CHECK(error_of<ModelError>(replace(kMinimal, "[dynamics]\nx = k*y\ny = -x\n", "")).find("[dynamics]") !=
        std::string::npos);
  CHECK(error_of<ModelError>(replace(kMinimal, "[structure]\nmultiplier = 1\nH = (x^2 + k*y^2)/2\n", ""))
            .find("[structure]") != std::string::npos);

  const auto undeclared = error_of<UndeclaredSymbol>(replace(kMinimal, "y = -x", "y = -x + z"));
  CHECK(undeclared.find("'z'") != std::string::npos);
  CHECK(undeclared.find("line 9") != std::string::npos);

  const auto syntax = error_of<ModelError>(replace(kMinimal, "x = k*y", "x = k*/y"));
  CHECK(syntax.find("line 8") != std::string::npos);

  CHECK(error_of<ModelError>(replace(kMinimal, "y = -x", "y = -x\nx = y")).find("duplicate key") !=
        std::string::npos);
  CHECK(error_of<ModelError>(replace(kMinimal, "dim = 2", "dim = 4")).find("dim") != std::string::npos);
  CHECK(error_of<ModelError>(replace(kMinimal, "[structure]", "[structure]\nH1 = x")).find("line") !=
        std::string::npos);
  CHECK(error_of<ModelError>(std::string(kMinimal) + "[bogus]\nk = 1\n").find("unknown section") !=
        std::string::npos);
  CHECK_THROWS_AS(load_model("/nonexistent/model"), ModelError);
}

TEST_CASE("comments, time = none and domain boxes") {
  std::string text = replace(kMinimal, "params = k=2", "params = k=2  # spring\ntime = none");
  text = replace(text, "[dynamics]", "[domain]\nx = 1, 3\n\n[dynamics]");
  const auto m = parse_model(text);
  CHECK_FALSE(m.chart.time());
  CHECK(m.domain.box("x", false).lo == 1.0);
  CHECK(m.domain.box("x", false).hi == 3.0);
  CHECK_THROWS_AS(parse_model(replace(text, "x = 1, 3", "x = 3, 1")), ModelError);
  // without a time symbol, t is undeclared
  CHECK_THROWS_AS(parse_model(replace(text, "x = k*y", "x = k*y*t")), UndeclaredSymbol);
}

TEST_CASE("define sections are substituted") {
  const std::string text = replace(kMinimal, "[dynamics]", "[define]\nw = k*y\n\n[dynamics]");
  const auto m = parse_model(replace(text, "x = k*y", "x = w"));
  const SampleSet sp = sample_points(m.chart, m.domain, 20, 3);
  CHECK(residual_expr(m.dynamics[0], parse("k*y", m.chart), sp).max_abs == 0.0);
  CHECK_FALSE(m.chart.declares("w"));
}

TEST_CASE("with_parameters rebinds values") {
  const auto& hp = get_model("host_parasite");
  const auto c0 = hp.with_parameters({{"c", 0.0}});
  CHECK(*c0.chart.parameter_value("c") == 0.0);
  CHECK(*c0.transform->target_chart.parameter_value("c") == 0.0);
  CHECK(c0.conformal_factor() == 0.0);
  CHECK_THROWS_AS(hp.with_parameters({{"zeta", 1.0}}), UndeclaredSymbol);
}

TEST_CASE("round trip through the file format") {
  for (const auto& name : list_models()) {
    const auto& m = get_model(name);
    const std::string text = format_model(m);
    const auto back = parse_model(text);
    CHECK(back.name == m.name);
    CHECK(back.dimension == m.dimension);
    CHECK(back.errata == m.errata);
    CHECK(back.transform.has_value() == m.transform.has_value());
    CHECK(back.conformal2d.has_value() == m.conformal2d.has_value());
    CHECK(back.conformal3d.has_value() == m.conformal3d.has_value());
    const SampleSet sp = sample_points(m.chart, m.domain, 100, 77);
    CHECK_MESSAGE(model_distance(m, back, sp) <= 1e-12, name);
    CHECK(format_model(back) == text);
  }

  // through an actual file
  const std::string path = "test_models_roundtrip.model";
  {
    std::ofstream f(path);
    f << format_model(get_model("host_parasite"));
  }
  const auto loaded = load_model(path);
  std::remove(path.c_str());
  const auto& hp = get_model("host_parasite");
  CHECK(model_distance(hp, loaded, sample_points(hp.chart, hp.domain, 100, 5)) <= 1e-12);
}

TEST_CASE("registry invariants") {
  for (const auto& name : list_models()) {
    const auto& m = get_model(name);
    const SampleSet sp = sample_points(m.chart, m.domain, 500, 42);
    const auto md = m.multiplier_data();
    CHECK_MESSAGE(jlm_residual(m.chart, m.field(), m.multiplier, sp).max_abs <= 1e-9, name);
    if (m.dimension == 2) CHECK_MESSAGE(exactness_residual_2d(md, sp).max_abs <= 1e-9, name);
    if (m.dimension == 3 && m.pair)
      CHECK_MESSAGE(matching_residual_3d(md, m.pair->h1, m.pair->h2, sp).spatial.max_abs <= 1e-9, name);
    if (m.transform) CHECK_MESSAGE(transform_residual(md, m.transform->map, sp).max_abs <= 1e-8, name);
    CHECK(registry_source(name).find("[model]") != std::string_view::npos);
  }
}
