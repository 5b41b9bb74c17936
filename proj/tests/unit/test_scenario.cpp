#include <doctest.h>

#include "scenario.hpp"

using namespace semidirac;
using namespace semidirac::cli;

namespace {

const char* kMinimal = R"(constants: {m: 1, c: 1, e: 1, hbar: 1}
initial:
  r: [0, 0, 0]
  p: [0.1, 0, 0]
spin:
  S: [0, 0, 2]
field:
  kind: uniform
  E0: [0.001, 0, 0]
  H0: [0, 0, 0]
integrator:
  T: 10
)";

}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.constants.hbar == 1.0);
  CHECK(s.integrator.scheme == Scheme::rk45_adaptive);
  CHECK(s.integrator.rtol == 1e-10);
  CHECK(s.integrator.T == 10.0);
  CHECK(s.initial.S == Vec3(0, 0, 1));
  CHECK(s.model == RhsModel::berry_full);
  CHECK(s.field.kind() == FieldKind::uniform);
  CHECK_FALSE(s.analysis.has_value());
  CHECK_FALSE(s.initial.chi.has_value());
}

TEST_CASE("dotted and nested keys are equivalent") {
  const Scenario a = parse_scenario(kMinimal);
  const Scenario b = parse_scenario(R"(initial.r: [0, 0, 0]
initial.p: [0.1, 0, 0]
spin.S: [0, 0, 2]
field.kind: uniform
field.E0: [0.001, 0, 0]
field.H0: [0, 0, 0]
integrator.T: 10
)");
  CHECK(a.initial.p == b.initial.p);
  CHECK(a.field.sample(Vec3::Zero(), 0).E == b.field.sample(Vec3::Zero(), 0).E);
}

TEST_CASE("validation errors") {
  SUBCASE("zero spin") {
    std::string text = kMinimal;
    text.replace(text.find("[0, 0, 2]"), 9, "[0, 0, 0]");
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("spin not normalizable"), ParseError);
  }
  SUBCASE("unknown key names the key and line") {
    std::string text = std::string(kMinimal) + "feild.E0: [1, 0, 0]\n";
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("'feild.E0'"), ParseError);
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("line 13"), ParseError);
  }
  SUBCASE("missing section") {
    CHECK_THROWS_WITH_AS(parse_scenario("integrator: {T: 1}\nfield: {kind: coulomb, Z: 1, softening: 0.1}\n"),
                         doctest::Contains("initial"), ParseError);
  }
  SUBCASE("missing T") {
    std::string text = kMinimal;
    text.replace(text.find("  T: 10"), 7, "  dt: 1");
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("integrator.T"), ParseError);
  }
  SUBCASE("inadmissible field") {
    std::string text = kMinimal;
    text.replace(text.find("kind: uniform"), 13, "kind: crossed_uniform");
    text.replace(text.find("H0: [0, 0, 0]"), 13, "H0: [1, 0, 0]");
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("field"), ParseError);
  }
  SUBCASE("wrong vector length") {
    std::string text = kMinimal;
    text.replace(text.find("p: [0.1, 0, 0]"), 14, "p: [0.1, 0]");
    CHECK_THROWS_WITH_AS(parse_scenario(text), doctest::Contains("initial.p"), ParseError);
  }
  SUBCASE("bad model") {
    CHECK_THROWS_WITH_AS(parse_scenario(std::string(kMinimal) + "model: dirac\n"),
                         doctest::Contains("model"), ParseError);
  }
}

TEST_CASE("spinor and sweep") {
  std::string text = kMinimal;
  text.replace(text.find("  S: [0, 0, 2]"), 14, "  chi: [1, 0, 1, 0]");
  text += "sweep:\n  hbar: [0.1, 0.01]\nanalysis: {kind: spin-hall, tol: 0.05}\n";
  const Scenario s = parse_scenario(text);
  REQUIRE(s.initial.chi.has_value());
  CHECK((s.initial.S - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK(s.hbar_sweep.size() == 2);
  REQUIRE(s.analysis.has_value());
  CHECK(*s.analysis->tol == 0.05);
}
