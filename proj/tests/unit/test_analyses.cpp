#include <doctest.h>

#include <cmath>
#include <vector>

#include "semidirac/analyses.hpp"

using namespace semidirac;

namespace {

IntegratorSettings adaptive(double T, double every) {
  IntegratorSettings s;
  s.T = T;
  s.output_every = every;
  s.rtol = 1e-12;
  s.atol = 1e-14;
  return s;
}

}  // namespace

TEST_CASE("relative error uses a floor") {
  CHECK(relative_error(1.1, 1.0) == doctest::Approx(0.1));
  CHECK(relative_error(1e-3, 0.0, 1e-2) == doctest::Approx(0.1));
}

TEST_CASE("linear fit") {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  const LinearFit f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.5));
  CHECK(f.intercept == doctest::Approx(-1.0));
  CHECK(f.slope_stderr < 1e-12);
  CHECK_THROWS_AS(linear_fit(std::vector<double>{1, 1, 1}, std::vector<double>{0, 1, 2}),
                  PreconditionError);
}

TEST_CASE("frequency estimator on the classical orbit") {
  const PhysConstants k;
  const double H = 0.05, p = 0.01;
  ParticleState s;
  s.p = Vec3(p, 0, 0);
  const Trajectory t = integrate(s, FieldConfig::uniform(Vec3::Zero(), Vec3(0, 0, H)),
                                 RhsModel::classical_lorentz, k, adaptive(1400.0, 0.1));
  const double w = measure_frequency(t, Vec3(1, 0, 0));
  const double expected = H * (1.0 - p * p / 2.0);
  CHECK(std::abs(w - expected) / expected <= 1e-4);
}

TEST_CASE("frequency estimator needs eight periods") {
  const PhysConstants k;
  ParticleState s;
  s.p = Vec3(0.1, 0, 0);
  const Trajectory t = integrate(s, FieldConfig::uniform(Vec3::Zero(), Vec3(0, 0, 0.01)),
                                 RhsModel::classical_lorentz, k, adaptive(1300.0, 0.6));
  CHECK_THROWS_WITH_AS(measure_frequency(t, Vec3(1, 0, 0)), doctest::Contains("insufficient data"),
                       PreconditionError);
}

TEST_CASE("spin-Hall drift") {
  ParticleState s;
  s.p = Vec3(0.1, 0, 0);
  s.S = Vec3(0, 0, 1);
  const Vec3 E(1e-4, 0, 0);
  const FieldConfig cfg = FieldConfig::uniform(E, Vec3::Zero());
  SUBCASE("predicted value") {
    const PhysConstants k;
    const Trajectory t = integrate(s, cfg, RhsModel::berry_full, k, adaptive(20.0, 0.1));
    const AnalysisReport r = spin_hall_drift(t, E, k);
    CHECK(r.predicted == doctest::Approx(-5e-5));
    CHECK(*r.extra("direction_y") == 1.0);
    CHECK(r.pass);
  }
  SUBCASE("no drift at hbar = 0") {
    const PhysConstants k = PhysConstants{}.with_hbar(0.0);
    const Trajectory t = integrate(s, cfg, RhsModel::berry_full, k, adaptive(20.0, 0.1));
    const AnalysisReport r = spin_hall_drift(t, E, k);
    CHECK(r.measured == 0.0);
    CHECK(r.predicted == 0.0);
  }
  SUBCASE("preconditions") {
    const PhysConstants k;
    const Trajectory t = integrate(s, cfg, RhsModel::berry_full, k, adaptive(1.0, 0.1));
    CHECK_THROWS_AS(spin_hall_drift(t, Vec3(0, 0, 1e-4), k), PreconditionError);
  }
}

TEST_CASE("monopole check") {
  const PhysConstants k;
  const FieldConfig cfg = FieldConfig::uniform(Vec3(0, 0.01, 0), Vec3::Zero());
  ParticleState s;
  s.p = Vec3(20, 0, 0);
  s.S = Vec3(1, 0, 0);
  const AnalysisReport plus = monopole_check(s, cfg, k);
  CHECK(plus.relative_error <= 0.0025 * 1.01);
  s.S = -s.S;
  const AnalysisReport minus = monopole_check(s, cfg, k);
  CHECK(*minus.extra("measured_z") == doctest::Approx(-*plus.extra("measured_z")).epsilon(1e-9));

  SUBCASE("zero helicity with p parallel to E") {
    ParticleState q;
    q.p = Vec3(0, 20, 0);
    q.S = Vec3(1, 0, 0);
    const AnalysisReport r = monopole_check(q, cfg, k);
    CHECK(r.predicted == 0.0);
    CHECK(r.pass);
  }
  SUBCASE("rejects slow electrons and magnetic fields") {
    ParticleState q;
    q.p = Vec3(5, 0, 0);
    CHECK_THROWS_AS(monopole_check(q, cfg, k), PreconditionError);
    q.p = Vec3(20, 0, 0);
    CHECK_THROWS_AS(monopole_check(q, FieldConfig::uniform(Vec3::Zero(), Vec3(0, 0, 1e-3)), k),
                    PreconditionError);
  }
}

TEST_CASE("cyclotron shift") {
  const Vec3 H(0, 0, 0.01);
  const FieldConfig cfg = FieldConfig::uniform(Vec3::Zero(), H);
  ParticleState s;
  s.p = Vec3(0.1, 0, 0);
  s.S = Vec3(0, 0, 1);
  const auto st = adaptive(6500.0, 0.6);
  SUBCASE("both models agree at hbar = 0") {
    const PhysConstants k = PhysConstants{}.with_hbar(0.0);
    const Trajectory a = integrate(s, cfg, RhsModel::berry_full, k, st);
    const Trajectory b = integrate(s, cfg, RhsModel::pauli_canonical, k, st);
    const AnalysisReport r = cyclotron_shift(a, b, nullptr, H, k);
    CHECK(*r.extra("difference_measured") == 0.0);
    CHECK(r.measured == doctest::Approx(0.01 / std::sqrt(1.01)).epsilon(1e-6));
    CHECK(r.relative_error <= 1e-3);
  }
  SUBCASE("flipping mu flips the spin term") {
    const PhysConstants k = PhysConstants{}.with_hbar(0.01);
    const Trajectory ref = integrate(s, cfg, RhsModel::berry_full, k.with_hbar(0.0), st);
    auto term = [&](double mu) {
      ParticleState q = s;
      q.S = Vec3(0, 0, mu);
      const Trajectory a = integrate(q, cfg, RhsModel::berry_full, k, st);
      const Trajectory b = integrate(q, cfg, RhsModel::pauli_canonical, k, st);
      return *cyclotron_shift(a, b, &ref, H, k).extra("spin_term_full");
    };
    const double up = term(1.0), down = term(-1.0);
    CHECK(up * down < 0.0);
    CHECK(up == doctest::Approx(-down).epsilon(1e-3));
  }
  SUBCASE("preconditions") {
    const PhysConstants k;
    const Trajectory a = integrate(s, cfg, RhsModel::berry_full, k, adaptive(10.0, 1.0));
    CHECK_THROWS_AS(cyclotron_shift(a, a, nullptr, Vec3::Zero(), k), PreconditionError);
    ParticleState q = s;
    q.S = Vec3(1, 0, 0);
    const Trajectory b = integrate(q, cfg, RhsModel::berry_full, k, adaptive(10.0, 1.0));
    CHECK_THROWS_AS(cyclotron_shift(b, b, nullptr, H, k), PreconditionError);
  }
}

TEST_CASE("helicity drift") {
  const Vec3 H(0, 0, 0.01);
  const FieldConfig cfg = FieldConfig::uniform(Vec3::Zero(), H);
  ParticleState s;
  s.p = Vec3(20, 0, 0);
  s.S = Vec3(1, 0, 0);
  SUBCASE("predicted value") {
    const PhysConstants k;
    const Trajectory t = integrate(s, cfg, RhsModel::berry_full, k, adaptive(50.0, 0.5));
    const AnalysisReport r = helicity_drift(t, H, k);
    CHECK(r.predicted == doctest::Approx(-0.01 / 800.0));
  }
  SUBCASE("zero helicity") {
    const PhysConstants k;
    ParticleState q = s;
    q.S = Vec3(0, 1, 0);
    const Trajectory t = integrate(q, cfg, RhsModel::berry_full, k, adaptive(1.0, 0.1));
    const AnalysisReport r = helicity_drift(t, H, k);
    CHECK(r.predicted == 0.0);
  }
  SUBCASE("hbar = 0") {
    const PhysConstants k = PhysConstants{}.with_hbar(0.0);
    const Trajectory t = integrate(s, cfg, RhsModel::berry_full, k, adaptive(50.0, 0.5));
    CHECK(helicity_drift(t, H, k).measured == 0.0);
  }
}

TEST_CASE("report rendering") {
  AnalysisReport r;
  r.observable = "x";
  r.measured = 1.0;
  r.predicted = 2.0;
  r.pass = true;
  r.extras.emplace_back("ratio", 0.5);
  const std::string kv = r.to_key_values();
  CHECK(kv.find("observable=x\n") != std::string::npos);
  CHECK(kv.find("ratio=0.5\n") != std::string::npos);
  CHECK(kv.find("pass=true\n") != std::string::npos);
  CHECK(r.to_text().find("PASS") != std::string::npos);
}
