#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "semidirac/em_fields.hpp"

using namespace semidirac;

TEST_CASE("uniform field samples") {
  const FieldConfig cfg = FieldConfig::uniform(Vec3(1e-3, 0, 0), Vec3::Zero());
  for (const Vec3& r : {Vec3(0, 0, 0), Vec3(3, -2, 7)}) {
    const FieldSample f = cfg.sample(r, 4.0);
    CHECK(f.E == Vec3(1e-3, 0, 0));
    CHECK(f.H == Vec3::Zero());
  }
  CHECK(cfg.kind() == FieldKind::uniform);
  CHECK(cfg.h_uniform());
  CHECK(*cfg.potential(Vec3(2, 0, 0), 0.0) == doctest::Approx(-2e-3));
}

TEST_CASE("crossed uniform field requires orthogonal E and H") {
  CHECK_NOTHROW(FieldConfig::crossed_uniform(Vec3(1, 0, 0), Vec3(0, 0, 1)));
  CHECK_THROWS_AS(FieldConfig::crossed_uniform(Vec3(1, 0, 0), Vec3(1, 0, 1)), PreconditionError);
}

TEST_CASE("coulomb field") {
  const FieldConfig cfg = FieldConfig::coulomb(1.0, 1e-6);
  const FieldSample f = cfg.sample(Vec3(1, 0, 0), 0.0);
  CHECK(f.E.x() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.E.y() == 0.0);
  CHECK(f.H.norm() == 0.0);
  CHECK(*cfg.potential(Vec3(0, 2, 0), 0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(FieldConfig::coulomb(1.0, 0.0), PreconditionError);
  CHECK_THROWS_AS(FieldConfig::coulomb(1.0, -1.0), PreconditionError);

  SUBCASE("E-Jacobian matches differences") {
    const Vec3 r(0.7, -0.4, 0.5);
    const FieldJacobian j = cfg.e_jacobian(r, 0.0);
    for (int c = 0; c < 3; ++c) {
      Vec3 d = Vec3::Zero();
      d(c) = 1e-6;
      const Vec3 col = (cfg.sample(r + d, 0).E - cfg.sample(r - d, 0).E) / 2e-6;
      CHECK((j.col(c) - col).norm() < 1e-7);
    }
  }
  SUBCASE("E = -grad phi") {
    const Vec3 r(0.3, 0.9, -0.2);
    Vec3 grad;
    for (int c = 0; c < 3; ++c) {
      Vec3 d = Vec3::Zero();
      d(c) = 1e-6;
      grad(c) = (*cfg.potential(r + d, 0) - *cfg.potential(r - d, 0)) / 2e-6;
    }
    CHECK((cfg.sample(r, 0).E + grad).norm() < 1e-8);
  }
}

TEST_CASE("custom field passes samples through") {
  CustomField cf;
  cf.evaluate = [](const Vec3& r, double t) {
    return FieldSample{Vec3(std::sin(r.x()), t, 0.1), Vec3(0, 0, std::cos(r.y()))};
  };
  const FieldConfig cfg = FieldConfig::custom(cf);
  const Vec3 r(0.123, 0.456, 0.789);
  const FieldSample a = cfg.sample(r, 0.3);
  const FieldSample b = cf.evaluate(r, 0.3);
  CHECK(a.E == b.E);
  CHECK(a.H == b.H);
  CHECK_FALSE(cfg.has_potential());
  CHECK_FALSE(cfg.h_uniform());
  // Differenced Jacobian of H = (0, 0, cos y).
  const FieldJacobian j = cfg.h_jacobian(r, 0.0);
  CHECK(j(2, 1) == doctest::Approx(-std::sin(0.456)).epsilon(1e-8));
  CHECK(std::abs(j(2, 0)) < 1e-10);
}

TEST_CASE("field tensor") {
  SUBCASE("zero fields") {
    const FieldConfig cfg = FieldConfig::uniform(Vec3::Zero(), Vec3::Zero());
    CHECK(field_tensor(cfg, Vec3::Zero(), 0).norm() == 0.0);
  }
  SUBCASE("pure E along x") {
    const FieldConfig cfg = FieldConfig::uniform(Vec3(0.5, 0, 0), Vec3::Zero());
    const Eigen::Matrix4d f = field_tensor(cfg, Vec3::Zero(), 0);
    CHECK(f(0, 1) == 0.5);
    CHECK(f(1, 0) == -0.5);
    Eigen::Matrix4d rest = f;
    rest(0, 1) = rest(1, 0) = 0.0;
    CHECK(rest.norm() == 0.0);
  }
  SUBCASE("antisymmetric for random fields") {
    std::mt19937_64 rng(1);
    for (int n = 0; n < 20; ++n) {
      const FieldConfig cfg =
          FieldConfig::uniform(testutil::random_vec(rng, 1.0), testutil::random_vec(rng, 1.0));
      const Eigen::Matrix4d f = field_tensor(cfg, Vec3::Zero(), 0);
      CHECK((f + f.transpose()).norm() == 0.0);
      CHECK(f(1, 2) == cfg.sample(Vec3::Zero(), 0).H.z());
    }
  }
}

TEST_CASE("homogeneous Maxwell equations") {
  CHECK(maxwell_residual(FieldConfig::uniform(Vec3(1, 2, 3), Vec3(-1, 0.5, 2)), Vec3(1, 1, 1), 0.0,
                         1e-3) <= 1e-12);
  CHECK(maxwell_residual(FieldConfig::coulomb(1.0, 1e-3), Vec3(1.0, 0.5, -0.3), 0.0, 1e-3) <= 1e-8);

  CustomField monopole;
  monopole.evaluate = [](const Vec3& r, double) { return FieldSample{Vec3::Zero(), 0.1 * r}; };
  const double bad = maxwell_residual(FieldConfig::custom(monopole), Vec3(0.2, 0.1, 0.0), 0.0, 1e-3);
  CHECK(bad >= 1e-3);
  CHECK(bad > kMaxwellTolerance);
  CHECK_THROWS_AS(maxwell_residual(FieldConfig::coulomb(1, 1e-3), Vec3(1, 0, 0), 0, 0.0),
                  PreconditionError);
}
