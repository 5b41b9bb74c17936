#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "semidirac/fw_verify.hpp"
#include "semidirac/integrator.hpp"
#include "semidirac/spin_dynamics.hpp"

using namespace semidirac;
using testutil::random_vec;

TEST_CASE("precession vector") {
  const PhysConstants k;
  SUBCASE("at rest in H") {
    const Vec3 w = precession_vector(Vec3::Zero(), {Vec3::Zero(), Vec3(0, 0, 0.1)}, k);
    CHECK(w.x() == 0.0);
    CHECK(w.y() == 0.0);
    CHECK(w.z() == doctest::Approx(-0.05));
  }
  SUBCASE("no fields") {
    CHECK(precession_vector(Vec3(0.3, 0.2, 0.1), {}, k).norm() == 0.0);
  }
  SUBCASE("spin-orbit term") {
    const Vec3 w = precession_vector(Vec3(1, 0, 0), {Vec3(0, 1e-3, 0), Vec3::Zero()}, k);
    CHECK(w.z() == doctest::Approx(1.46447e-4).epsilon(1e-5));
    CHECK(w.x() == 0.0);
  }
}

TEST_CASE("step_spin") {
  const SpinVec s = SpinVec::normalized(Vec3(1, 2, 3));
  CHECK(step_spin(s, Vec3::Zero(), 0.7).vec() == s.vec());
  CHECK(step_spin(s, 2.5 * s.vec(), 0.7).vec() == s.vec());
  SUBCASE("rotation oracle") {
    const double w = 0.8, t = 3.1;
    const SpinVec x = SpinVec::normalized(Vec3(1, 0, 0));
    SpinVec cur = x;
    for (int i = 0; i < 31; ++i) cur = step_spin(cur, Vec3(0, 0, w), t / 31);
    CHECK((cur.vec() - Vec3(std::cos(w * t), std::sin(w * t), 0)).norm() <= 1e-8);
  }
  CHECK_THROWS_WITH_AS(SpinVec::normalized(Vec3::Zero()), "spin not normalizable",
                       PreconditionError);
}

TEST_CASE("spinor to spin vector") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK((spin_from_spinor(Spinor2::checked(1.0, 0.0)).vec() - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK((spin_from_spinor(Spinor2::checked(r, r)).vec() - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK((spin_from_spinor(Spinor2::checked(r, Complex(0, r))).vec() - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(Spinor2::checked(1.0, 0.1), PreconditionError);
  CHECK_THROWS_AS(Spinor2::normalized(0.0, 0.0), PreconditionError);

  std::mt19937_64 rng(2);
  for (int n = 0; n < 50; ++n) {
    const Vec3 d = random_vec(rng, 1.0).normalized();
    CHECK((spin_from_spinor(Spinor2::from_direction(d)).vec() - d).norm() < 1e-14);
  }
}

TEST_CASE("spinor generator") {
  const PhysConstants k;
  SUBCASE("free motion") {
    const Vec3 p(0.4, 0.1, 0);
    CHECK(spinor_generator(p, Vec3::Zero(), {}, k).norm() == 0.0);
  }
  SUBCASE("pure Zeeman at rest") {
    const double h = 0.2;
    const PhysConstants kh = k.with_hbar(0.01);
    const FieldSample f{Vec3::Zero(), Vec3(0, 0, h)};
    const CMat2 G = spinor_generator(Vec3::Zero(), lorentz_force(Vec3::Zero(), f, kh), f, kh);
    Eigen::SelfAdjointEigenSolver<CMat2> eig(G);
    // Generator is a rate; times hbar it is the Zeeman energy +-(e hbar c h / 2 m c^2).
    CHECK(kh.hbar * eig.eigenvalues()(1) == doctest::Approx(kh.hbar * h / 2.0));
    CHECK(kh.hbar * eig.eigenvalues()(0) == doctest::Approx(-kh.hbar * h / 2.0));
  }
  SUBCASE("hermitian for random inputs") {
    std::mt19937_64 rng(4);
    for (int n = 0; n < 100; ++n) {
      const Vec3 p = random_vec(rng, 3.0);
      const FieldSample f{random_vec(rng, 0.3), random_vec(rng, 0.3)};
      CHECK(hermiticity_defect(spinor_generator(p, lorentz_force(p, f, k), f, k)) <= 1e-12);
    }
  }
}

TEST_CASE("delta E matrix at rest") {
  const PhysConstants k;
  const CMat2 d = delta_E_matrix(Vec3::Zero(), Vec3(0, 0, 0.1), k);
  CHECK(d(0, 0).real() == doctest::Approx(-0.05));
  CHECK(d(1, 1).real() == doctest::Approx(0.05));
}

TEST_CASE("generator exponential and the ordered product") {
  const PhysConstants k;
  std::mt19937_64 rng(9);
  const Vec3 p0 = random_vec(rng, 0.5);
  const FieldSample f{Vec3(0.02, -0.01, 0.03), Vec3(0.01, 0.04, -0.02)};

  SUBCASE("exponential of a constant generator") {
    const CMat2 G = spinor_generator(p0, lorentz_force(p0, f, k), f, k);
    const CMat2 u = generator_exponential(G, 0.37);
    CHECK((u * u.adjoint() - CMat2::Identity()).norm() < 1e-14);
    Eigen::ComplexEigenSolver<CMat2> eig(G);
    CMat2 ref = eig.eigenvectors() *
                (Complex(0, 0.37) * eig.eigenvalues()).array().exp().matrix().asDiagonal() *
                eig.eigenvectors().inverse();
    CHECK((u - ref).norm() < 1e-13);
  }

  SUBCASE("ordered product converges at second order") {
    // Classical orbit p(t) drives the generator; compare the product of
    // exponentials against a tight ODE solution of d chi/dt = i G chi.
    const double T = 20.0;
    auto p_at = [&](double t) {
      ode::State y(3);
      y = p0;
      const ode::Rhs f_p = [&](double, const ode::State& s, ode::State& d) {
        d = lorentz_force(Vec3(s), f, k);
      };
      const int n = 400;
      for (int i = 0; i < n; ++i) y = ode::rk4_step(f_p, t * i / n, y, t / n);
      return Vec3(y);
    };
    const CVec2 chi0 = Spinor2::from_direction(Vec3(0.3, -0.2, 0.9)).vec();
    const ode::Rhs spinor_rhs = [&](double t, const ode::State& y, ode::State& d) {
      const Vec3 p = p_at(t);
      const CMat2 G = spinor_generator(p, lorentz_force(p, f, k), f, k);
      const CVec2 c(Complex(y(0), y(1)), Complex(y(2), y(3)));
      const CVec2 dc = Complex(0, 1) * (G * c);
      d.resize(4);
      d << dc(0).real(), dc(0).imag(), dc(1).real(), dc(1).imag();
    };
    ode::State y(4);
    y << chi0(0).real(), chi0(0).imag(), chi0(1).real(), chi0(1).imag();
    const int fine = 200;
    for (int i = 0; i < fine; ++i) y = ode::rk4_step(spinor_rhs, T * i / fine, y, T / fine);
    const CVec2 exact(Complex(y(0), y(1)), Complex(y(2), y(3)));

    auto product = [&](int n) {
      CVec2 c = chi0;
      const double dt = T / n;
      for (int i = 0; i < n; ++i) {
        const Vec3 p = p_at((i + 0.5) * dt);
        c = generator_exponential(spinor_generator(p, lorentz_force(p, f, k), f, k), dt) * c;
      }
      return c;
    };
    const double e1 = (product(10) - exact).norm();
    const double e2 = (product(20) - exact).norm();
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }
}
