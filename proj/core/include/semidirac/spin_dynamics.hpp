#pragma once

#include "semidirac/em_fields.hpp"
#include "semidirac/types.hpp"

namespace semidirac {

/// Normalised two-component polarisation spinor.
class Spinor2 {
 public:
  Spinor2() : chi_(1.0, 0.0) {}
  /// Normalises (a, b); throws PreconditionError for a zero vector.
  static Spinor2 normalized(Complex a, Complex b);
  /// Wraps (a, b) as given; throws PreconditionError if |a|^2 + |b|^2 differs
  /// from one by more than `tol`.
  static Spinor2 checked(Complex a, Complex b, double tol = 1e-6);
  /// A spinor whose spin expectation is the unit vector along S.
  static Spinor2 from_direction(const Vec3& S);

  [[nodiscard]] const CVec2& vec() const { return chi_; }
  [[nodiscard]] double norm() const { return chi_.norm(); }

 private:
  explicit Spinor2(CVec2 v) : chi_(std::move(v)) {}
  CVec2 chi_;
};

/// Unit classical spin vector.
class SpinVec {
 public:
  SpinVec() : s_(0.0, 0.0, 1.0) {}
  /// Normalises; throws PreconditionError("spin not normalizable") if |S| == 0.
  static SpinVec normalized(const Vec3& s);
  /// Wraps without normalising (for states produced by an integrator).
  static SpinVec raw(const Vec3& s) { return SpinVec(s); }

  [[nodiscard]] const Vec3& vec() const { return s_; }

 private:
  explicit SpinVec(Vec3 s) : s_(std::move(s)) {}
  Vec3 s_;
};

/// Omega with dS/dt = Omega x S:
/// Omega = -[(e c / 2E_p) H + (e c^2 / (2E_p(E_p + m c^2))) E x p].
Vec3 precession_vector(const Vec3& p, const FieldSample& f, const PhysConstants& k);

/// Advances dS/dt = Omega x S over dt with constant Omega by an exact rotation.
/// S is returned bit-identical when Omega x S vanishes.
SpinVec step_spin(const SpinVec& S, const Vec3& omega, double dt);

/// Spin-magnetic energy operator
/// -(e hbar c / 2E_p) sigma.H - (e c / E_p) L.H,  L = hbar p x A_p.
CMat2 delta_E_matrix(const Vec3& p, const Vec3& H, const PhysConstants& k);

/// Hermitian generator G of d chi/dt = i G chi, as a rate:
/// G = -deltaE/hbar + A_p . pdot, with pdot the classical Lorentz force. The
/// U(1) part is dropped.
CMat2 spinor_generator(const Vec3& p, const Vec3& pdot, const FieldSample& f,
                       const PhysConstants& k);

/// S_k = <chi|sigma_k|chi>. Rejects spinors whose norm is off by more than 1e-6.
SpinVec spin_from_spinor(const Spinor2& chi);

/// exp(i G dt) for Hermitian 2x2 G.
CMat2 generator_exponential(const CMat2& G, double dt);

/// Classical Lorentz force e E + (e c / E_p) p x H.
Vec3 lorentz_force(const Vec3& p, const FieldSample& f, const PhysConstants& k);

}  // namespace semidirac
