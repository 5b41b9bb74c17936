#include "semidirac/spin_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "semidirac/fw_verify.hpp"

namespace semidirac {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Spinor2 Spinor2::normalized(Complex a, Complex b) {
  CVec2 v(a, b);
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw PreconditionError("spinor not normalizable");
  return Spinor2(v / n);
}

Spinor2 Spinor2::checked(Complex a, Complex b, double tol) {
  CVec2 v(a, b);
  if (std::abs(v.squaredNorm() - 1.0) > tol) throw PreconditionError("spinor is not normalized");
  return Spinor2(v);
}

Spinor2 Spinor2::from_direction(const Vec3& S) {
  const Vec3 n = SpinVec::normalized(S).vec();
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double phi = std::atan2(n.y(), n.x());
  return Spinor2(CVec2(std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi)));
}

SpinVec SpinVec::normalized(const Vec3& s) {
  const double n = s.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw PreconditionError("spin not normalizable");
  return SpinVec(s / n);
}

Vec3 precession_vector(const Vec3& p, const FieldSample& f, const PhysConstants& k) {
  const double ep = energy(p, k);
  const double mc2 = k.m * k.c * k.c;
  return -((k.e * k.c / (2.0 * ep)) * f.H +
           (k.e * k.c * k.c / (2.0 * ep * (ep + mc2))) * f.E.cross(p));
}

SpinVec step_spin(const SpinVec& S, const Vec3& omega, double dt) {
  const Vec3& s = S.vec();
  const Vec3 axis_cross = omega.cross(s);
  if (axis_cross.isZero(0.0)) return S;
  const double w = omega.norm();
  const Vec3 n = omega / w;
  const double th = w * dt;
  // Rodrigues rotation about n by angle w dt.
  return SpinVec::raw(s * std::cos(th) + n.cross(s) * std::sin(th) +
                      n * (n.dot(s)) * (1.0 - std::cos(th)));
}

CMat2 delta_E_matrix(const Vec3& p, const Vec3& H, const PhysConstants& k) {
  const double ep = energy(p, k);
  const MatrixVec2 a = berry_connection_closed(p, k);
  // L = hbar p x A
  const MatrixVec2 L = {k.hbar * (p.y() * a[2] - p.z() * a[1]),
                        k.hbar * (p.z() * a[0] - p.x() * a[2]),
                        k.hbar * (p.x() * a[1] - p.y() * a[0])};
  return -(k.e * k.hbar * k.c / (2.0 * ep)) * sigma_dot(H) - (k.e * k.c / ep) * dot(L, H);
}

CMat2 spinor_generator(const Vec3& p, const Vec3& pdot, const FieldSample& f,
                       const PhysConstants& k) {
  const double ep = energy(p, k);
  const MatrixVec2 a = berry_connection_closed(p, k);
  const MatrixVec2 p_cross_a = {p.y() * a[2] - p.z() * a[1], p.z() * a[0] - p.x() * a[2],
                                p.x() * a[1] - p.y() * a[0]};
  // deltaE / hbar, evaluated without dividing so hbar = 0 stays finite.
  const CMat2 dE_rate = -(k.e * k.c / (2.0 * ep)) * sigma_dot(f.H) - (k.e * k.c / ep) * dot(p_cross_a, f.H);
  const CMat2 g = -dE_rate + dot(a, pdot);
  return 0.5 * (g + g.adjoint());
}

SpinVec spin_from_spinor(const Spinor2& chi) {
  if (std::abs(chi.vec().squaredNorm() - 1.0) > 1e-6)
    throw PreconditionError("spinor is not normalized");
  const auto& s = pauli_matrices();
  const CVec2& v = chi.vec();
  Vec3 out;
  for (int i = 0; i < 3; ++i) out(i) = (v.adjoint() * s[i] * v)(0).real();
  return SpinVec::raw(out);
}

CMat2 generator_exponential(const CMat2& G, double dt) {
  const auto& s = pauli_matrices();
  const double g0 = 0.5 * (G(0, 0) + G(1, 1)).real();
  Vec3 g;
  for (int i = 0; i < 3; ++i) g(i) = 0.5 * (s[i] * G).trace().real();
  const double w = g.norm();
  CMat2 out = std::cos(w * dt) * CMat2::Identity();
  if (w > 0.0) out += kI * std::sin(w * dt) * sigma_dot(g / w);
  return std::polar(1.0, g0 * dt) * out;
}

Vec3 lorentz_force(const Vec3& p, const FieldSample& f, const PhysConstants& k) {
  return k.e * f.E + (k.e * k.c / energy(p, k)) * p.cross(f.H);
}

}  // namespace semidirac
