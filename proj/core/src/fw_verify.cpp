#include "semidirac/fw_verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace semidirac {

namespace {

constexpr Complex kI{0.0, 1.0};

template <typename F>
CMat4 hermitian_function(const CMat4& m, F&& f) {
  Eigen::SelfAdjointEigenSolver<CMat4> es(m);
  Eigen::Vector4d w = es.eigenvalues();
  for (int i = 0; i < 4; ++i) w(i) = f(w(i));
  return es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const CMat4& m) {
  Eigen::SelfAdjointEigenSolver<CMat4> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMat4 fw_numerator(const CMat4& ebar, const Vec3& p, const PhysConstants& k) {
  const auto& d = dirac_matrices();
  const double mc2 = k.m * k.c * k.c;
  return ebar + mc2 * CMat4::Identity() + d.beta * alpha_dot(p) * k.c;
}

}  // namespace

void PhysConstants::validate() const {
  if (!std::isfinite(m) || !std::isfinite(c) || !std::isfinite(e) || !std::isfinite(hbar))
    throw PreconditionError("physical constants must be finite");
  if (m <= 0.0) throw PreconditionError("mass must be positive (m = 0 is unsupported)");
  if (c <= 0.0) throw PreconditionError("speed of light must be positive");
  if (hbar < 0.0) throw PreconditionError("hbar must be non-negative");
}

double energy(const Vec3& p, const PhysConstants& k) {
  const double mc2 = k.m * k.c * k.c;
  return std::sqrt(mc2 * mc2 + p.squaredNorm() * k.c * k.c);
}

const std::array<CMat2, 3>& pauli_matrices() {
  static const std::array<CMat2, 3> s = [] {
    std::array<CMat2, 3> out;
    out[0] << 0.0, 1.0, 1.0, 0.0;
    out[1] << 0.0, -kI, kI, 0.0;
    out[2] << 1.0, 0.0, 0.0, -1.0;
    return out;
  }();
  return s;
}

const DiracMatrices& dirac_matrices() {
  static const DiracMatrices d = [] {
    DiracMatrices out;
    const auto& s = pauli_matrices();
    out.beta = CMat4::Zero();
    out.beta.topLeftCorner<2, 2>() = CMat2::Identity();
    out.beta.bottomRightCorner<2, 2>() = -CMat2::Identity();
    for (int i = 0; i < 3; ++i) {
      out.alpha[i] = CMat4::Zero();
      out.alpha[i].topRightCorner<2, 2>() = s[i];
      out.alpha[i].bottomLeftCorner<2, 2>() = s[i];
      out.sigma[i] = CMat4::Zero();
      out.sigma[i].topLeftCorner<2, 2>() = s[i];
      out.sigma[i].bottomRightCorner<2, 2>() = s[i];
    }
    return out;
  }();
  return d;
}

CMat2 dot(const MatrixVec2& v, const Vec3& a) {
  return v[0] * a.x() + v[1] * a.y() + v[2] * a.z();
}

CMat2 sigma_dot(const Vec3& a) { return dot(pauli_matrices(), a); }

CMat4 Sigma_dot(const Vec3& a) {
  const auto& d = dirac_matrices();
  return d.sigma[0] * a.x() + d.sigma[1] * a.y() + d.sigma[2] * a.z();
}

CMat4 alpha_dot(const Vec3& a) {
  const auto& d = dirac_matrices();
  return d.alpha[0] * a.x() + d.alpha[1] * a.y() + d.alpha[2] * a.z();
}

CMat4 dirac_hamiltonian(const Vec3& p, const PhysConstants& k) {
  return alpha_dot(p) * k.c + dirac_matrices().beta * (k.m * k.c * k.c);
}

CMat4 ebar_exact(const Vec3& p, const Vec3& H, const PhysConstants& k) {
  const double mc2 = k.m * k.c * k.c;
  const double base = mc2 * mc2 + p.squaredNorm() * k.c * k.c;
  const double zeeman = std::abs(k.e) * k.hbar * k.c * H.norm();
  if (!(zeeman < base)) {
    std::ostringstream msg;
    msg << "inadmissible field: |e| hbar c |H| = " << zeeman
        << " >= m^2c^4 + p^2c^2 = " << base;
    throw PreconditionError(msg.str());
  }
  const CMat4 arg = base * CMat4::Identity() - k.e * k.hbar * k.c * Sigma_dot(H);
  if (min_eigenvalue(arg) <= 0.0) throw PreconditionError("square-root argument not positive definite");
  return hermitian_function(arg, [](double x) { return std::sqrt(x); });
}

CMat4 ebar_expansion(const Vec3& p, const Vec3& H, const PhysConstants& k) {
  const double ep = energy(p, k);
  return ep * CMat4::Identity() - (k.e * k.hbar * k.c / (2.0 * ep)) * Sigma_dot(H);
}

CMat4 fw_unitary(const Vec3& p, const Vec3& H, const PhysConstants& k) {
  const CMat4 n = fw_numerator(ebar_exact(p, H, k), p, k);
  const CMat4 gram = n.adjoint() * n;
  return n * hermitian_function(gram, [](double x) { return 1.0 / std::sqrt(x); });
}

CMat4 fw_unitary_literal(const Vec3& p, const Vec3& H, const PhysConstants& k) {
  const CMat4 eb = ebar_exact(p, H, k);
  const double mc2 = k.m * k.c * k.c;
  const CMat4 denom_sq = 2.0 * eb * (eb + mc2 * CMat4::Identity());
  // eb and eb + mc^2 commute, so denom_sq is Hermitian.
  const CMat4 herm = 0.5 * (denom_sq + denom_sq.adjoint());
  return fw_numerator(eb, p, k) * hermitian_function(herm, [](double x) { return 1.0 / std::sqrt(x); });
}

CMat4 fw_unitary_free(const Vec3& p, const PhysConstants& k) {
  const double ep = energy(p, k);
  const double mc2 = k.m * k.c * k.c;
  const CMat4 n = fw_numerator(ep * CMat4::Identity(), p, k);
  return n / std::sqrt(2.0 * ep * (ep + mc2));
}

CMat4 zeeman_dressed_hamiltonian(const Vec3& p, const Vec3& H, const PhysConstants& k) {
  const CMat4 u0 = fw_unitary_free(p, k);
  const CMat4 h = u0.adjoint() * dirac_matrices().beta * ebar_exact(p, H, k) * u0;
  return 0.5 * (h + h.adjoint());
}

DiagonalizationResidual diagonalization_residual(const Vec3& p, const Vec3& H,
                                                 const PhysConstants& k) {
  const CMat4 u = fw_unitary(p, H, k);
  const CMat4 t = u * zeeman_dressed_hamiltonian(p, H, k) * u.adjoint();
  const double ep = energy(p, k);
  const CMat2 expected =
      ep * CMat2::Identity() - (k.e * k.hbar * k.c / (2.0 * ep)) * sigma_dot(H);
  DiagonalizationResidual r;
  r.offdiag_norm = std::hypot(t.topRightCorner<2, 2>().norm(), t.bottomLeftCorner<2, 2>().norm());
  r.block_energy_error = (t.topLeftCorner<2, 2>() - expected).norm();
  return r;
}

MatrixVec2 berry_connection_closed(const Vec3& p, const PhysConstants& k) {
  const double ep = energy(p, k);
  const double kappa = k.c * k.c / (2.0 * ep * (ep + k.m * k.c * k.c));
  const auto& s = pauli_matrices();
  // (p x sigma)_i = eps_ijk p_j sigma_k
  return {kappa * (p.y() * s[2] - p.z() * s[1]),
          kappa * (p.z() * s[0] - p.x() * s[2]),
          kappa * (p.x() * s[1] - p.y() * s[0])};
}

namespace {

MatrixVec2 connection_by_differences(const Vec3& p, const PhysConstants& k, double h) {
  const CMat4 u = fw_unitary_free(p, k);
  MatrixVec2 a;
  for (int i = 0; i < 3; ++i) {
    Vec3 dp = Vec3::Zero();
    dp(i) = h;
    const CMat4 du = (fw_unitary_free(p + dp, k) - fw_unitary_free(p - dp, k)) / (2.0 * h);
    a[i] = (kI * u * du.adjoint()).topLeftCorner<2, 2>();
  }
  return a;
}

}  // namespace

NumericConnection berry_connection_numeric(const Vec3& p, const PhysConstants& k, double step) {
  if (step <= 0.0) step = 1e-4 * std::max(1.0, p.norm());
  NumericConnection out;
  out.A = connection_by_differences(p, k, step);
  const MatrixVec2 half = connection_by_differences(p, k, 0.5 * step);
  for (int i = 0; i < 3; ++i)
    out.richardson_gap = std::max(out.richardson_gap, (out.A[i] - half[i]).cwiseAbs().maxCoeff());
  out.step_ok = out.richardson_gap <= 1e-4;
  return out;
}

MatrixVec2 berry_curvature_matrix(const Vec3& p, const PhysConstants& k, CurlKind kind) {
  const double mc2 = k.m * k.c * k.c;
  const double ep = energy(p, k);
  const double kappa = k.c * k.c / (2.0 * ep * (ep + mc2));
  const double dkappa_de = -k.c * k.c * (2.0 * ep + mc2) / (2.0 * ep * ep * (ep + mc2) * (ep + mc2));
  const Vec3 grad_kappa = dkappa_de * p * (k.c * k.c / ep);
  const auto& s = pauli_matrices();

  // cross_sigma[j] = (p x sigma)_j, d_i (p x sigma)_j = eps_jil sigma_l
  const MatrixVec2 cross_sigma = {p.y() * s[2] - p.z() * s[1], p.z() * s[0] - p.x() * s[2],
                                  p.x() * s[1] - p.y() * s[0]};
  auto eps = [](int a, int b, int c) -> double {
    return static_cast<double>((a - b) * (b - c) * (c - a)) / 2.0;
  };
  auto d_conn = [&](int i, int j) {
    CMat2 r = grad_kappa(i) * cross_sigma[j];
    for (int l = 0; l < 3; ++l) r += kappa * eps(j, i, l) * s[l];
    return r;
  };

  const MatrixVec2 a = berry_connection_closed(p, k);
  MatrixVec2 f;
  for (int kk = 0; kk < 3; ++kk) {
    const int i = (kk + 1) % 3;
    const int j = (kk + 2) % 3;
    f[kk] = d_conn(i, j) - d_conn(j, i);
    if (kind == CurlKind::non_abelian) f[kk] -= kI * (a[i] * a[j] - a[j] * a[i]);
  }
  return f;
}

MatrixVec2 berry_curvature_closed(const Vec3& p, const PhysConstants& k) {
  const double mc2 = k.m * k.c * k.c;
  const double ep = energy(p, k);
  const double pref = -std::pow(k.c, 4) / (2.0 * ep * ep * ep);
  const CMat2 sp = sigma_dot(p);
  const auto& s = pauli_matrices();
  MatrixVec2 f;
  for (int i = 0; i < 3; ++i) f[i] = pref * (k.m * s[i] + sp * (p(i) / (ep + mc2)));
  return f;
}

double unitarity_defect(const CMat4& u) { return (u * u.adjoint() - CMat4::Identity()).norm(); }

}  // namespace semidirac
