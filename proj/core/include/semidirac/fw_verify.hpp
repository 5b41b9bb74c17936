#pragma once

// Matrix-level checks of the field-modified Foldy-Wouthuysen transformation
// and the momentum-space Berry connection/curvature it induces.
//
// Conventions: standard Dirac-Pauli representation,
//   beta = diag(I, -I),  alpha_i = [[0, s_i], [s_i, 0]],  Sigma_i = diag(s_i, s_i).

#include <array>

#include "semidirac/types.hpp"

namespace semidirac {

struct DiracMatrices {
  std::array<CMat4, 3> alpha;
  CMat4 beta;
  std::array<CMat4, 3> sigma;  // Sigma_k = diag(sigma_k, sigma_k)
};

const DiracMatrices& dirac_matrices();
const std::array<CMat2, 3>& pauli_matrices();

/// Vector of 2x2 matrices indexed by momentum direction.
using MatrixVec2 = std::array<CMat2, 3>;

CMat2 dot(const MatrixVec2& v, const Vec3& a);
CMat2 sigma_dot(const Vec3& a);
CMat4 Sigma_dot(const Vec3& a);
CMat4 alpha_dot(const Vec3& a);

/// c-number Dirac matrix alpha.p c + beta m c^2.
CMat4 dirac_hamiltonian(const Vec3& p, const PhysConstants& k);

/// Exact Hermitian square root of m^2c^4 + p^2c^2 - e hbar c Sigma.H.
/// Throws PreconditionError when the argument is not positive definite.
CMat4 ebar_exact(const Vec3& p, const Vec3& H, const PhysConstants& k);

/// First-order expansion E_p - (e hbar c / 2E_p) Sigma.H of ebar_exact.
CMat4 ebar_expansion(const Vec3& p, const Vec3& H, const PhysConstants& k);

/// Modified FW unitary. Numerator N = Ebar + mc^2 + beta alpha.p c; the
/// normalisation is the polar factor N (N^dagger N)^{-1/2}, which coincides
/// with the textbook sqrt(2E(E+mc^2)) denominator when H = 0 and keeps the
/// matrix unitary to rounding for H != 0.
CMat4 fw_unitary(const Vec3& p, const Vec3& H, const PhysConstants& k);

/// The same numerator divided by the matrix sqrt(2 Ebar (Ebar + mc^2)).
/// Unitary only up to O(hbar) when H != 0; kept for comparison.
CMat4 fw_unitary_literal(const Vec3& p, const Vec3& H, const PhysConstants& k);

/// Field-free FW unitary (H = 0).
CMat4 fw_unitary_free(const Vec3& p, const PhysConstants& k);

/// Dirac matrix whose field-free FW image is beta * Ebar. Reduces to
/// dirac_hamiltonian() at H = 0.
CMat4 zeeman_dressed_hamiltonian(const Vec3& p, const Vec3& H, const PhysConstants& k);

struct DiagonalizationResidual {
  double offdiag_norm = 0.0;        // Frobenius norm of both off-diagonal 2x2 blocks
  double block_energy_error = 0.0;  // || upper-left - (E_p - (e hbar c/2E_p) sigma.H) ||_F
};

/// Transforms zeeman_dressed_hamiltonian() with fw_unitary() and measures how
/// far the result is from block-diagonal form with the Zeeman-shifted block.
DiagonalizationResidual diagonalization_residual(const Vec3& p, const Vec3& H,
                                                 const PhysConstants& k);

/// A_p = (p x sigma) c^2 / (2 E_p (E_p + m c^2)).
MatrixVec2 berry_connection_closed(const Vec3& p, const PhysConstants& k);

struct NumericConnection {
  MatrixVec2 A;
  double richardson_gap = 0.0;  // max |A(step) - A(step/2)| over entries
  bool step_ok = true;          // richardson_gap <= 1e-4
};

/// Upper-left blocks of i U d_{p_a} U^dagger by central differences of the
/// field-free FW unitary. step <= 0 selects 1e-4 * max(1, |p|).
NumericConnection berry_connection_numeric(const Vec3& p, const PhysConstants& k,
                                           double step = 0.0);

enum class CurlKind { non_abelian, abelian };

/// Dual vector F_k of d_a A_b - d_b A_a - i[A_a, A_b], built from analytic
/// momentum derivatives of berry_connection_closed(). The abelian variant
/// drops the commutator.
MatrixVec2 berry_curvature_matrix(const Vec3& p, const PhysConstants& k,
                                  CurlKind kind = CurlKind::non_abelian);

/// F = -(c^4 / 2E_p^3) [m sigma + (sigma.p) p / (E_p + m c^2)].
MatrixVec2 berry_curvature_closed(const Vec3& p, const PhysConstants& k);

/// || M - M^dagger ||_F
template <typename Mat>
double hermiticity_defect(const Mat& m) {
  return (m - m.adjoint()).norm();
}

/// || U U^dagger - I ||_F
double unitarity_defect(const CMat4& u);

}  // namespace semidirac
