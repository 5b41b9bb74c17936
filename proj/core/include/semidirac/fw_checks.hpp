#pragma once

// Grid-level checks over fw_verify, shared by the CLI and the test suites.

#include <cstdint>
#include <string>
#include <vector>

#include "semidirac/fw_verify.hpp"

namespace semidirac {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string comparison = "<=";  // how value is held against tolerance
};

struct CheckReport {
  std::string title;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const CheckResult* find(const std::string& name) const;
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] std::string to_key_values() const;
};

/// `n` momenta uniform in the ball |p| <= pmax_over_mc * m c. Deterministic for a seed.
std::vector<Vec3> momentum_grid(const PhysConstants& k, int n = 100, double pmax_over_mc = 5.0,
                                std::uint64_t seed = 20240917);

/// max_i |a_i - b_i| / max_i |b_i| over all matrix entries of the three components.
double relative_max_component_error(const MatrixVec2& a, const MatrixVec2& b);

/// Slack on the diagonalization slope check (slope >= 1 - allowance).
inline constexpr double kSlopeAllowance = 1e-3;

/// Log-log slope of diagonalization_residual().offdiag_norm against hbar.
double diagonalization_slope(const Vec3& p, const Vec3& H, const PhysConstants& k,
                             const std::vector<double>& hbars);

/// Unitarity, hermiticity, connection oracle, diagonalization order, trace
/// relations of the curvature and the O(hbar^2) accuracy of the Ebar expansion.
CheckReport verify_fw(const PhysConstants& k, const Vec3& H, double tol = 1e-6);

/// Non-abelian curl of the closed-form connection against the closed-form
/// curvature, and the size of the abelian-curl deviation.
CheckReport verify_curvature(const PhysConstants& k, double tol = 1e-6);

}  // namespace semidirac
