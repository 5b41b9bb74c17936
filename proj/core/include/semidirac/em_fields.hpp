#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "semidirac/types.hpp"

namespace semidirac {

struct FieldSample {
  Vec3 E = Vec3::Zero();
  Vec3 H = Vec3::Zero();
};

/// Jacobian dX_i/dr_j of a field component X.
using FieldJacobian = Eigen::Matrix3d;

struct UniformField {
  Vec3 E0 = Vec3::Zero();
  Vec3 H0 = Vec3::Zero();
};

/// Uniform fields with E0 . H0 = 0.
struct CrossedUniformField {
  Vec3 E0 = Vec3::Zero();
  Vec3 H0 = Vec3::Zero();
};

/// Softened point charge: E = Z r / (r^2 + rs^2)^{3/2}, phi = Z / sqrt(r^2 + rs^2).
struct CoulombField {
  double Z = 1.0;
  double softening = 1e-3;
};

struct CustomField {
  std::function<FieldSample(const Vec3&, double)> evaluate;
  std::function<double(const Vec3&, double)> potential;        // optional
  std::function<FieldJacobian(const Vec3&, double)> h_jacobian; // optional, else differenced
  std::function<FieldJacobian(const Vec3&, double)> e_jacobian; // optional, else differenced
};

enum class FieldKind { uniform, crossed_uniform, coulomb, custom };

std::string to_string(FieldKind kind);

/// Immutable field configuration. Construction validates the variant
/// parameters and throws PreconditionError on violations.
class FieldConfig {
 public:
  static FieldConfig uniform(const Vec3& E0, const Vec3& H0);
  static FieldConfig crossed_uniform(const Vec3& E0, const Vec3& H0);
  static FieldConfig coulomb(double Z, double softening);
  static FieldConfig custom(CustomField f);

  [[nodiscard]] FieldKind kind() const;
  [[nodiscard]] FieldSample sample(const Vec3& r, double t) const;
  [[nodiscard]] bool has_potential() const;
  /// Scalar potential, if the configuration supplies one.
  [[nodiscard]] std::optional<double> potential(const Vec3& r, double t) const;
  /// dH_i/dr_j. Analytic for built-in kinds (all have uniform or vanishing H).
  [[nodiscard]] FieldJacobian h_jacobian(const Vec3& r, double t) const;
  /// dE_i/dr_j.
  [[nodiscard]] FieldJacobian e_jacobian(const Vec3& r, double t) const;
  /// True when H (and hence the spin-magnetic energy) is independent of r.
  [[nodiscard]] bool h_uniform() const;

  [[nodiscard]] const std::variant<UniformField, CrossedUniformField, CoulombField, CustomField>&
  params() const {
    return params_;
  }

 private:
  explicit FieldConfig(std::variant<UniformField, CrossedUniformField, CoulombField, CustomField> p)
      : params_(std::move(p)) {}
  std::variant<UniformField, CrossedUniformField, CoulombField, CustomField> params_;
};

FieldSample sample(const FieldConfig& cfg, const Vec3& r, double t);

/// Contravariant F^{ab} with x^0 = ct and metric (-,+,+,+):
/// F^{0i} = E_i, F^{ij} = eps_ijk H_k.
Eigen::Matrix4d field_tensor(const FieldConfig& cfg, const Vec3& r, double t);

/// Largest |d_a F_bc + d_b F_ca + d_c F_ab| over index triples, using a
/// fourth-order central stencil of width `step` in each of (ct, x, y, z).
double maxwell_residual(const FieldConfig& cfg, const Vec3& r, double t, double step,
                        const PhysConstants& k = {});

/// Residuals above this are reported as a violation of the homogeneous
/// Maxwell equations.
inline constexpr double kMaxwellTolerance = 1e-6;

}  // namespace semidirac
