#include "semidirac/em_fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace semidirac {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(const Vec3& v, const char* what) {
  if (!v.allFinite()) throw PreconditionError(std::string(what) + " must be finite");
}

}  // namespace

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::uniform: return "uniform";
    case FieldKind::crossed_uniform: return "crossed_uniform";
    case FieldKind::coulomb: return "coulomb";
    case FieldKind::custom: return "custom";
  }
  return "unknown";
}

FieldConfig FieldConfig::uniform(const Vec3& E0, const Vec3& H0) {
  require_finite(E0, "field.E0");
  require_finite(H0, "field.H0");
  return FieldConfig(UniformField{E0, H0});
}

FieldConfig FieldConfig::crossed_uniform(const Vec3& E0, const Vec3& H0) {
  require_finite(E0, "field.E0");
  require_finite(H0, "field.H0");
  if (std::abs(E0.dot(H0)) > 1e-12 * E0.norm() * H0.norm())
    throw PreconditionError("crossed_uniform requires field.E0 perpendicular to field.H0");
  return FieldConfig(CrossedUniformField{E0, H0});
}

FieldConfig FieldConfig::coulomb(double Z, double softening) {
  if (!std::isfinite(Z)) throw PreconditionError("field.Z must be finite");
  if (!(softening > 0.0) || !std::isfinite(softening))
    throw PreconditionError("coulomb field requires field.softening > 0");
  return FieldConfig(CoulombField{Z, softening});
}

FieldConfig FieldConfig::custom(CustomField f) {
  if (!f.evaluate) throw PreconditionError("custom field requires an evaluator");
  return FieldConfig(std::move(f));
}

FieldKind FieldConfig::kind() const {
  return static_cast<FieldKind>(params_.index());
}

FieldSample FieldConfig::sample(const Vec3& r, double t) const {
  return std::visit(
      overloaded{
          [](const UniformField& u) { return FieldSample{u.E0, u.H0}; },
          [](const CrossedUniformField& u) { return FieldSample{u.E0, u.H0}; },
          [&](const CoulombField& c) {
            const double d2 = r.squaredNorm() + c.softening * c.softening;
            return FieldSample{c.Z * r / (d2 * std::sqrt(d2)), Vec3::Zero()};
          },
          [&](const CustomField& f) { return f.evaluate(r, t); },
      },
      params_);
}

bool FieldConfig::has_potential() const {
  if (const auto* f = std::get_if<CustomField>(&params_)) return static_cast<bool>(f->potential);
  return true;
}

std::optional<double> FieldConfig::potential(const Vec3& r, double t) const {
  return std::visit(
      overloaded{
          [&](const UniformField& u) -> std::optional<double> { return -u.E0.dot(r); },
          [&](const CrossedUniformField& u) -> std::optional<double> { return -u.E0.dot(r); },
          [&](const CoulombField& c) -> std::optional<double> {
            return c.Z / std::sqrt(r.squaredNorm() + c.softening * c.softening);
          },
          [&](const CustomField& f) -> std::optional<double> {
            if (!f.potential) return std::nullopt;
            return f.potential(r, t);
          },
      },
      params_);
}

bool FieldConfig::h_uniform() const { return kind() != FieldKind::custom; }

namespace {

template <typename Pick>
FieldJacobian differenced_jacobian(const CustomField& f, const Vec3& r, double t, Pick pick) {
  FieldJacobian j;
  const double h = 1e-5 * std::max(1.0, r.norm());
  for (int col = 0; col < 3; ++col) {
    Vec3 dr = Vec3::Zero();
    dr(col) = h;
    const Vec3 xp = pick(f.evaluate(r + dr, t));
    const Vec3 xm = pick(f.evaluate(r - dr, t));
    const Vec3 xp2 = pick(f.evaluate(r + 2.0 * dr, t));
    const Vec3 xm2 = pick(f.evaluate(r - 2.0 * dr, t));
    j.col(col) = (8.0 * (xp - xm) - (xp2 - xm2)) / (12.0 * h);
  }
  return j;
}

}  // namespace

FieldJacobian FieldConfig::h_jacobian(const Vec3& r, double t) const {
  const auto* f = std::get_if<CustomField>(&params_);
  if (f == nullptr) return FieldJacobian::Zero();
  if (f->h_jacobian) return f->h_jacobian(r, t);
  return differenced_jacobian(*f, r, t, [](const FieldSample& s) { return s.H; });
}

FieldJacobian FieldConfig::e_jacobian(const Vec3& r, double t) const {
  if (const auto* c = std::get_if<CoulombField>(&params_)) {
    const double d2 = r.squaredNorm() + c->softening * c->softening;
    const double d3 = d2 * std::sqrt(d2);
    return c->Z * (FieldJacobian::Identity() / d3 - 3.0 * r * r.transpose() / (d3 * d2));
  }
  const auto* f = std::get_if<CustomField>(&params_);
  if (f == nullptr) return FieldJacobian::Zero();
  if (f->e_jacobian) return f->e_jacobian(r, t);
  return differenced_jacobian(*f, r, t, [](const FieldSample& s) { return s.E; });
}

FieldSample sample(const FieldConfig& cfg, const Vec3& r, double t) { return cfg.sample(r, t); }

Eigen::Matrix4d field_tensor(const FieldConfig& cfg, const Vec3& r, double t) {
  const FieldSample f = cfg.sample(r, t);
  Eigen::Matrix4d F = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 3; ++i) {
    F(0, i + 1) = f.E(i);
    F(i + 1, 0) = -f.E(i);
  }
  F(1, 2) = f.H.z();
  F(2, 1) = -f.H.z();
  F(2, 3) = f.H.x();
  F(3, 2) = -f.H.x();
  F(3, 1) = f.H.y();
  F(1, 3) = -f.H.y();
  return F;
}

namespace {

// Covariant F_{ab}: time-space entries change sign under (-,+,+,+).
Eigen::Matrix4d lowered_tensor(const FieldConfig& cfg, const Eigen::Vector4d& x,
                               const PhysConstants& k) {
  Eigen::Matrix4d F = field_tensor(cfg, x.tail<3>(), x(0) / k.c);
  F.row(0) *= -1.0;
  F.col(0) *= -1.0;
  return F;
}

}  // namespace

double maxwell_residual(const FieldConfig& cfg, const Vec3& r, double t, double step,
                        const PhysConstants& k) {
  if (!(step > 0.0)) throw PreconditionError("maxwell_residual requires step > 0");
  Eigen::Vector4d x0;
  x0 << k.c * t, r;

  std::array<std::array<double, 16>, 4> deriv{};
  for (int a = 0; a < 4; ++a) {
    Eigen::Vector4d dx = Eigen::Vector4d::Zero();
    dx(a) = step;
    const Eigen::Matrix4d d =
        (8.0 * (lowered_tensor(cfg, x0 + dx, k) - lowered_tensor(cfg, x0 - dx, k)) -
         (lowered_tensor(cfg, x0 + 2.0 * dx, k) - lowered_tensor(cfg, x0 - 2.0 * dx, k))) /
        (12.0 * step);
    for (int i = 0; i < 16; ++i) deriv[a][i] = d(i / 4, i % 4);
  }
  auto dF = [&](int a, int b, int c) { return deriv[a][b * 4 + c]; };

  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = b + 1; c < 4; ++c)
        worst = std::max(worst, std::abs(dF(a, b, c) + dF(b, c, a) + dF(c, a, b)));
  return worst;
}

}  // namespace semidirac
