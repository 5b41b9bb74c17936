#include "semidirac/trajectory.hpp"

#include <cmath>
#include <sstream>

#include "semidirac/integrator.hpp"

namespace semidirac {

namespace {

constexpr Complex kI{0.0, 1.0};

// c^2 / (2 E (E + m c^2))
double kappa(double ep, const PhysConstants& k) {
  return k.c * k.c / (2.0 * ep * (ep + k.m * k.c * k.c));
}

double dkappa_dE(double ep, const PhysConstants& k) {
  const double mc2 = k.m * k.c * k.c;
  return -k.c * k.c * (2.0 * ep + mc2) / (2.0 * ep * ep * (ep + mc2) * (ep + mc2));
}

}  // namespace

std::string to_string(RhsModel m) {
  switch (m) {
    case RhsModel::berry_full: return "berry_full";
    case RhsModel::pauli_canonical: return "pauli_canonical";
    case RhsModel::classical_lorentz: return "classical_lorentz";
  }
  return "unknown";
}

RhsModel parse_model(const std::string& s) {
  if (s == "berry" || s == "berry_full") return RhsModel::berry_full;
  if (s == "pauli" || s == "pauli_canonical") return RhsModel::pauli_canonical;
  if (s == "classical" || s == "classical_lorentz") return RhsModel::classical_lorentz;
  throw ParseError("unknown model '" + s + "' (expected berry|pauli|classical)");
}

std::string to_string(Scheme s) {
  return s == Scheme::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4_fixed" || s == "rk4") return Scheme::rk4_fixed;
  if (s == "rk45_adaptive" || s == "rk45") return Scheme::rk45_adaptive;
  throw ParseError("unknown integrator scheme '" + s + "' (expected rk4_fixed|rk45_adaptive)");
}

Vec3 berry_curvature(const Vec3& p, const Vec3& S, const PhysConstants& k) {
  const double ep = energy(p, k);
  const double mc2 = k.m * k.c * k.c;
  return -(std::pow(k.c, 4) / (2.0 * ep * ep * ep)) * (k.m * S + (S.dot(p) / (ep + mc2)) * p);
}

Vec3 intrinsic_angular_momentum(const Vec3& p, const Vec3& S, const PhysConstants& k) {
  return k.hbar * kappa(energy(p, k), k) * p.cross(p.cross(S));
}

double delta_E(const Vec3& p, const Vec3& S, const FieldSample& f, const PhysConstants& k) {
  const double ep = energy(p, k);
  return -(k.e * k.hbar * k.c / (2.0 * ep)) * S.dot(f.H) -
         (k.e * k.c / ep) * intrinsic_angular_momentum(p, S, k).dot(f.H);
}

DeltaEGradient grad_delta_E(const Vec3& p, const Vec3& S, const FieldConfig& cfg, const Vec3& r,
                            double t, const PhysConstants& k) {
  const FieldSample f = cfg.sample(r, t);
  const Vec3& H = f.H;
  const double ep = energy(p, k);
  const double mc2 = k.m * k.c * k.c;
  const double c3 = k.c * k.c * k.c;

  // dE = a(E) S.H + b(E) g(p),  g = (p.H)(p.S) - p^2 (S.H)
  const double a = -k.e * k.hbar * k.c / (2.0 * ep);
  const double da = k.e * k.hbar * k.c / (2.0 * ep * ep);
  const double b = -k.e * k.hbar * c3 / (2.0 * ep * ep * (ep + mc2));
  const double db =
      k.e * k.hbar * c3 * (3.0 * ep + 2.0 * mc2) / (2.0 * ep * ep * ep * (ep + mc2) * (ep + mc2));
  const double sh = S.dot(H);
  const double g = p.dot(H) * p.dot(S) - p.squaredNorm() * sh;
  const Vec3 grad_e = p * (k.c * k.c / ep);
  const Vec3 grad_g = H * p.dot(S) + S * p.dot(H) - 2.0 * sh * p;

  DeltaEGradient out;
  out.dp = (da * sh + db * g) * grad_e + b * grad_g;
  if (!cfg.h_uniform()) {
    // d dE / dH
    const Vec3 v = a * S + b * (p * p.dot(S) - p.squaredNorm() * S);
    out.dr = cfg.h_jacobian(r, t).transpose() * v;
  }
  return out;
}

Derivatives rhs(const ParticleState& s, const FieldConfig& cfg, RhsModel model,
                const PhysConstants& k) {
  const FieldSample f = cfg.sample(s.r, s.t);
  const double ep = energy(s.p, k);
  const Vec3 force = lorentz_force(s.p, f, k);

  Derivatives d;
  d.rdot = s.p * (k.c * k.c / ep);
  d.pdot = force;
  d.Sdot = precession_vector(s.p, f, k).cross(s.S);

  switch (model) {
    case RhsModel::classical_lorentz:
      break;
    case RhsModel::berry_full: {
      const Vec3 F = berry_curvature(s.p, s.S, k);
      const DeltaEGradient g = grad_delta_E(s.p, s.S, cfg, s.r, s.t, k);
      d.pdot += -g.dr + (k.e / k.c) * g.dp.cross(f.H) +
                (k.hbar * k.e * k.e / k.c) * F.cross(f.E).cross(f.H) +
                (k.hbar * k.e * k.e / ep) * F.dot(f.H) * s.p.cross(f.H);
      d.rdot += g.dp + (k.hbar * k.e) * F.cross(f.E) +
                (k.hbar * k.e * k.c / ep) * F.cross(s.p.cross(f.H));
      break;
    }
    case RhsModel::pauli_canonical: {
      // H_spin = -(e hbar c/2E) S.H - e hbar kappa S.(E x p)
      const double kap = kappa(ep, k);
      const Vec3 grad_e = s.p * (k.c * k.c / ep);
      const double sh = s.S.dot(f.H);
      const Vec3 s_cross_e = s.S.cross(f.E);
      const double q = s.p.dot(s_cross_e);
      const Vec3 dp = (k.e * k.hbar * k.c / (2.0 * ep * ep)) * sh * grad_e -
                      k.e * k.hbar * (kap * s_cross_e + q * dkappa_dE(ep, k) * grad_e);
      Vec3 dr = Vec3::Zero();
      if (!cfg.h_uniform())
        dr += -(k.e * k.hbar * k.c / (2.0 * ep)) * (cfg.h_jacobian(s.r, s.t).transpose() * s.S);
      if (cfg.kind() == FieldKind::coulomb || cfg.kind() == FieldKind::custom)
        dr += -k.e * k.hbar * kap * (cfg.e_jacobian(s.r, s.t).transpose() * s.p.cross(s.S));
      d.rdot += dp;
      d.pdot += -dr + (k.e / k.c) * dp.cross(f.H);
      break;
    }
  }

  if (s.chi) {
    const CMat2 G = spinor_generator(s.p, force, f, k);
    d.chidot = kI * (G * (*s.chi));
  }
  return d;
}

ImplicitResidual implicit_residual(const ParticleState& s, const Derivatives& d,
                                   const FieldConfig& cfg, const PhysConstants& k) {
  const FieldSample f = cfg.sample(s.r, s.t);
  const double ep = energy(s.p, k);
  const Vec3 F = berry_curvature(s.p, s.S, k);
  const DeltaEGradient g = grad_delta_E(s.p, s.S, cfg, s.r, s.t, k);
  ImplicitResidual out;
  out.rp = d.pdot - (-g.dr + k.e * f.E + (k.e / k.c) * d.rdot.cross(f.H));
  out.rr = d.rdot - (s.p * (k.c * k.c / ep) + g.dp - k.hbar * d.pdot.cross(F));
  return out;
}

std::optional<double> energy_monitor(const ParticleState& s, const FieldConfig& cfg,
                                     const PhysConstants& k) {
  const auto phi = cfg.potential(s.r, s.t);
  if (!phi) return std::nullopt;
  return energy(s.p, k) + delta_E(s.p, s.S, cfg.sample(s.r, s.t), k) + k.e * (*phi);
}

namespace {

ode::State pack(const ParticleState& s) {
  ode::State y(s.chi ? 13 : 9);
  y.segment<3>(0) = s.r;
  y.segment<3>(3) = s.p;
  y.segment<3>(6) = s.S;
  if (s.chi) {
    y(9) = (*s.chi)(0).real();
    y(10) = (*s.chi)(0).imag();
    y(11) = (*s.chi)(1).real();
    y(12) = (*s.chi)(1).imag();
  }
  return y;
}

ParticleState unpack(double t, const ode::State& y) {
  ParticleState s;
  s.t = t;
  s.r = y.segment<3>(0);
  s.p = y.segment<3>(3);
  s.S = y.segment<3>(6);
  if (y.size() == 13) s.chi = CVec2(Complex(y(9), y(10)), Complex(y(11), y(12)));
  return s;
}

void renormalize(ode::State& y) {
  y.segment<3>(6).normalize();
  if (y.size() == 13) y.segment<4>(9).normalize();
}

}  // namespace

Trajectory integrate(const ParticleState& state0, const FieldConfig& cfg, RhsModel model,
                     const PhysConstants& k, const IntegratorSettings& settings) {
  k.validate();
  if (!(settings.T > 0.0)) throw PreconditionError("integration time T must be positive");
  if (!state0.r.allFinite() || !state0.p.allFinite() || !state0.S.allFinite())
    throw PreconditionError("initial state must be finite");

  const bool has_chi = state0.chi.has_value();
  const ode::Rhs f = [&](double t, const ode::State& y, ode::State& dydt) {
    const Derivatives d = rhs(unpack(t, y), cfg, model, k);
    dydt.resize(y.size());
    dydt.segment<3>(0) = d.rdot;
    dydt.segment<3>(3) = d.pdot;
    dydt.segment<3>(6) = d.Sdot;
    if (has_chi) {
      dydt(9) = (*d.chidot)(0).real();
      dydt(10) = (*d.chidot)(0).imag();
      dydt(11) = (*d.chidot)(1).real();
      dydt(12) = (*d.chidot)(1).imag();
    }
  };

  Trajectory traj;
  traj.model = model;
  auto record = [&](double t, const ode::State& y) {
    TrajectorySample smp;
    smp.state = unpack(t, y);
    smp.energy = energy_monitor(smp.state, cfg, k);
    traj.samples.push_back(std::move(smp));
  };

  const double t0 = state0.t;
  const double t_end = t0 + settings.T;
  ode::State y = pack(state0);
  record(t0, y);

  if (settings.scheme == Scheme::rk4_fixed) {
    if (!(settings.dt > 0.0)) throw PreconditionError("rk4_fixed requires dt > 0");
    long n = std::max(1L, std::lround(settings.T / settings.dt));
    if (std::abs(n * settings.dt - settings.T) > 1e-9 * settings.T)
      n = static_cast<long>(std::ceil(settings.T / settings.dt));
    const double h = settings.T / static_cast<double>(n);
    const long every =
        settings.output_every > 0.0 ? std::max(1L, std::lround(settings.output_every / h)) : 1L;
    for (long i = 1; i <= n; ++i) {
      y = ode::rk4_step(f, t0 + (i - 1) * h, y, h);
      if (!y.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite state encountered at t = " << t0 + i * h;
        throw NumericalError(msg.str());
      }
      if (settings.renormalize_spin) renormalize(y);
      if (i % every == 0 || i == n) record(i == n ? t_end : t0 + i * h, y);
    }
    return traj;
  }

  ode::AdaptiveSettings as;
  as.rtol = settings.rtol;
  as.atol = settings.atol;
  as.h_min = settings.dt_min;
  ode::DormandPrince45 dp(f, as);
  dp.reset(t0, y);
  long next_index = 1;
  while (dp.time() < t_end) {
    double stop = t_end;
    if (settings.output_every > 0.0)
      stop = std::min(t_end, t0 + static_cast<double>(next_index) * settings.output_every);
    dp.step(stop);
    if (settings.renormalize_spin) renormalize(dp.mutable_state());
    const bool at_output = settings.output_every <= 0.0 || dp.time() >= stop;
    if (at_output) {
      record(dp.time(), dp.state());
      if (settings.output_every > 0.0) ++next_index;
    }
  }
  if (traj.samples.back().state.t < t_end) record(dp.time(), dp.state());
  return traj;
}

}  // namespace semidirac
