#pragma once

// Semiclassical trajectory equations of a Dirac electron with spin.
//
// berry_full integrates the covariant equations resolved to first order in
// hbar:
//   pdot = -d_r dE + e E + (e c/E_p) p x H + (e/c) d_p dE x H
//          + hbar (e^2/c) (F x E) x H + hbar (e^2/E_p) (F.H) p x H
//   rdot = p c^2/E_p + d_p dE + hbar e F x E + hbar (e c/E_p) F x (p x H)
// with the spin-dependent curvature F(p, S) and the spin-magnetic energy dE.
// pauli_canonical integrates Hamilton's equations of the Pauli-type
// Hamiltonian with Zeeman and spin-orbit terms; classical_lorentz drops every
// spin term. All models precess S with the BMT-type vector of
// precession_vector().

#include <optional>
#include <string>
#include <vector>

#include "semidirac/em_fields.hpp"
#include "semidirac/spin_dynamics.hpp"
#include "semidirac/types.hpp"

namespace semidirac {

struct ParticleState {
  double t = 0.0;
  Vec3 r = Vec3::Zero();
  Vec3 p = Vec3::Zero();
  Vec3 S = Vec3(0.0, 0.0, 1.0);
  std::optional<CVec2> chi;  // evolved alongside S when present
};

enum class RhsModel { berry_full, pauli_canonical, classical_lorentz };

std::string to_string(RhsModel m);
/// Accepts berry|pauli|classical and the full enumerator names.
RhsModel parse_model(const std::string& s);

struct Derivatives {
  Vec3 rdot = Vec3::Zero();
  Vec3 pdot = Vec3::Zero();
  Vec3 Sdot = Vec3::Zero();
  std::optional<CVec2> chidot;
};

/// F(p, S) = -(c^4 / 2E_p^3) [m S + (S.p) p / (E_p + m c^2)].
Vec3 berry_curvature(const Vec3& p, const Vec3& S, const PhysConstants& k);

/// Intrinsic angular momentum L = hbar c^2 p x (p x S) / (2E_p(E_p + m c^2)).
Vec3 intrinsic_angular_momentum(const Vec3& p, const Vec3& S, const PhysConstants& k);

/// dE = -(e hbar c / 2E_p) S.H - (e c / E_p) L.H.
double delta_E(const Vec3& p, const Vec3& S, const FieldSample& f, const PhysConstants& k);

struct DeltaEGradient {
  Vec3 dp = Vec3::Zero();
  Vec3 dr = Vec3::Zero();
};

/// Analytic gradients of delta_E. The r-gradient flows through H(r, t) only.
DeltaEGradient grad_delta_E(const Vec3& p, const Vec3& S, const FieldConfig& cfg, const Vec3& r,
                            double t, const PhysConstants& k);

Derivatives rhs(const ParticleState& s, const FieldConfig& cfg, RhsModel model,
                const PhysConstants& k);

struct ImplicitResidual {
  Vec3 rp = Vec3::Zero();
  Vec3 rr = Vec3::Zero();
};

/// Residuals of the implicit (Lorentz-force) form
///   pdot = -d_r dE + e E + (e/c) rdot x H,  rdot = p c^2/E_p + d_p dE - hbar pdot x F
/// when the supplied derivatives are substituted back.
ImplicitResidual implicit_residual(const ParticleState& s, const Derivatives& d,
                                   const FieldConfig& cfg, const PhysConstants& k);

enum class Scheme { rk4_fixed, rk45_adaptive };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

struct IntegratorSettings {
  Scheme scheme = Scheme::rk45_adaptive;
  double dt = 1e-2;          // rk4_fixed step
  double rtol = 1e-10;       // rk45_adaptive
  double atol = 1e-12;       // rk45_adaptive
  double dt_min = 1e-12;     // rk45_adaptive underflow threshold
  double T = 1.0;
  double output_every = 0.0; // sample interval; 0 records every step
  bool renormalize_spin = false;
};

struct TrajectorySample {
  ParticleState state;
  std::optional<double> energy;  // E_p + dE + e phi when a potential is available
};

struct Trajectory {
  RhsModel model = RhsModel::berry_full;
  std::vector<TrajectorySample> samples;
};

/// Monitored energy E_p + dE + e phi, if the configuration supplies phi.
std::optional<double> energy_monitor(const ParticleState& s, const FieldConfig& cfg,
                                     const PhysConstants& k);

/// Integrates from state0 over [state0.t, state0.t + T]. The first and last
/// samples are always recorded. Throws NumericalError on non-finite states
/// or adaptive step underflow.
Trajectory integrate(const ParticleState& state0, const FieldConfig& cfg, RhsModel model,
                     const PhysConstants& k, const IntegratorSettings& settings);

}  // namespace semidirac
