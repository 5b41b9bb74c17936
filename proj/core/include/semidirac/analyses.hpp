#pragma once

// Observables extracted from trajectories and compared with closed-form
// limits: spin-Hall drift, momentum-space monopole, cyclotron shift and the
// helicity drift along H.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semidirac/trajectory.hpp"

namespace semidirac {

struct AnalysisReport {
  std::string observable;
  double measured = 0.0;
  double predicted = 0.0;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> notes;

  [[nodiscard]] std::optional<double> extra(const std::string& key) const;
  /// key=value records, one per line.
  [[nodiscard]] std::string to_key_values() const;
  [[nodiscard]] std::string to_text() const;
};

inline constexpr double kRelativeErrorFloor = 1e-300;

/// |measured - predicted| / max(|predicted|, floor)
double relative_error(double measured, double predicted, double floor = kRelativeErrorFloor);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Displacement along `dir` minus the integrated zeroth-order velocity
/// p.dir c^2/E_p (trapezoid rule), per sample.
std::vector<double> anomalous_displacement(const Trajectory& traj, const Vec3& dir,
                                           const PhysConstants& k);

/// Orbital angular frequency from zero crossings of p.axis, each refined by
/// a quadratic through three neighbouring samples. Throws PreconditionError
/// ("insufficient data") when fewer than `min_periods` full periods are seen.
double measure_frequency(const Trajectory& traj, const Vec3& axis, int min_periods = 8);

/// Transverse drift along S x E versus -(e hbar / 2 m^2 c^2) S x E. With a
/// Pauli trajectory, also checks the berry/pauli drift ratio against 2.
AnalysisReport spin_hall_drift(const Trajectory& berry, const Vec3& E, const PhysConstants& k,
                               const Trajectory* pauli = nullptr, double tolerance = 0.02,
                               double ratio_tolerance = 0.05);

/// Anomalous velocity of the berry_full model at state `s` versus
/// -lambda e hbar (p x E) / p^3 with lambda = S.p / 2p.
AnalysisReport monopole_check(const ParticleState& s, const FieldConfig& cfg,
                              const PhysConstants& k, double tolerance = 0.01);

/// Cyclotron frequencies of the berry_full and pauli_canonical runs.
/// `reference` is an hbar = 0 run; when absent the closed form e c H / E_p is used.
AnalysisReport cyclotron_shift(const Trajectory& full, const Trajectory& pauli,
                               const Trajectory* reference, const Vec3& H, const PhysConstants& k,
                               double tolerance = 1e-3, double difference_tolerance = 0.05);

/// Drift velocity along H versus -lambda e hbar |H| / p^2.
AnalysisReport helicity_drift(const Trajectory& traj, const Vec3& H, const PhysConstants& k,
                              double tolerance = 0.02);

}  // namespace semidirac
