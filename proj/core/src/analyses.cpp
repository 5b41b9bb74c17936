#include "semidirac/analyses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semidirac/trajectory_io.hpp"

namespace semidirac {

std::optional<double> AnalysisReport::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  return std::nullopt;
}

std::string AnalysisReport::to_key_values() const {
  std::ostringstream out;
  out << "observable=" << observable << '\n'
      << "measured=" << format_double(measured) << '\n'
      << "predicted=" << format_double(predicted) << '\n'
      << "relative_error=" << format_double(relative_error) << '\n'
      << "tolerance=" << format_double(tolerance) << '\n';
  for (const auto& [k, v] : extras) out << k << '=' << format_double(v) << '\n';
  out << "pass=" << (pass ? "true" : "false") << '\n';
  return out.str();
}

std::string AnalysisReport::to_text() const {
  std::ostringstream out;
  out.precision(10);
  out << observable << ": " << (pass ? "PASS" : "FAIL") << '\n'
      << "  measured        " << measured << '\n'
      << "  predicted       " << predicted << '\n'
      << "  relative error  " << relative_error << " (tolerance " << tolerance << ")\n";
  for (const auto& [k, v] : extras) out << "  " << k << "  " << v << '\n';
  for (const auto& n : notes) out << "  note: " << n << '\n';
  return out.str();
}

double relative_error(double measured, double predicted, double floor) {
  return std::abs(measured - predicted) / std::max(std::abs(predicted), floor);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw PreconditionError("linear fit needs at least three samples");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("linear fit degenerate: zero time span");
  LinearFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  return fit;
}

std::vector<double> anomalous_displacement(const Trajectory& traj, const Vec3& dir,
                                           const PhysConstants& k) {
  std::vector<double> out;
  out.reserve(traj.samples.size());
  if (traj.samples.empty()) return out;
  const auto v0 = [&](const ParticleState& s) {
    return s.p.dot(dir) * k.c * k.c / energy(s.p, k);
  };
  const double x0 = traj.samples.front().state.r.dot(dir);
  double classical = 0.0;
  out.push_back(0.0);
  for (size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i - 1].state;
    const auto& b = traj.samples[i].state;
    classical += 0.5 * (b.t - a.t) * (v0(a) + v0(b));
    out.push_back(b.r.dot(dir) - x0 - classical);
  }
  return out;
}

namespace {

std::pair<std::vector<double>, std::vector<double>> times_and(const Trajectory& traj,
                                                              std::vector<double> ys) {
  std::vector<double> ts;
  ts.reserve(traj.samples.size());
  for (const auto& s : traj.samples) ts.push_back(s.state.t);
  return {std::move(ts), std::move(ys)};
}

// Root in [t1, t2] of the parabola through three samples, falling back to
// linear interpolation between the bracketing pair.
double refine_crossing(double t0, double y0, double t1, double y1, double t2, double y2,
                       double lo, double hi, double ylo, double yhi) {
  const double linear = lo - ylo * (hi - lo) / (yhi - ylo);
  // Newton form around t1.
  const double d01 = (y1 - y0) / (t1 - t0);
  const double d12 = (y2 - y1) / (t2 - t1);
  const double a = (d12 - d01) / (t2 - t0);
  const double b = d01 + a * (t1 - t0);  // derivative-like coefficient at t1
  // y(t) = y1 + b (t - t1) + a (t - t1)^2
  if (std::abs(a) < 1e-300) return linear;
  const double disc = b * b - 4.0 * a * y1;
  if (disc < 0.0) return linear;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  double best = linear;
  double best_dist = std::numeric_limits<double>::infinity();
  for (double u : {q / a, q != 0.0 ? y1 / q : std::numeric_limits<double>::infinity()}) {
    const double t = t1 + u;
    if (t >= lo && t <= hi) {
      const double dist = std::abs(t - linear);
      if (dist < best_dist) {
        best = t;
        best_dist = dist;
      }
    }
  }
  return best;
}

}  // namespace

double measure_frequency(const Trajectory& traj, const Vec3& axis, int min_periods) {
  const auto& s = traj.samples;
  std::vector<double> crossings;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    const double ya = s[i].state.p.dot(axis);
    const double yb = s[i + 1].state.p.dot(axis);
    if (ya == 0.0 && i > 0) {
      crossings.push_back(s[i].state.t);
      continue;
    }
    if (ya * yb >= 0.0) continue;
    // three-point stencil: the bracketing pair plus the closer outer neighbour
    size_t j = (i == 0) ? 0 : i - 1;
    if (i + 2 < s.size() && i > 0) {
      const double yprev = std::abs(s[i - 1].state.p.dot(axis));
      const double ynext = std::abs(s[i + 2].state.p.dot(axis));
      j = ynext < yprev ? i : i - 1;
    } else if (i + 2 < s.size()) {
      j = i;
    }
    if (j + 2 >= s.size()) j = s.size() - 3;
    const auto& a = s[j].state;
    const auto& b = s[j + 1].state;
    const auto& c = s[j + 2].state;
    crossings.push_back(refine_crossing(a.t, a.p.dot(axis), b.t, b.p.dot(axis), c.t,
                                        c.p.dot(axis), s[i].state.t, s[i + 1].state.t, ya, yb));
  }
  const double periods = crossings.size() < 2 ? 0.0 : 0.5 * static_cast<double>(crossings.size() - 1);
  if (periods < min_periods) {
    std::ostringstream msg;
    msg << "insufficient data: " << periods << " full periods observed, " << min_periods
        << " required";
    throw PreconditionError(msg.str());
  }
  return M_PI * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());
}

AnalysisReport spin_hall_drift(const Trajectory& berry, const Vec3& E, const PhysConstants& k,
                               const Trajectory* pauli, double tolerance,
                               double ratio_tolerance) {
  if (berry.samples.size() < 3) throw PreconditionError("spin-hall: trajectory too short");
  const ParticleState& s0 = berry.samples.front().state;
  const double mc = k.m * k.c;
  if (s0.p.norm() > 0.1 * mc * (1.0 + 1e-12))
    throw PreconditionError("spin-hall: requires non-relativistic |p| <= 0.1 mc");
  const Vec3 s_cross_e = s0.S.cross(E);
  if (!(s_cross_e.norm() > 0.0)) throw PreconditionError("spin-hall: S x E vanishes");
  if (std::abs(s0.S.dot(E)) > 1e-9 * s0.S.norm() * E.norm())
    throw PreconditionError("spin-hall: requires S perpendicular to E");
  const Vec3 dir = s_cross_e.normalized();

  auto drift = [&](const Trajectory& tr) {
    auto [ts, ys] = times_and(tr, anomalous_displacement(tr, dir, k));
    const LinearFit fit = linear_fit(ts, ys);
    if (fit.slope != 0.0 && std::abs(fit.slope) < 10.0 * fit.slope_stderr)
      throw PreconditionError("spin-hall: fit degenerate (signal below 10x fit noise); run longer");
    return fit.slope;
  };

  AnalysisReport r;
  r.observable = "spin_hall_drift";
  r.measured = drift(berry);
  r.predicted = -(k.e * k.hbar / (2.0 * k.m * k.m * k.c * k.c)) * s_cross_e.norm();
  r.relative_error = relative_error(r.measured, r.predicted);
  r.tolerance = tolerance;
  r.pass = r.relative_error <= tolerance;
  r.extras.emplace_back("direction_x", dir.x());
  r.extras.emplace_back("direction_y", dir.y());
  r.extras.emplace_back("direction_z", dir.z());
  if (pauli != nullptr) {
    const double dp = drift(*pauli);
    r.extras.emplace_back("pauli_drift", dp);
    if (dp != 0.0) {
      const double ratio = r.measured / dp;
      r.extras.emplace_back("berry_to_pauli_ratio", ratio);
      r.extras.emplace_back("ratio_tolerance", ratio_tolerance);
      const bool ratio_ok = std::abs(ratio - 2.0) <= ratio_tolerance;
      r.extras.emplace_back("ratio_pass", ratio_ok ? 1.0 : 0.0);
      r.pass = r.pass && ratio_ok;
    } else {
      r.notes.emplace_back("pauli drift is zero; ratio undefined");
    }
  }
  return r;
}

AnalysisReport monopole_check(const ParticleState& s, const FieldConfig& cfg,
                              const PhysConstants& k, double tolerance) {
  const FieldSample f = cfg.sample(s.r, s.t);
  const double mc = k.m * k.c;
  const double p = s.p.norm();
  if (p < 10.0 * mc) throw PreconditionError("monopole: requires |p| >= 10 mc");
  if (f.H.norm() != 0.0) throw PreconditionError("monopole: requires H = 0");

  const Derivatives d = rhs(s, cfg, RhsModel::berry_full, k);
  const Vec3 anomalous = d.rdot - s.p * (k.c * k.c / energy(s.p, k));
  const double lambda = s.S.dot(s.p) / (2.0 * p);
  const Vec3 predicted = -lambda * k.e * k.hbar * s.p.cross(f.E) / (p * p * p);

  AnalysisReport r;
  r.observable = "monopole";
  r.tolerance = tolerance;
  r.extras.emplace_back("helicity", lambda);
  for (int i = 0; i < 3; ++i) {
    r.extras.emplace_back(std::string("measured_") + "xyz"[i], anomalous(i));
    r.extras.emplace_back(std::string("predicted_") + "xyz"[i], predicted(i));
  }
  r.measured = anomalous.norm();
  r.predicted = predicted.norm();
  if (r.predicted > 0.0) {
    r.relative_error = (anomalous - predicted).norm() / r.predicted;
    r.pass = r.relative_error <= tolerance;
  } else {
    // Remainder of the 1/p^2 expansion: O(mc/p) relative to the monopole scale.
    const double floor = (mc / p) * std::abs(k.e * k.hbar) * f.E.norm() / (p * p);
    r.extras.emplace_back("floor", floor);
    r.relative_error = relative_error(r.measured, 0.0);
    r.pass = r.measured <= floor;
    r.notes.emplace_back("predicted term vanishes; measured compared with the expansion floor");
  }
  return r;
}

AnalysisReport cyclotron_shift(const Trajectory& full, const Trajectory& pauli,
                               const Trajectory* reference, const Vec3& H, const PhysConstants& k,
                               double tolerance, double difference_tolerance) {
  if (full.samples.empty()) throw PreconditionError("cyclotron: empty trajectory");
  const ParticleState& s0 = full.samples.front().state;
  const double h = H.norm();
  if (!(h > 0.0)) throw PreconditionError("cyclotron: requires H != 0");
  if (std::abs(s0.p.dot(H)) > 1e-9 * s0.p.norm() * h)
    throw PreconditionError("cyclotron: requires p perpendicular to H");
  const double sh = s0.S.dot(H) / (s0.S.norm() * h);
  if (std::abs(std::abs(sh) - 1.0) > 1e-9)
    throw PreconditionError("cyclotron: requires S parallel or antiparallel to H");
  const double mu = sh > 0.0 ? 1.0 : -1.0;
  const Vec3 axis = s0.p.normalized();

  const double m = k.m, c = k.c, e = k.e;
  const double p = s0.p.norm();
  const double w0 = std::abs(e) * h / (m * c);
  const double spin_term = mu * e * k.hbar * h / (2.0 * m * m * c * c * c);

  const double w_full = measure_frequency(full, axis);
  const double w_pauli = measure_frequency(pauli, axis);
  const double w_ref = reference != nullptr ? measure_frequency(*reference, axis)
                                            : std::abs(e) * c * h / energy(s0.p, k);

  AnalysisReport r;
  r.observable = "cyclotron_shift";
  r.measured = w_full;
  r.predicted = w0 * (1.0 - p * p / (2.0 * m * m * c * c) - spin_term);
  r.relative_error = relative_error(r.measured, r.predicted);
  r.tolerance = tolerance;

  const double term_full = w_full - w_ref;
  const double term_pauli = w_pauli - w_ref;
  const double diff = w_full - w_pauli;
  const double diff_pred = -2.0 * w0 * spin_term;  // -mu w0 e hbar H / m^2 c^3
  const bool has_spin_term = diff_pred != 0.0;
  const bool opposite = !has_spin_term || term_full * term_pauli < 0.0;
  const double diff_err = has_spin_term ? relative_error(diff, diff_pred) : std::abs(diff) / w0;
  const bool diff_ok = has_spin_term ? diff_err <= difference_tolerance : diff_err <= tolerance;

  r.extras.emplace_back("mu", mu);
  r.extras.emplace_back("omega_c0", w0);
  r.extras.emplace_back("omega_pauli", w_pauli);
  r.extras.emplace_back("omega_reference", w_ref);
  r.extras.emplace_back("spin_term_full", term_full);
  r.extras.emplace_back("spin_term_pauli", term_pauli);
  r.extras.emplace_back("opposite_sign", opposite ? 1.0 : 0.0);
  r.extras.emplace_back("difference_measured", diff);
  r.extras.emplace_back("difference_predicted", diff_pred);
  r.extras.emplace_back("difference_relative_error", diff_err);
  r.extras.emplace_back("difference_tolerance", difference_tolerance);
  r.pass = r.relative_error <= tolerance && opposite && diff_ok;
  return r;
}

AnalysisReport helicity_drift(const Trajectory& traj, const Vec3& H, const PhysConstants& k,
                              double tolerance) {
  if (traj.samples.size() < 3) throw PreconditionError("helicity: trajectory too short");
  const ParticleState& s0 = traj.samples.front().state;
  const double mc = k.m * k.c;
  const double p = s0.p.norm();
  if (p < 10.0 * mc) throw PreconditionError("helicity: requires |p| >= 10 mc");
  const double h = H.norm();
  if (!(h > 0.0)) throw PreconditionError("helicity: requires H != 0");
  const Vec3 dir = H / h;
  const double lambda = s0.S.dot(s0.p) / (2.0 * p);

  auto [ts, ys] = times_and(traj, anomalous_displacement(traj, dir, k));
  const LinearFit fit = linear_fit(ts, ys);

  AnalysisReport r;
  r.observable = "helicity_drift";
  r.measured = fit.slope;
  r.predicted = -lambda * k.e * k.hbar * h / (p * p);
  r.tolerance = tolerance;
  r.extras.emplace_back("helicity", lambda);
  r.extras.emplace_back("slope_stderr", fit.slope_stderr);
  if (r.predicted != 0.0) {
    if (fit.slope != 0.0 && std::abs(fit.slope) < 10.0 * fit.slope_stderr)
      r.notes.emplace_back("fit noise exceeds a tenth of the signal");
    r.relative_error = relative_error(r.measured, r.predicted);
    r.pass = r.relative_error <= tolerance;
  } else {
    const double floor = (mc / p) * std::abs(k.e * k.hbar) * h / (p * p);
    r.extras.emplace_back("floor", floor);
    r.relative_error = relative_error(r.measured, 0.0);
    r.pass = std::abs(r.measured) <= floor;
  }
  return r;
}

}  // namespace semidirac
