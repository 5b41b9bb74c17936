#pragma once

#include <functional>

#include <Eigen/Core>

namespace semidirac::ode {

using State = Eigen::VectorXd;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;

/// One classical fourth-order Runge-Kutta step.
State rk4_step(const Rhs& f, double t, const State& y, double h);

struct AdaptiveSettings {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_initial = 0.0;  // 0: estimated from the derivative at the start
  double h_min = 1e-14;    // abort below this step size
  double h_max = 0.0;      // 0: unbounded
};

struct AdaptiveStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

/// Dormand-Prince 5(4) with first-same-as-last reuse and an elementwise
/// mixed absolute/relative error norm.
class DormandPrince45 {
 public:
  DormandPrince45(Rhs f, AdaptiveSettings settings);

  void reset(double t, const State& y);

  /// Advances the internal state by one accepted step, never past t_stop.
  /// Throws NumericalError on step-size underflow or a non-finite state.
  void step(double t_stop);

  [[nodiscard]] double time() const { return t_; }
  [[nodiscard]] const State& state() const { return y_; }
  /// Mutable access for projections applied between steps (invalidates FSAL).
  State& mutable_state() {
    fsal_valid_ = false;
    return y_;
  }
  [[nodiscard]] const AdaptiveStats& stats() const { return stats_; }
  [[nodiscard]] double suggested_step() const { return h_; }

 private:
  double initial_step();

  Rhs f_;
  AdaptiveSettings s_;
  double t_ = 0.0;
  double h_ = 0.0;
  State y_;
  State k1_;
  bool fsal_valid_ = false;
  AdaptiveStats stats_;
};

}  // namespace semidirac::ode
