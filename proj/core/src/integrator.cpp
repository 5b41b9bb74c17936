#include "semidirac/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semidirac/types.hpp"

namespace semidirac::ode {

State rk4_step(const Rhs& f, double t, const State& y, double h) {
  State k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size());
  f(t, y, k1);
  f(t + 0.5 * h, y + 0.5 * h * k1, k2);
  f(t + 0.5 * h, y + 0.5 * h * k2, k3);
  f(t + h, y + h * k3, k4);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void check_finite(const State& y, double t) {
  if (!y.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite state encountered at t = " << t;
    throw NumericalError(msg.str());
  }
}

}  // namespace

DormandPrince45::DormandPrince45(Rhs f, AdaptiveSettings settings)
    : f_(std::move(f)), s_(settings) {}

void DormandPrince45::reset(double t, const State& y) {
  t_ = t;
  y_ = y;
  check_finite(y_, t_);
  k1_.resize(y.size());
  f_(t_, y_, k1_);
  ++stats_.evaluations;
  check_finite(k1_, t_);
  fsal_valid_ = true;
  h_ = s_.h_initial > 0.0 ? s_.h_initial : initial_step();
}

double DormandPrince45::initial_step() {
  // Hairer-Norsett-Wanner starting step heuristic.
  const auto scale = [&](const State& y) {
    return (s_.atol + s_.rtol * y.cwiseAbs().array()).matrix();
  };
  const State sc = scale(y_);
  const double d0 = std::sqrt((y_.array() / sc.array()).square().mean());
  const double d1 = std::sqrt((k1_.array() / sc.array()).square().mean());
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  State y1 = y_ + h0 * k1_;
  State k2(y_.size());
  f_(t_ + h0, y1, k2);
  ++stats_.evaluations;
  const double d2 = std::sqrt(((k2 - k1_).array() / sc.array()).square().mean()) / h0;
  const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                              : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
  double h = std::min(100.0 * h0, h1);
  if (s_.h_max > 0.0) h = std::min(h, s_.h_max);
  return h;
}

void DormandPrince45::step(double t_stop) {
  if (!fsal_valid_) {
    f_(t_, y_, k1_);
    ++stats_.evaluations;
    fsal_valid_ = true;
  }
  const Eigen::Index n = y_.size();
  State k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y_new(n);

  for (;;) {
    double h = h_;
    if (s_.h_max > 0.0) h = std::min(h, s_.h_max);
    bool clipped = false;
    if (t_ + h >= t_stop) {
      h = t_stop - t_;
      clipped = true;
    }
    if (h < s_.h_min && !clipped) {
      std::ostringstream msg;
      msg << "adaptive step underflow: h = " << h << " < h_min = " << s_.h_min << " at t = " << t_;
      throw NumericalError(msg.str());
    }

    f_(t_ + c2 * h, y_ + h * (a21 * k1_), k2);
    f_(t_ + c3 * h, y_ + h * (a31 * k1_ + a32 * k2), k3);
    f_(t_ + c4 * h, y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3), k4);
    f_(t_ + c5 * h, y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4), k5);
    f_(t_ + h, y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6);
    y_new = y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f_(t_ + h, y_new, k7);
    stats_.evaluations += 6;

    const State err = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = s_.atol + s_.rtol * std::max(std::abs(y_(i)), std::abs(y_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / sc);
    }
    if (!std::isfinite(err_norm)) {
      h_ = 0.25 * h;
      ++stats_.rejected;
      if (h_ < s_.h_min) check_finite(y_new, t_ + h);
      continue;
    }

    const double factor =
        err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    if (err_norm <= 1.0) {
      check_finite(y_new, t_ + h);
      t_ = clipped ? t_stop : t_ + h;
      y_ = y_new;
      k1_ = k7;
      ++stats_.accepted;
      // A clipped step says nothing about the natural step size.
      if (!clipped)
        h_ = h * factor;
      else if (factor < 1.0)
        h_ = std::min(h_, h * factor);
      return;
    }
    ++stats_.rejected;
    h_ = h * std::max(factor, 0.2);
  }
}

}  // namespace semidirac::ode
