#include "semidirac/fw_checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "semidirac/trajectory_io.hpp"

namespace semidirac {

bool CheckReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* CheckReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string CheckReport::to_text() const {
  std::ostringstream out;
  out.precision(6);
  out << title << '\n';
  for (const auto& c : checks)
    out << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << std::scientific << c.value
        << ' ' << c.comparison << ' ' << c.tolerance << std::defaultfloat << '\n';
  out << (all_pass() ? "all checks passed" : "some checks failed") << '\n';
  return out.str();
}

std::string CheckReport::to_key_values() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << c.name << ".value=" << format_double(c.value) << '\n'
        << c.name << ".tolerance=" << format_double(c.tolerance) << '\n'
        << c.name << ".pass=" << (c.pass ? "true" : "false") << '\n';
  }
  out << "pass=" << (all_pass() ? "true" : "false") << '\n';
  return out.str();
}

std::vector<Vec3> momentum_grid(const PhysConstants& k, int n, double pmax_over_mc,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  const double pmax = pmax_over_mc * k.m * k.c;
  std::vector<Vec3> out;
  out.reserve(static_cast<size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    Vec3 d(gauss(rng), gauss(rng), gauss(rng));
    const double len = d.norm();
    if (len < 1e-12) continue;
    // cube root keeps the points uniform in volume; stay off p = 0 where A vanishes
    const double radius = pmax * std::max(std::cbrt(unit(rng)), 1e-3);
    out.push_back(d / len * radius);
  }
  return out;
}

double relative_max_component_error(const MatrixVec2& a, const MatrixVec2& b) {
  double diff = 0.0, scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    diff = std::max(diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
    scale = std::max(scale, b[i].cwiseAbs().maxCoeff());
  }
  return diff / std::max(scale, 1e-300);
}

double diagonalization_slope(const Vec3& p, const Vec3& H, const PhysConstants& k,
                             const std::vector<double>& hbars) {
  std::vector<double> x, y;
  for (double h : hbars) {
    x.push_back(std::log(h));
    y.push_back(std::log(diagonalization_residual(p, H, k.with_hbar(h)).offdiag_norm));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

CheckReport verify_fw(const PhysConstants& k, const Vec3& H, double tol) {
  k.validate();
  CheckReport rep;
  rep.title = "verify-fw";
  const auto grid = momentum_grid(k);

  double unitarity = 0.0, herm = 0.0, herm_numeric = 0.0, conn = 0.0, richardson = 0.0;
  double trace = 0.0, projected = 0.0;
  for (const Vec3& p : grid) {
    unitarity = std::max(unitarity, unitarity_defect(fw_unitary(p, H, k)));
    const MatrixVec2 a = berry_connection_closed(p, k);
    const MatrixVec2 f = berry_curvature_closed(p, k);
    const MatrixVec2 fm = berry_curvature_matrix(p, k);
    const NumericConnection num = berry_connection_numeric(p, k);
    richardson = std::max(richardson, num.richardson_gap);
    conn = std::max(conn, relative_max_component_error(num.A, a));
    const double ep = energy(p, k);
    const CMat2 sp = sigma_dot(p);
    // tr[(sigma.p) F_k] = -c^2 p_k / E_p^2; the plain trace vanishes.
    const double scale = k.c * k.c * p.norm() / (ep * ep);
    for (int i = 0; i < 3; ++i) {
      herm = std::max({herm, hermiticity_defect(a[i]), hermiticity_defect(f[i]),
                       hermiticity_defect(fm[i])});
      herm_numeric = std::max(herm_numeric, hermiticity_defect(num.A[i]));
      const double expected = -k.c * k.c * p(i) / (ep * ep);
      trace = std::max(trace, std::abs(fm[i].trace()) / scale);
      projected = std::max(projected, std::abs((sp * fm[i]).trace() - expected) / scale);
    }
  }
  rep.checks.push_back({"unitarity_defect", unitarity, 1e-10, unitarity <= 1e-10});
  rep.checks.push_back({"hermiticity_defect", herm, 1e-10, herm <= 1e-10});
  rep.checks.push_back({"connection_relative_error", conn, tol, conn <= tol});
  rep.checks.push_back({"connection_hermiticity_defect", herm_numeric, tol, herm_numeric <= tol});
  rep.checks.push_back({"connection_richardson_gap", richardson, 1e-4, richardson <= 1e-4});
  rep.checks.push_back({"curvature_trace", trace, tol, trace <= tol});
  rep.checks.push_back({"curvature_projected_trace_error", projected, tol, projected <= tol});

  const Vec3 p0(0.6, -0.3, 0.8);
  const double slope = diagonalization_slope(p0, H, k, {1e-1, 1e-2, 1e-3, 1e-4});
  // The cross-block residual is first order in hbar, so the fitted slope sits
  // at 1 up to the O(hbar) curvature of the log-log curve.
  rep.checks.push_back({"offdiag_loglog_slope", slope, 1.0 - kSlopeAllowance,
                        slope >= 1.0 - kSlopeAllowance, ">="});

  // Ebar expansion error should fall two decades per decade of hbar.
  auto expansion_gap = [&](double h) {
    const PhysConstants kh = k.with_hbar(h);
    return (ebar_exact(p0, H, kh) - ebar_expansion(p0, H, kh)).norm();
  };
  const double order = std::log10(expansion_gap(1e-2) / expansion_gap(1e-3));
  rep.checks.push_back({"ebar_expansion_order", order, 1.9, order >= 1.9, ">="});
  return rep;
}

CheckReport verify_curvature(const PhysConstants& k, double tol) {
  k.validate();
  CheckReport rep;
  rep.title = "verify-curvature";
  double nonabelian = 0.0, abelian = 0.0;
  for (const Vec3& p : momentum_grid(k)) {
    const MatrixVec2 closed = berry_curvature_closed(p, k);
    nonabelian = std::max(nonabelian,
                          relative_max_component_error(berry_curvature_matrix(p, k), closed));
    abelian = std::max(abelian, relative_max_component_error(
                                    berry_curvature_matrix(p, k, CurlKind::abelian), closed));
  }
  rep.checks.push_back({"curvature_relative_error", nonabelian, tol, nonabelian <= tol});
  rep.checks.push_back({"abelian_max_deviation", abelian, 0.1, abelian >= 0.1, ">="});
  return rep;
}

}  // namespace semidirac
