#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scenario.hpp"
#include "semidirac/analyses.hpp"
#include "semidirac/fw_checks.hpp"
#include "semidirac/trajectory_io.hpp"

namespace sd = semidirac;
using sd::cli::Scenario;

namespace {

enum Exit { kOk = 0, kFailedCheck = 1, kParse = 2, kPrecondition = 3, kNumerical = 4, kIo = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string output;
  std::string format;
  std::string model;
  std::string kind;
  std::string report = "text";
  std::optional<double> hbar;
  std::optional<double> tol;
};

Scenario load(const Options& o) {
  if (o.config.empty()) throw sd::ParseError("--config is required");
  Scenario s = sd::cli::load_scenario(o.config);
  if (!o.model.empty()) s.model = sd::parse_model(o.model);
  if (o.hbar) {
    s.constants.hbar = *o.hbar;
    s.hbar_sweep.clear();
  }
  if (o.tol) s.integrator.rtol = *o.tol;
  if (!o.format.empty()) s.output_format = sd::parse_format(o.format);
  if (!o.output.empty()) s.output_path = o.output;
  s.constants.validate();
  return s;
}

void write_to(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
}

sd::Trajectory run(const Scenario& s, sd::RhsModel model, const sd::PhysConstants& k) {
  return sd::integrate(s.initial, s.field, model, k, s.integrator);
}

std::string trajectory_text(const sd::Trajectory& t, sd::TrajectoryFormat fmt) {
  std::ostringstream out;
  sd::write_trajectory(t, fmt, out);
  return out.str();
}

std::string sweep_path(const std::string& base, double hbar) {
  char tag[64];
  std::snprintf(tag, sizeof tag, "_hbar%g", hbar);
  const auto dot = base.find_last_of('.');
  const auto slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return base + tag;
  return base.substr(0, dot) + tag + base.substr(dot);
}

int cmd_simulate(const Options& o) {
  const Scenario s = load(o);
  const std::string path = s.output_path.value_or("");
  if (s.hbar_sweep.empty()) {
    write_to(path, trajectory_text(run(s, s.model, s.constants), s.output_format));
    return kOk;
  }
  if (path.empty() || path == "-")
    throw sd::ParseError("sweep.hbar writes one file per point and needs --output or output.path");
  std::vector<std::future<std::string>> jobs;
  for (double h : s.hbar_sweep) {
    jobs.push_back(std::async(std::launch::async, [&s, h] {
      return trajectory_text(run(s, s.model, s.constants.with_hbar(h)), s.output_format);
    }));
  }
  for (size_t i = 0; i < jobs.size(); ++i) {
    const std::string file = sweep_path(path, s.hbar_sweep[i]);
    write_to(file, jobs[i].get());
    std::cerr << "wrote " << file << '\n';
  }
  return kOk;
}

std::string render(const sd::CheckReport& r, const std::string& mode) {
  return mode == "kv" ? r.to_key_values() : r.to_text();
}

sd::PhysConstants constants_for_verify(const Options& o, sd::Vec3* H) {
  sd::PhysConstants k;
  if (!o.config.empty()) {
    const Scenario s = load(o);
    k = s.constants;
    if (H != nullptr && s.field.h_uniform()) *H = s.field.sample(s.initial.r, s.initial.t).H;
  }
  if (o.hbar) k.hbar = *o.hbar;
  k.validate();
  return k;
}

int cmd_verify_fw(const Options& o) {
  sd::Vec3 H(0.05, -0.03, 0.04);
  const sd::PhysConstants k = constants_for_verify(o, &H);
  const sd::CheckReport rep = sd::verify_fw(k, H, o.tol.value_or(1e-6));
  write_to(o.output, render(rep, o.report));
  return rep.all_pass() ? kOk : kFailedCheck;
}

int cmd_verify_curvature(const Options& o) {
  const sd::PhysConstants k = constants_for_verify(o, nullptr);
  const sd::CheckReport rep = sd::verify_curvature(k, o.tol.value_or(1e-6));
  write_to(o.output, render(rep, o.report));
  return rep.all_pass() ? kOk : kFailedCheck;
}

int cmd_analyze(const Options& o) {
  const Scenario s = load(o);
  std::string kind = o.kind;
  if (kind.empty() && s.analysis) kind = s.analysis->kind;
  if (kind.empty()) throw sd::ParseError("--kind or analysis.kind is required");
  std::optional<double> tol = o.tol;
  if (!tol && s.analysis) tol = s.analysis->tol;

  const sd::PhysConstants& k = s.constants;
  const sd::FieldSample f0 = s.field.sample(s.initial.r, s.initial.t);
  sd::AnalysisReport rep;
  if (kind == "spin-hall") {
    const auto berry = run(s, sd::RhsModel::berry_full, k);
    const auto pauli = run(s, sd::RhsModel::pauli_canonical, k);
    rep = sd::spin_hall_drift(berry, f0.E, k, &pauli, tol.value_or(0.02));
  } else if (kind == "monopole") {
    rep = sd::monopole_check(s.initial, s.field, k, tol.value_or(0.01));
  } else if (kind == "cyclotron") {
    auto full = std::async(std::launch::async, [&] { return run(s, sd::RhsModel::berry_full, k); });
    auto pauli =
        std::async(std::launch::async, [&] { return run(s, sd::RhsModel::pauli_canonical, k); });
    const auto ref = run(s, sd::RhsModel::berry_full, k.with_hbar(0.0));
    const auto tf = full.get();
    const auto tp = pauli.get();
    rep = sd::cyclotron_shift(tf, tp, &ref, f0.H, k, tol.value_or(1e-3));
  } else if (kind == "helicity") {
    rep = sd::helicity_drift(run(s, sd::RhsModel::berry_full, k), f0.H, k, tol.value_or(0.02));
  } else {
    throw sd::ParseError("unknown analysis kind '" + kind +
                         "' (expected spin-hall|monopole|cyclotron|helicity)");
  }
  std::cout << (o.report == "kv" ? rep.to_key_values() : rep.to_text());
  if (!o.output.empty()) write_to(o.output, rep.to_key_values());
  return rep.pass ? kOk : kFailedCheck;
}

int cmd_compare_pauli(const Options& o) {
  Scenario s = load(o);
  // Both runs must share sample times.
  if (s.integrator.output_every <= 0.0) s.integrator.output_every = s.integrator.T / 1000.0;
  auto berry_job =
      std::async(std::launch::async, [&] { return run(s, sd::RhsModel::berry_full, s.constants); });
  const auto pauli = run(s, sd::RhsModel::pauli_canonical, s.constants);
  const auto berry = berry_job.get();
  if (berry.samples.size() != pauli.samples.size())
    throw sd::NumericalError("compare-pauli: sample grids differ between models");

  std::ostringstream csv;
  csv << "t,berry_rx,berry_ry,berry_rz,berry_px,berry_py,berry_pz,berry_Sx,berry_Sy,berry_Sz,"
         "pauli_rx,pauli_ry,pauli_rz,pauli_px,pauli_py,pauli_pz,pauli_Sx,pauli_Sy,pauli_Sz\n";
  double dr = 0.0, dp = 0.0, ds = 0.0;
  for (size_t i = 0; i < berry.samples.size(); ++i) {
    const auto& a = berry.samples[i].state;
    const auto& b = pauli.samples[i].state;
    dr = std::max(dr, (a.r - b.r).norm());
    dp = std::max(dp, (a.p - b.p).norm());
    ds = std::max(ds, (a.S - b.S).norm());
    csv << sd::format_double(a.t);
    for (const auto* st : {&a, &b})
      for (const sd::Vec3* v : {&st->r, &st->p, &st->S})
        for (int c = 0; c < 3; ++c) csv << ',' << sd::format_double((*v)(c));
    csv << '\n';
  }
  const auto& fa = berry.samples.back().state;
  const auto& fb = pauli.samples.back().state;
  std::ostringstream rep;
  rep << "model           berry_full                      pauli_canonical\n";
  auto row = [&](const char* name, const sd::Vec3& x, const sd::Vec3& y) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s  % .6e % .6e % .6e   % .6e % .6e % .6e\n", name, x(0), x(1),
                  x(2), y(0), y(1), y(2));
    rep << buf;
  };
  row("r", fa.r, fb.r);
  row("p", fa.p, fb.p);
  row("S", fa.S, fb.S);
  rep << "max |dr| = " << dr << "\nmax |dp| = " << dp << "\nmax |dS| = " << ds << '\n';
  std::cout << rep.str();
  if (s.output_path) write_to(*s.output_path, csv.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical Dirac electron dynamics with spin"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", o.config, "scenario file (YAML)");
    if (needs_config) c->required();
    sub->add_option("--output", o.output, "output path (default: stdout)");
    sub->add_option("--hbar", o.hbar, "override constants.hbar");
    sub->add_option("--tol", o.tol, "integrator or check tolerance");
  };
  auto* sim = app.add_subcommand("simulate", "integrate a scenario and write the trajectory");
  add_common(sim, true);
  sim->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--model", o.model, "berry|pauli|classical");

  auto* vfw = app.add_subcommand("verify-fw", "check the FW transformation and connection");
  add_common(vfw, false);
  auto* vcurv = app.add_subcommand("verify-curvature", "check the non-abelian curvature");
  add_common(vcurv, false);

  auto* ana = app.add_subcommand("analyze", "measure an observable against its closed form");
  add_common(ana, true);
  ana->add_option("--kind", o.kind, "spin-hall|monopole|cyclotron|helicity");
  ana->add_option("--model", o.model, "ignored; analyses pick their models");

  auto* cmp = app.add_subcommand("compare-pauli", "run berry and pauli models side by side");
  add_common(cmp, true);

  for (auto* sub : {vfw, vcurv, ana})
    sub->add_option("--report", o.report, "text|kv")->check(CLI::IsMember({"text", "kv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*vfw) return cmd_verify_fw(o);
    if (*vcurv) return cmd_verify_curvature(o);
    if (*ana) return cmd_analyze(o);
    if (*cmp) return cmd_compare_pauli(o);
  } catch (const sd::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const sd::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const sd::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kParse;
}
