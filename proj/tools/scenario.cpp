#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "semidirac/spin_dynamics.hpp"

namespace semidirac::cli {

namespace {

struct Entry {
  YAML::Node node;
  int line = 0;
};

using Flat = std::map<std::string, Entry>;

std::string at_line(int line) { return "line " + std::to_string(line) + ": "; }

void flatten(const YAML::Node& node, const std::string& prefix, Flat& out) {
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    const int line = kv.first.Mark().line + 1;
    if (kv.second.IsMap()) {
      flatten(kv.second, full, out);
    } else {
      if (out.count(full) != 0) throw ParseError(at_line(line) + "duplicate key '" + full + "'");
      out[full] = {kv.second, line};
    }
  }
}

class Reader {
 public:
  explicit Reader(Flat flat) : flat_(std::move(flat)) {}

  [[nodiscard]] bool has(const std::string& key) const { return flat_.count(key) != 0; }

  [[nodiscard]] bool has_section(const std::string& section) const {
    const std::string pre = section + ".";
    return std::any_of(flat_.begin(), flat_.end(),
                       [&](const auto& kv) { return kv.first.rfind(pre, 0) == 0; });
  }

  [[nodiscard]] int line(const std::string& key) const {
    auto it = flat_.find(key);
    return it == flat_.end() ? 0 : it->second.line;
  }

  [[nodiscard]] std::string where(const std::string& key) const {
    return at_line(line(key)) + key + ": ";
  }

  [[nodiscard]] double number(const std::string& key) const {
    const Entry& e = get(key);
    if (!e.node.IsScalar()) throw ParseError(where(key) + "expected a number");
    try {
      const double v = e.node.as<double>();
      if (!std::isfinite(v)) throw ParseError(where(key) + "value must be finite");
      return v;
    } catch (const YAML::Exception&) {
      throw ParseError(where(key) + "expected a number, got '" + e.node.Scalar() + "'");
    }
  }

  [[nodiscard]] std::string text(const std::string& key) const {
    const Entry& e = get(key);
    if (!e.node.IsScalar()) throw ParseError(where(key) + "expected a string");
    return e.node.Scalar();
  }

  [[nodiscard]] bool boolean(const std::string& key) const {
    try {
      return get(key).node.as<bool>();
    } catch (const YAML::Exception&) {
      throw ParseError(where(key) + "expected true or false");
    }
  }

  [[nodiscard]] std::vector<double> list(const std::string& key, size_t expected = 0) const {
    const Entry& e = get(key);
    if (!e.node.IsSequence()) throw ParseError(where(key) + "expected a list");
    std::vector<double> out;
    for (const auto& item : e.node) {
      try {
        out.push_back(item.as<double>());
      } catch (const YAML::Exception&) {
        throw ParseError(where(key) + "list entries must be numbers");
      }
      if (!std::isfinite(out.back())) throw ParseError(where(key) + "entries must be finite");
    }
    if (expected != 0 && out.size() != expected)
      throw ParseError(where(key) + "expected " + std::to_string(expected) + " entries, got " +
                       std::to_string(out.size()));
    return out;
  }

  [[nodiscard]] Vec3 vec3(const std::string& key) const {
    const auto v = list(key, 3);
    return {v[0], v[1], v[2]};
  }

 private:
  [[nodiscard]] const Entry& get(const std::string& key) const {
    auto it = flat_.find(key);
    if (it == flat_.end()) throw ParseError("missing key '" + key + "'");
    return it->second;
  }

  Flat flat_;
};

void require(const Reader& r, const std::string& key) {
  if (!r.has(key)) throw ParseError("missing required key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys = {
      "constants.m",        "constants.c",           "constants.e",
      "constants.hbar",     "initial.t",             "initial.r",
      "initial.p",          "initial.spin",          "spin.S",
      "spin.chi",           "field.kind",            "field.E0",
      "field.H0",           "field.Z",               "field.softening",
      "integrator.scheme",  "integrator.dt",         "integrator.tol",
      "integrator.atol",    "integrator.dt_min",     "integrator.T",
      "integrator.output_every", "integrator.renormalize_spin", "model",
      "analysis.kind",      "analysis.tol",          "output.path",
      "output.format",      "sweep.hbar"};
  return keys;
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    throw ParseError(at_line(ex.mark.line + 1) + ex.msg);
  }
  if (!root.IsMap()) throw ParseError("scenario must be a mapping of sections");

  Flat flat;
  flatten(root, "", flat);
  const auto& known = scenario_keys();
  for (const auto& [key, entry] : flat)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError(at_line(entry.line) + "unknown key '" + key + "'");
  const Reader r(std::move(flat));

  for (const char* section : {"initial", "field"})
    if (!r.has_section(section)) throw ParseError(std::string("missing section '") + section + "'");
  require(r, "integrator.T");

  Scenario s;
  // constants
  for (auto [key, slot] : {std::pair{"constants.m", &s.constants.m},
                           std::pair{"constants.c", &s.constants.c},
                           std::pair{"constants.e", &s.constants.e},
                           std::pair{"constants.hbar", &s.constants.hbar}})
    if (r.has(key)) *slot = r.number(key);
  try {
    s.constants.validate();
  } catch (const PreconditionError& ex) {
    throw ParseError(std::string("constants: ") + ex.what());
  }

  // initial state
  require(r, "initial.r");
  require(r, "initial.p");
  s.initial.r = r.vec3("initial.r");
  s.initial.p = r.vec3("initial.p");
  if (r.has("initial.t")) s.initial.t = r.number("initial.t");

  const int spin_specs = static_cast<int>(r.has("spin.S")) + static_cast<int>(r.has("spin.chi")) +
                         static_cast<int>(r.has("initial.spin"));
  if (spin_specs == 0) throw ParseError("missing spin: give spin.S or spin.chi");
  if (spin_specs > 1) throw ParseError("spin given more than once (spin.S, spin.chi, initial.spin)");
  if (r.has("spin.chi")) {
    const auto c = r.list("spin.chi", 4);
    const double n = std::hypot(std::hypot(c[0], c[1]), std::hypot(c[2], c[3]));
    if (!(n > 0.0)) throw ParseError(r.where("spin.chi") + "spin not normalizable");
    const Spinor2 chi = Spinor2::normalized({c[0], c[1]}, {c[2], c[3]});
    s.initial.chi = chi.vec();
    s.initial.S = spin_from_spinor(chi).vec();
  } else {
    const std::string key = r.has("spin.S") ? "spin.S" : "initial.spin";
    const Vec3 v = r.vec3(key);
    if (!(v.norm() > 0.0)) throw ParseError(r.where(key) + "spin not normalizable");
    s.initial.S = v.normalized();
  }

  // field
  require(r, "field.kind");
  const std::string kind = r.text("field.kind");
  try {
    if (kind == "uniform" || kind == "crossed_uniform") {
      require(r, "field.E0");
      require(r, "field.H0");
      const Vec3 e0 = r.vec3("field.E0");
      const Vec3 h0 = r.vec3("field.H0");
      s.field = kind == "uniform" ? FieldConfig::uniform(e0, h0)
                                  : FieldConfig::crossed_uniform(e0, h0);
    } else if (kind == "coulomb") {
      require(r, "field.Z");
      require(r, "field.softening");
      s.field = FieldConfig::coulomb(r.number("field.Z"), r.number("field.softening"));
    } else {
      throw ParseError(r.where("field.kind") + "unknown field kind '" + kind +
                       "' (expected uniform|crossed_uniform|coulomb)");
    }
  } catch (const PreconditionError& ex) {
    throw ParseError(r.where("field.kind") + ex.what());
  }
  for (const char* key : {"field.E0", "field.H0"})
    if (kind == "coulomb" && r.has(key)) throw ParseError(r.where(key) + "not used by a coulomb field");
  for (const char* key : {"field.Z", "field.softening"})
    if (kind != "coulomb" && r.has(key))
      throw ParseError(r.where(key) + "only used by a coulomb field");

  // integrator
  auto& in = s.integrator;
  in.T = r.number("integrator.T");
  if (!(in.T > 0.0)) throw ParseError(r.where("integrator.T") + "must be positive");
  if (r.has("integrator.scheme")) {
    const std::string sch = r.text("integrator.scheme");
    try {
      in.scheme = parse_scheme(sch);
    } catch (const ParseError&) {
      throw ParseError(r.where("integrator.scheme") + "unknown scheme '" + sch +
                       "' (expected rk4|rk45)");
    }
  }
  auto positive = [&](const std::string& key, double& slot) {
    if (!r.has(key)) return;
    slot = r.number(key);
    if (!(slot > 0.0)) throw ParseError(r.where(key) + "must be positive");
  };
  positive("integrator.dt", in.dt);
  positive("integrator.tol", in.rtol);
  positive("integrator.atol", in.atol);
  positive("integrator.dt_min", in.dt_min);
  if (r.has("integrator.output_every")) {
    in.output_every = r.number("integrator.output_every");
    if (in.output_every < 0.0) throw ParseError(r.where("integrator.output_every") + "must be >= 0");
  }
  if (r.has("integrator.renormalize_spin"))
    in.renormalize_spin = r.boolean("integrator.renormalize_spin");

  if (r.has("model")) {
    try {
      s.model = parse_model(r.text("model"));
    } catch (const std::exception&) {
      throw ParseError(r.where("model") + "unknown model '" + r.text("model") +
                       "' (expected berry|pauli|classical)");
    }
  }

  if (r.has_section("analysis")) {
    require(r, "analysis.kind");
    AnalysisRequest a;
    a.kind = r.text("analysis.kind");
    static const std::vector<std::string> kinds = {"spin-hall", "monopole", "cyclotron", "helicity"};
    if (std::find(kinds.begin(), kinds.end(), a.kind) == kinds.end())
      throw ParseError(r.where("analysis.kind") + "unknown analysis '" + a.kind + "'");
    if (r.has("analysis.tol")) a.tol = r.number("analysis.tol");
    s.analysis = a;
  }

  if (r.has("output.path")) s.output_path = r.text("output.path");
  if (r.has("output.format")) {
    try {
      s.output_format = parse_format(r.text("output.format"));
    } catch (const ParseError& ex) {
      throw ParseError(r.where("output.format") + ex.what());
    }
  }

  if (r.has("sweep.hbar")) {
    s.hbar_sweep = r.list("sweep.hbar");
    if (s.hbar_sweep.empty()) throw ParseError(r.where("sweep.hbar") + "empty sweep");
    for (double h : s.hbar_sweep)
      if (h < 0.0) throw ParseError(r.where("sweep.hbar") + "hbar must be >= 0");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ParseError& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

}  // namespace semidirac::cli
