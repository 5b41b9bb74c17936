#include "semidirac/trajectory_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace semidirac {

TrajectoryFormat parse_format(const std::string& s) {
  if (s == "csv") return TrajectoryFormat::csv;
  if (s == "json") return TrajectoryFormat::json;
  throw ParseError("unknown output format '" + s + "' (expected csv|json)");
}

std::string format_double(double x) {
  std::array<char, 40> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return std::string(buf.data(), static_cast<size_t>(n));
}

namespace {

std::array<double, 10> columns(const ParticleState& s) {
  return {s.t, s.r.x(), s.r.y(), s.r.z(), s.p.x(), s.p.y(), s.p.z(), s.S.x(), s.S.y(), s.S.z()};
}

constexpr std::array<const char*, 11> kKeys = {"t",  "rx", "ry", "rz", "px",    "py",
                                               "pz", "Sx", "Sy", "Sz", "energy"};

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << kTrajectoryHeader << '\n';
  for (const auto& smp : traj.samples) {
    for (double v : columns(smp.state)) out << format_double(v) << ',';
    if (smp.energy) out << format_double(*smp.energy);
    out << '\n';
  }
}

void write_json(const Trajectory& traj, std::ostream& out) {
  out << "[\n";
  for (size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& smp = traj.samples[i];
    const auto cols = columns(smp.state);
    out << "  {";
    for (size_t c = 0; c < cols.size(); ++c) out << '"' << kKeys[c] << "\": " << format_double(cols[c]) << ", ";
    out << "\"energy\": " << (smp.energy ? format_double(*smp.energy) : std::string("null")) << '}';
    out << (i + 1 < traj.samples.size() ? ",\n" : "\n");
  }
  out << "]\n";
}

void write_trajectory(const Trajectory& traj, TrajectoryFormat fmt, std::ostream& out) {
  if (fmt == TrajectoryFormat::csv)
    write_csv(traj, out);
  else
    write_json(traj, out);
}

Trajectory read_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  long lineno = 1;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw ParseError("line 1: expected header '" + std::string(kTrajectoryHeader) + "'");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<double, 10> v{};
    size_t pos = 0;
    for (size_t c = 0; c < v.size(); ++c) {
      const size_t comma = line.find(',', pos);
      if (comma == std::string::npos)
        throw ParseError("line " + std::to_string(lineno) + ": expected 11 columns");
      const char* first = line.data() + pos;
      const char* last = line.data() + comma;
      auto [ptr, ec] = std::from_chars(first, last, v[c]);
      if (ec != std::errc() || ptr != last)
        throw ParseError("line " + std::to_string(lineno) + ": bad number in column '" +
                         kKeys[c] + "'");
      pos = comma + 1;
    }
    TrajectorySample smp;
    smp.state.t = v[0];
    smp.state.r = Vec3(v[1], v[2], v[3]);
    smp.state.p = Vec3(v[4], v[5], v[6]);
    smp.state.S = Vec3(v[7], v[8], v[9]);
    if (pos < line.size()) {
      double e = 0.0;
      auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), e);
      if (ec != std::errc() || ptr != line.data() + line.size())
        throw ParseError("line " + std::to_string(lineno) + ": bad number in column 'energy'");
      smp.energy = e;
    }
    traj.samples.push_back(std::move(smp));
  }
  return traj;
}

}  // namespace semidirac
