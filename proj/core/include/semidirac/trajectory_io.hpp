#pragma once

#include <iosfwd>
#include <string>

#include "semidirac/trajectory.hpp"

namespace semidirac {

/// Column order of every trajectory file.
inline constexpr const char* kTrajectoryHeader = "t,rx,ry,rz,px,py,pz,Sx,Sy,Sz,energy";

enum class TrajectoryFormat { csv, json };

TrajectoryFormat parse_format(const std::string& s);

/// Doubles are written with 17 significant digits; the energy column is
/// empty (CSV) or null (JSON) when no potential is available.
void write_csv(const Trajectory& traj, std::ostream& out);
void write_json(const Trajectory& traj, std::ostream& out);
void write_trajectory(const Trajectory& traj, TrajectoryFormat fmt, std::ostream& out);

/// Parses CSV produced by write_csv. Throws ParseError naming the line.
Trajectory read_csv(std::istream& in);

std::string format_double(double x);

}  // namespace semidirac
