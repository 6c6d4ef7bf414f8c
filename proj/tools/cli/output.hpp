#pragma once

// Trajectory writers. Both are byte-for-byte deterministic for a given input.

#include <ostream>
#include <string>
#include <vector>

#include <lagstab/sim.hpp>

namespace lagstab::cli {

inline constexpr const char* kCsvHeader = "t,x,y,xdot,ydot,E,u,u2";

/// One row per sample, %.17g, LF line endings. Missing channels print nan.
void emit_csv(const Trajectory& traj, std::ostream& out);

/// Line plot of the named channels against t. Unknown channel names throw
/// std::invalid_argument.
void emit_svg(const Trajectory& traj, const std::vector<std::string>& channels, std::ostream& out);

/// Column of a trajectory by CSV name ("t", "x", ..., "u2"); empty if absent.
const std::vector<double>& channel(const Trajectory& traj, const std::string& name);

}  // namespace lagstab::cli
