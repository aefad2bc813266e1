#pragma once

// Plain-text atom system format:
//
//   N
//   Lx Ly Lz
//   x y z q [m vx vy vz]      (N lines)
//
// '#' starts a comment that runs to the end of the line; blank lines are
// ignored. The optional trailing columns must be present on every atom line
// or on none.

#include <iosfwd>
#include <string>

#include "pppm/model.hpp"

namespace pppm {

AtomSystem read_atom_system(std::istream &in);
AtomSystem read_atom_system_file(const std::string &path);

/// Writes the format above with round-trip precision. Masses and velocities
/// are written only when the system carries velocities.
void write_atom_system(std::ostream &out, const AtomSystem &system);

} // namespace pppm
