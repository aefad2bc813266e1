#pragma once

// Synthetic test systems.
//
//   random_gas   uniform positions with a minimum pair separation, charges
//                alternating +1/-1 (exactly neutral for even N).
//   rocksalt     +-1 charges alternating on a simple cubic lattice of
//                nearest-neighbour spacing a; N = k^3 with k even. An optional
//                seeded jitter displaces every ion so forces are non-zero.
//   dipole_probe two opposite unit charges a given distance apart along x.
//
// All scenarios are deterministic for a given seed.

#include <cstdint>
#include <optional>
#include <string>

#include "pppm/model.hpp"

namespace pppm {

enum class ScenarioKind { RandomGas, Rocksalt, DipoleProbe };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario(const std::string &name);

struct ScenarioOptions {
  ScenarioKind kind = ScenarioKind::RandomGas;
  std::size_t n = 128;
  std::uint64_t seed = 1;

  /// Explicit cubic box edge; otherwise derived per scenario.
  std::optional<double> box_length;
  /// random_gas: number density used when no box length is given.
  double density = 0.5;
  /// random_gas: no two atoms closer than this (minimum image).
  double min_separation = 0.8;
  /// rocksalt: nearest-neighbour distance.
  double spacing = 2.0;
  /// rocksalt: maximum displacement per component, as a fraction of spacing.
  double jitter = 0.0;
  /// dipole_probe: charge separation; box edge defaults to 50.
  double separation = 1.0;
  /// Initial temperature (k_B = 1) for Maxwell-Boltzmann velocities; 0 gives
  /// zero velocities.
  double temperature = 0.0;
};

/// Throws ConfigurationError when N does not fit the scenario.
AtomSystem generate_scenario(const ScenarioOptions &options);

} // namespace pppm
