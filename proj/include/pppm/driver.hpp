#pragma once

// One full force evaluation (pair + mesh) and a velocity-Verlet NVE loop.

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "pppm/gridmap.hpp"
#include "pppm/kspace.hpp"
#include "pppm/model.hpp"
#include "pppm/report.hpp"
#include "pppm/shortrange.hpp"
#include "pppm/stencil.hpp"

namespace pppm {

struct SolverOptions {
  int workers = 1;
  RowLoop rows = RowLoop::Padded;
  LjParams lj;
  /// Accept non-neutral systems and add the uniform-background energy term.
  bool neutralizing_background = false;
  /// AD only: subtract the leading self-force harmonics (off by default).
  bool ad_self_force = false;
};

struct ForceEvaluation {
  ForceSet forces;
  ForceSet pair_forces;
  ForceSet kspace_forces;
  EnergyBreakdown energy;
  SectionTimes times;
  /// Grid cells written by the charge mapping (S^3 per atom).
  std::size_t stencil_points = 0;
  std::size_t pairs = 0;
};

/// Owns the stencil table and k-space plan for a fixed box and PppmParams.
class PppmSolver {
public:
  PppmSolver(const PppmParams &params, const SimulationBox &box, SolverOptions options = {});

  const PppmParams &params() const { return params_; }
  const SolverOptions &options() const { return options_; }
  const KSpacePlan &plan() const { return plan_; }
  const StencilTable *table() const { return table_ ? &*table_ : nullptr; }
  WeightSource weights() const;

  ForceEvaluation compute(const AtomSystem &system) const;

private:
  PppmParams params_;
  SimulationBox box_;
  SolverOptions options_;
  std::optional<StencilTable> table_;
  KSpacePlan plan_;
};

/// Pair + long-range forces and energies for one configuration. Times are
/// attributed as: map/distribute to pppm_non_fft, transforms and influence
/// multiply to pppm_fft, short-range to pair.
ForceEvaluation compute_forces(const AtomSystem &system, const PppmParams &params, const StencilTable *table,
                               const KSpacePlan &plan, const SolverOptions &options = {});

struct StepRecord {
  int step = 0;
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double temperature = 0.0;
  Vec3 momentum;
};

struct Trajectory {
  /// Entry 0 is the initial state, then one per step.
  std::vector<StepRecord> records;
  SectionTimes times;
  double wall_seconds = 0.0;
  AtomSystem final_state;
};

double kinetic_energy(const AtomSystem &system);
/// sum m |v|^2 / (3 N), k_B = 1.
double temperature(const AtomSystem &system);
Vec3 momentum(const AtomSystem &system);

/// Velocity Verlet with a full force evaluation per step. Throws
/// ConfigurationError when the system has no velocities or dt <= 0; a
/// SingularityError is rethrown with the failing step prepended.
Trajectory integrate_nve(const AtomSystem &system, const PppmSolver &solver, double dt, int steps);

struct BenchResult {
  /// Fastest of the repeats, per section; total_seconds is the fastest total.
  TimingReport report;
  ForceEvaluation last;
};

/// Repeats solver.compute(system). Throws ConfigurationError for repeats < 1.
BenchResult benchmark_forces(const AtomSystem &system, const PppmSolver &solver, int repeats);

} // namespace pppm
