#include "pppm/driver.hpp"

#include <algorithm>
#include <chrono>

namespace pppm {

namespace {

std::optional<StencilTable> make_table(const PppmParams &params) {
  if (!params.use_table) return std::nullopt;
  return StencilTable(params.order, params.table_points);
}

} // namespace

PppmSolver::PppmSolver(const PppmParams &params, const SimulationBox &box, SolverOptions options)
    : params_(params), box_(box), options_(std::move(options)), table_(make_table(params)),
      plan_((params.validate(box), params.grid), box, params.alpha, params.order, params.influence) {
  options_.lj.validate(params_.cutoff);
}

WeightSource PppmSolver::weights() const { return make_weight_source(params_, table()); }

ForceEvaluation PppmSolver::compute(const AtomSystem &system) const {
  if (!(system.box() == box_)) throw InvalidInput("system box differs from the box the solver was built for");
  return compute_forces(system, params_, table(), plan_, options_);
}

ForceEvaluation compute_forces(const AtomSystem &system, const PppmParams &params, const StencilTable *table,
                               const KSpacePlan &plan, const SolverOptions &options) {
  params.validate(system.box());
  if (!options.neutralizing_background) system.require_neutral();
  if (!(plan.dims() == params.grid) || plan.order() != params.order || plan.alpha() != params.alpha ||
      !(plan.box() == system.box())) {
    throw ConfigurationError("k-space plan does not match params and box");
  }
  const WeightSource weights = make_weight_source(params, table);
  const MapOptions map_opts{options.workers, options.rows};
  const double pref = params.coulomb_prefactor();

  ForceEvaluation out;
  SectionTimes &t = out.times;

  double e_pair = 0.0;
  {
    ScopedTimer timer(t.pair);
    const CellList cells(system, params.cutoff);
    PairResult pr = pair_forces(system, cells, params.alpha, params.cutoff, options.lj, {pref, options.workers});
    out.pair_forces = std::move(pr.forces);
    e_pair = pr.energy;
    out.pairs = pr.pairs;
  }

  ChargeGrid rho;
  {
    ScopedTimer timer(t.pppm_non_fft);
    rho = map_charge(system, params, weights, map_opts);
    out.stencil_points = stencil_points_touched(system.size(), params.order);
  }

  FieldGrids fields;
  double e_kspace = 0.0;
  {
    ScopedTimer timer(t.pppm_fft);
    const auto rho_hat = density_spectrum(rho, plan);
    e_kspace = pref * spectrum_energy(rho_hat, plan, rho.cell_volume());
    fields = params.mode == DiffMode::IK ? solve_ik(rho_hat, plan) : solve_ad(rho_hat, plan);
  }
  if (options.neutralizing_background) {
    e_kspace += pref * background_energy(system.net_charge(), system.box().volume(), params.alpha);
  }

  {
    ScopedTimer timer(t.pppm_non_fft);
    out.kspace_forces = params.mode == DiffMode::IK ? distribute_force_ik(fields, system, params, weights, map_opts)
                                                    : distribute_force_ad(fields, system, params, weights, map_opts,
                                                                          options.ad_self_force ? &plan.self_force() : nullptr);
  }

  out.forces = out.pair_forces;
  out.forces += out.kspace_forces;
  out.energy = EnergyBreakdown::make(e_pair, e_kspace, self_energy(system, params.alpha, pref));
  return out;
}

// ---------------------------------------------------------------------------

double kinetic_energy(const AtomSystem &system) {
  double ke = 0.0;
  if (!system.has_velocities()) return 0.0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    ke += 0.5 * system.masses()[i] * dot(system.velocities()[i], system.velocities()[i]);
  }
  return ke;
}

double temperature(const AtomSystem &system) {
  return 2.0 * kinetic_energy(system) / (3.0 * static_cast<double>(system.size()));
}

Vec3 momentum(const AtomSystem &system) {
  Vec3 p;
  if (!system.has_velocities()) return p;
  for (std::size_t i = 0; i < system.size(); ++i) p += system.velocities()[i] * system.masses()[i];
  return p;
}

Trajectory integrate_nve(const AtomSystem &system, const PppmSolver &solver, double dt, int steps) {
  if (!system.has_velocities()) throw ConfigurationError("NVE integration needs velocities");
  if (!(dt > 0.0)) throw ConfigurationError("time step must be positive");
  if (steps < 0) throw ConfigurationError("step count must be non-negative");

  const auto start = std::chrono::steady_clock::now();
  Trajectory traj{{}, {}, 0.0, system};
  auto evaluate = [&](const AtomSystem &s, int step) {
    try {
      return solver.compute(s);
    } catch (const SingularityError &e) {
      throw SingularityError("step " + std::to_string(step) + ": " + e.what());
    }
  };
  auto record = [&](int step, const AtomSystem &s, const ForceEvaluation &f) {
    StepRecord r;
    r.step = step;
    r.kinetic = kinetic_energy(s);
    r.potential = f.energy.total;
    r.total = r.kinetic + r.potential;
    r.temperature = temperature(s);
    r.momentum = momentum(s);
    traj.records.push_back(r);
  };

  AtomSystem current = system;
  ForceEvaluation f = evaluate(current, 0);
  traj.times += f.times;
  record(0, current, f);

  const auto &mass = system.masses();
  const std::size_t n = system.size();
  for (int step = 1; step <= steps; ++step) {
    std::vector<Vec3> pos = current.positions();
    std::vector<Vec3> vel = current.velocities();
    for (std::size_t i = 0; i < n; ++i) {
      vel[i] += f.forces[i] * (0.5 * dt / mass[i]);
      pos[i] += vel[i] * dt;
    }
    current = current.with_state(std::move(pos), vel);
    f = evaluate(current, step);
    traj.times += f.times;
    for (std::size_t i = 0; i < n; ++i) vel[i] += f.forces[i] * (0.5 * dt / mass[i]);
    current = current.with_state(current.positions(), std::move(vel));
    record(step, current, f);
  }
  traj.final_state = current;
  traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

BenchResult benchmark_forces(const AtomSystem &system, const PppmSolver &solver, int repeats) {
  if (repeats < 1) throw ConfigurationError("repeat count must be at least 1");
  BenchResult out;
  out.report.kind = "bench";
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    out.last = solver.compute(system);
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    SectionTimes &best = out.report.sections;
    const SectionTimes &t = out.last.times;
    if (r == 0) {
      best = t;
      out.report.total_seconds = total;
      continue;
    }
    best.pppm_non_fft = std::min(best.pppm_non_fft, t.pppm_non_fft);
    best.pppm_fft = std::min(best.pppm_fft, t.pppm_fft);
    best.pair = std::min(best.pair, t.pair);
    out.report.total_seconds = std::min(out.report.total_seconds, total);
  }
  return out;
}

} // namespace pppm
