#include "pppm/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pppm/atom_io.hpp"
#include "pppm/driver.hpp"
#include "pppm/ewald.hpp"
#include "pppm/report.hpp"
#include "pppm/tuner.hpp"

namespace pppm {

GridDims parse_grid(const std::string &text) {
  GridDims dims;
  std::istringstream ss(text);
  std::string part;
  std::size_t d = 0;
  while (std::getline(ss, part, ',')) {
    if (d == 3) throw InvalidInput("--grid expects NX,NY,NZ, got '" + text + "'");
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(part, &used);
    } catch (const std::exception &) {
      throw InvalidInput("--grid expects NX,NY,NZ, got '" + text + "'");
    }
    if (used != part.size() || value <= 0) throw InvalidInput("--grid entries must be positive integers");
    dims[d++] = value;
  }
  if (d != 3) throw InvalidInput("--grid expects NX,NY,NZ, got '" + text + "'");
  return dims;
}

AtomSystem make_system(const RunConfig &config) {
  if (!config.input.empty()) {
    AtomSystem s = read_atom_system_file(config.input);
    if (s.has_velocities()) return s;
    return s.with_state(s.positions(), std::vector<Vec3>(s.size()));
  }
  ScenarioOptions o;
  o.kind = parse_scenario(config.scenario);
  o.n = config.n;
  o.seed = config.seed;
  o.box_length = config.box_length;
  o.density = config.density;
  o.spacing = config.spacing;
  o.jitter = config.jitter;
  o.separation = config.separation;
  o.temperature = config.temperature;
  return generate_scenario(o);
}

namespace {

TuneRequest make_request(const RunConfig &c, int order, DiffMode mode, double cutoff, double accuracy) {
  TuneRequest r;
  r.cutoff = cutoff;
  r.accuracy = accuracy;
  r.order = order;
  r.mode = mode;
  r.table_points = c.table_points;
  r.use_table = c.use_table;
  r.grid_bump = c.grid_bump;
  if (!c.grid.empty()) r.grid = parse_grid(c.grid);
  r.alpha = c.alpha;
  r.influence = c.optimal_influence ? InfluenceKind::Optimal : InfluenceKind::Deconvolved;
  return r;
}

PppmParams resolve(const RunConfig &c, const AtomSystem &system) {
  return plan_params(system.box(), summarize(system),
                     make_request(c, c.order, parse_diff_mode(c.mode), c.cutoff, c.accuracy));
}

SolverOptions solver_options(const RunConfig &c, const PppmParams &params) {
  SolverOptions o;
  o.workers = c.workers;
  o.ad_self_force = c.ad_self_force;
  if (c.workers < 1) throw ConfigurationError("--workers must be at least 1");
  if (c.lj) {
    o.lj.enabled = true;
    o.lj.epsilon = c.lj_epsilon;
    o.lj.sigma = c.lj_sigma;
    o.lj.cutoff = params.cutoff;
  }
  return o;
}

nlohmann::json params_json(const PppmParams &p, const AtomSystem &system) {
  return {{"cutoff", p.cutoff},
          {"accuracy", p.accuracy},
          {"order", p.order},
          {"mode", to_string(p.mode)},
          {"alpha", p.alpha},
          {"grid", {p.grid.nx, p.grid.ny, p.grid.nz}},
          {"grid_points", p.grid.count()},
          {"table_points", p.table_points},
          {"use_table", p.use_table},
          {"influence", p.influence == InfluenceKind::Optimal ? "optimal" : "deconvolved"},
          {"estimated_error", estimate_kspace_error(p.grid, system.box(), p.alpha, p.order, system.size(),
                                                    system.charge_squared_sum())}};
}

nlohmann::json base_meta(const RunConfig &c, const PppmParams &p, const AtomSystem &system) {
  nlohmann::json meta;
  meta["n"] = system.size();
  meta["scenario"] = c.input.empty() ? c.scenario : "file";
  meta["seed"] = c.seed;
  meta["box"] = {system.box().length(0), system.box().length(1), system.box().length(2)};
  meta["params"] = params_json(p, system);
  meta["workers"] = c.workers;
  meta["build"] = build_id();
  return meta;
}

nlohmann::json vec_json(const Vec3 &v) { return {v.x, v.y, v.z}; }

/// Writes records as JSON lines or CSV (one header, then rows).
class RecordSink {
public:
  RecordSink(const RunConfig &c, std::ostream &fallback) : format_(c.format) {
    if (format_ != "json" && format_ != "csv") throw InvalidInput("--format must be json or csv");
    if (!c.output.empty()) {
      file_ = std::make_unique<std::ofstream>(c.output);
      if (!*file_) throw InvalidInput("cannot open output file '" + c.output + "'");
    }
    out_ = file_ ? file_.get() : &fallback;
  }

  void write(const nlohmann::json &record) {
    validate_report(record);
    if (format_ == "json") {
      *out_ << record.dump() << '\n';
      return;
    }
    if (!header_written_) {
      *out_ << csv_header(record) << '\n';
      header_written_ = true;
    }
    *out_ << csv_row(record) << '\n';
  }

private:
  std::string format_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream *out_ = nullptr;
  bool header_written_ = false;
};

int cmd_run(const RunConfig &c, std::ostream &out) {
  const AtomSystem system = make_system(c);
  const PppmParams params = resolve(c, system);
  const PppmSolver solver(params, system.box(), solver_options(c, params));
  const Trajectory traj = integrate_nve(system, solver, c.dt, c.steps);

  const double e0 = traj.records.front().total;
  double drift = 0.0;
  for (const auto &r : traj.records) drift = std::max(drift, std::abs(r.total - e0) / std::abs(e0));

  TimingReport report;
  report.kind = "run";
  report.sections = traj.times;
  report.total_seconds = traj.wall_seconds;
  report.meta = base_meta(c, params, system);
  report.meta["steps"] = c.steps;
  report.meta["dt"] = c.dt;
  report.meta["energy_initial"] = e0;
  report.meta["energy_final"] = traj.records.back().total;
  report.meta["relative_drift"] = drift;
  report.meta["temperature_final"] = traj.records.back().temperature;
  report.meta["momentum_final"] = vec_json(traj.records.back().momentum);

  RecordSink sink(c, out);
  sink.write(report.to_json());
  return 0;
}

int cmd_verify(const RunConfig &c, std::ostream &out) {
  const AtomSystem system = make_system(c);
  const PppmParams params = resolve(c, system);
  const PppmSolver solver(params, system.box(), solver_options(c, params));
  const ForceEvaluation f = solver.compute(system);

  const int kmax = converged_kmax(system.box(), params.alpha);
  const EwaldResult ref = ewald_reference(system, params.alpha, params.cutoff, kmax, params.coulomb_prefactor());
  const EwaldResult exact = converged_ewald(system, params.coulomb_prefactor());

  double rel = 0.0;
  double rel_exact = 0.0;
  double abs_err = 0.0;
  const bool has_forces = ref.forces.mean_magnitude() > 0.0;
  if (has_forces) {
    const RmsError e = rms_force_error(f.forces, ref.forces);
    rel = e.relative;
    abs_err = e.absolute;
    rel_exact = rms_force_error(f.forces, exact.forces).relative;
  } else {
    abs_err = rms_force_error(f.forces, ForceSet(f.forces.size())).absolute;
  }
  const double energy_rel = std::abs(f.energy.total - exact.energy.total) / std::abs(exact.energy.total);
  const bool pass = !has_forces || rel <= 2.0 * params.accuracy;

  out << std::setprecision(6);
  out << "system        " << (c.input.empty() ? c.scenario : c.input) << "  N=" << system.size() << "\n";
  out << "alpha         " << params.alpha << "  grid " << to_string(params.grid) << "  order " << params.order
      << "  mode " << to_string(params.mode) << "\n";
  out << "rms_abs       " << abs_err << "\n";
  if (has_forces) {
    out << "rms_rel       " << rel << "  (limit " << 2.0 * params.accuracy << ")\n";
    out << "rms_rel_exact " << rel_exact << "\n";
  } else {
    out << "rms_rel       n/a (reference forces vanish)\n";
  }
  out << "energy        " << f.energy.total << "  reference " << exact.energy.total << "  rel " << energy_rel
      << "\n";
  out << "estimate      " << estimate_kspace_error(params.grid, system.box(), params.alpha, params.order,
                                                   system.size(), system.charge_squared_sum())
      << "\n";
  out << (pass ? "PASS" : "FAIL") << "\n";

  if (!c.output.empty()) {
    TimingReport report;
    report.kind = "verify";
    report.sections = f.times;
    report.total_seconds = f.times.measured();
    report.meta = base_meta(c, params, system);
    report.meta["rms_relative"] = rel;
    report.meta["rms_relative_exact"] = rel_exact;
    report.meta["rms_absolute"] = abs_err;
    report.meta["energy"] = f.energy.total;
    report.meta["energy_reference"] = exact.energy.total;
    report.meta["pass"] = pass;
    RecordSink sink(c, out);
    sink.write(report.to_json());
  }
  return pass ? 0 : 1;
}

nlohmann::json bench_record(const RunConfig &c, const AtomSystem &system, const PppmParams &params) {
  const PppmSolver solver(params, system.box(), solver_options(c, params));
  BenchResult b = benchmark_forces(system, solver, c.repeat);
  b.report.kind = "bench";
  b.report.meta = base_meta(c, params, system);
  b.report.meta["repeat"] = c.repeat;
  b.report.meta["stencil_points"] = b.last.stencil_points;
  b.report.meta["stencil_points_per_atom"] =
      static_cast<double>(b.last.stencil_points) / static_cast<double>(system.size());
  b.report.meta["pairs"] = b.last.pairs;
  b.report.meta["energy"] = b.last.energy.total;
  return b.report.to_json();
}

int cmd_bench(const RunConfig &c, std::ostream &out) {
  const AtomSystem system = make_system(c);
  const PppmParams params = resolve(c, system);
  RecordSink sink(c, out);
  sink.write(bench_record(c, system, params));
  return 0;
}

int cmd_tune(const RunConfig &c, std::ostream &out) {
  const AtomSystem system = make_system(c);
  const PppmParams params = resolve(c, system);
  nlohmann::json j = params_json(params, system);
  j["n"] = system.size();
  j["box"] = {system.box().length(0), system.box().length(1), system.box().length(2)};
  out << j.dump() << '\n';
  return 0;
}

int cmd_sweep(const RunConfig &c, std::ostream &out) {
  const AtomSystem system = make_system(c);
  const std::vector<double> accuracies = c.accuracies.empty() ? std::vector<double>{c.accuracy} : c.accuracies;
  const std::vector<int> orders = c.orders.empty() ? std::vector<int>{c.order} : c.orders;
  const std::vector<std::string> modes = c.modes.empty() ? std::vector<std::string>{c.mode} : c.modes;
  RecordSink sink(c, out);
  for (double cutoff : c.cutoffs) {
    for (double accuracy : accuracies) {
      for (int order : orders) {
        for (const auto &mode : modes) {
          const PppmParams params = plan_params(system.box(), summarize(system),
                                                make_request(c, order, parse_diff_mode(mode), cutoff, accuracy));
          nlohmann::json record = bench_record(c, system, params);
          record["kind"] = "sweep";
          sink.write(record);
        }
      }
    }
  }
  return 0;
}

void add_common(CLI::App *app, RunConfig &c) {
  app->add_option("--scenario", c.scenario, "random_gas, rocksalt or dipole_probe")->capture_default_str();
  app->add_option("--n", c.n, "Atom count")->capture_default_str();
  app->add_option("--seed", c.seed, "Scenario seed")->capture_default_str();
  app->add_option("--box", c.box_length, "Cubic box edge (overrides the scenario default)");
  app->add_option("--density", c.density, "random_gas number density")->capture_default_str();
  app->add_option("--spacing", c.spacing, "rocksalt nearest-neighbour spacing")->capture_default_str();
  app->add_option("--jitter", c.jitter, "rocksalt displacement, fraction of spacing")->capture_default_str();
  app->add_option("--separation", c.separation, "dipole_probe charge separation")->capture_default_str();
  app->add_option("--temperature", c.temperature, "Initial temperature")->capture_default_str();
  app->add_option("--input", c.input, "Atom file (overrides --scenario)");

  app->add_option("--cutoff", c.cutoff, "Real-space cutoff r_C")->capture_default_str();
  app->add_option("--accuracy", c.accuracy, "Relative force accuracy target")->capture_default_str();
  app->add_option("--order", c.order, "Stencil order (3, 5, 7)")->capture_default_str();
  app->add_option("--mode", c.mode, "Differentiation: ik or ad")->capture_default_str();
  app->add_option("--table-points", c.table_points, "Stencil lookup table size")->capture_default_str();
  app->add_flag("--no-table", [&c](std::int64_t) { c.use_table = false; }, "Evaluate stencil polynomials directly");
  app->add_option("--grid", c.grid, "Grid override NX,NY,NZ");
  app->add_option("--alpha", c.alpha, "Splitting parameter override");
  app->add_flag("--no-grid-bump", [&c](std::int64_t) { c.grid_bump = false; }, "Keep multiples of 16");
  app->add_flag("--optimal-influence", c.optimal_influence, "Use the aliasing-optimal influence function");
  app->add_flag("--ad-self-force", c.ad_self_force, "ad mode: subtract the mesh self-force harmonics");

  app->add_option("--workers", c.workers, "Worker threads")->capture_default_str();
  app->add_option("--output", c.output, "Write records to this file");
  app->add_option("--format", c.format, "json or csv")->capture_default_str();
}

void add_dynamics(CLI::App *app, RunConfig &c) {
  app->add_option("--steps", c.steps, "NVE steps")->capture_default_str();
  app->add_option("--dt", c.dt, "Time step")->capture_default_str();
  app->add_flag("--lj", c.lj, "Add a Lennard-Jones core with the Coulomb cutoff");
  app->add_option("--lj-epsilon", c.lj_epsilon)->capture_default_str();
  app->add_option("--lj-sigma", c.lj_sigma)->capture_default_str();
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  RunConfig c;
  CLI::App app{"PPPM electrostatics harness"};
  app.require_subcommand(1);
  auto *run = app.add_subcommand("run", "NVE simulation; writes one timing report");
  auto *verify = app.add_subcommand("verify", "Compare forces against the Ewald reference");
  auto *bench = app.add_subcommand("bench", "Repeat one force evaluation; writes one timing report");
  auto *tune = app.add_subcommand("tune", "Print resolved parameters and the error estimate");
  auto *sweep = app.add_subcommand("sweep", "Bench every cutoff x accuracy x order x mode combination");
  for (auto *sub : {run, verify, bench, tune, sweep}) {
    add_common(sub, c);
    add_dynamics(sub, c);
  }
  for (auto *sub : {bench, sweep}) sub->add_option("--repeat", c.repeat, "Evaluations per record")->capture_default_str();
  sweep->add_option("--cutoffs", c.cutoffs, "Cutoff list")->delimiter(',')->capture_default_str();
  sweep->add_option("--accuracies", c.accuracies, "Accuracy list")->delimiter(',');
  sweep->add_option("--orders", c.orders, "Order list")->delimiter(',');
  sweep->add_option("--modes", c.modes, "Mode list")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
    if (bench->parsed()) return cmd_bench(c, out);
    if (tune->parsed()) return cmd_tune(c, out);
    return cmd_sweep(c, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace pppm
