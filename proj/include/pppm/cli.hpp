#pragma once

// Command-line harness: pppm {run|verify|bench|tune|sweep} [flags].
//
// Exit codes: 0 success, 1 validation or runtime failure (including a verify
// run whose error exceeds 2 * accuracy), 2 usage error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pppm/model.hpp"
#include "pppm/scenario.hpp"

namespace pppm {

struct RunConfig {
  std::string scenario = "random_gas";
  std::size_t n = 512;
  std::uint64_t seed = 1;
  std::optional<double> box_length;
  double density = 0.5;
  double spacing = 2.0;
  double jitter = 0.1;
  double separation = 1.0;
  double temperature = 0.0;

  double cutoff = 5.0;
  double accuracy = 1e-4;
  int order = 7;
  std::string mode = "ik";
  int table_points = 5000;
  bool use_table = true;
  bool grid_bump = true;
  std::string grid;
  std::optional<double> alpha;
  bool optimal_influence = false;
  bool ad_self_force = false;

  int steps = 100;
  double dt = 0.002;
  int workers = 1;
  int repeat = 3;
  bool lj = false;
  double lj_epsilon = 1.0;
  double lj_sigma = 1.0;

  std::string input;
  std::string output;
  std::string format = "json";

  std::vector<double> cutoffs{3, 4, 5, 6, 7};
  std::vector<double> accuracies;
  std::vector<int> orders;
  std::vector<std::string> modes;
};

/// "NX,NY,NZ" -> GridDims. Throws InvalidInput.
GridDims parse_grid(const std::string &text);

/// The system described by a config: --input when given, else the scenario.
AtomSystem make_system(const RunConfig &config);

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace pppm
