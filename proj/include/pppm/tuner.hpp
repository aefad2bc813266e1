#pragma once

// Resolution of the user-facing knobs (cutoff, accuracy, stencil order,
// differentiation mode) into a complete PppmParams.

#include <cstddef>
#include <optional>

#include "pppm/model.hpp"

namespace pppm {

/// alpha = (1.35 - 0.15 ln(accuracy)) / cutoff.
double select_alpha(double cutoff, double accuracy);

/// Scale applied to the raw spline-interpolation error estimate. Set so that
/// grids chosen for accuracy eps keep the measured error of the order-7
/// stencil under 2 eps on the 512-atom gas and jittered rock salt, both
/// modes, eps in {1e-3, 1e-4}; the worst measured case stays below eps.
inline constexpr double kEstimatorCalibration = 3.0;

/// Relative RMS k-space force error estimate for a grid.
///
/// Per dimension the absolute error follows the Deserno-Holm spline
/// interpolation series,
///   dF_d = q2 (h_d a)^S sqrt(a L_d sqrt(2 pi) sum_m c_{S,m} (h_d a)^{2m} / N) / L_d^2,
/// combined as sqrt((dF_x^2 + dF_y^2 + dF_z^2) / 3) and divided by the force
/// between two mean charges at the mean interparticle spacing,
/// (q2 / N) (N / V)^{2/3}.
double estimate_kspace_error(const GridDims &dims, const SimulationBox &box, double alpha, int order,
                             std::size_t n_atoms, double q2sum);

struct SystemSummary {
  std::size_t n_atoms = 0;
  double q2sum = 0.0;
};

SystemSummary summarize(const AtomSystem &system);

struct TuneRequest {
  double cutoff = 0.0;
  double accuracy = 1e-4;
  int order = 7;
  DiffMode mode = DiffMode::IK;
  int table_points = 5000;
  bool use_table = true;
  bool grid_bump = true;
  /// Multiplies the accuracy target when choosing IK grids. 1 means the
  /// estimator is mode-blind.
  double ik_relaxation = 1.0;
  int grid_cap = 512;
  std::optional<GridDims> grid;
  std::optional<double> alpha;
  InfluenceKind influence = InfluenceKind::Deconvolved;
  double coulomb_constant = 1.0;
  double dielectric = 1.0;
};

/// Pure function of its arguments. Explicit grid or alpha overrides bypass
/// estimation (an explicit grid is used verbatim, without the bump rule).
/// Throws ConfigurationError on invalid knobs or inconsistent overrides.
PppmParams plan_params(const SimulationBox &box, const SystemSummary &summary, const TuneRequest &request);

} // namespace pppm
