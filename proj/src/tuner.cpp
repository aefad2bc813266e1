#include "pppm/tuner.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "pppm/kspace.hpp"

namespace pppm {
namespace {

// Deserno-Holm coefficients c_{S,m} of the spline interpolation error series,
// rows indexed by order S (1..7), m = 0..S-1.
constexpr std::array<std::array<double, 7>, 8> kErrorSeries = {{
    {},
    {2.0 / 3.0},
    {1.0 / 50.0, 5.0 / 294.0},
    {1.0 / 588.0, 7.0 / 1440.0, 21.0 / 3872.0},
    {1.0 / 4320.0, 3.0 / 1936.0, 7601.0 / 2271360.0, 143.0 / 28800.0},
    {1.0 / 23232.0, 7601.0 / 13628160.0, 143.0 / 69120.0, 517231.0 / 106536960.0, 106640677.0 / 11737571328.0},
    {691.0 / 68140800.0, 13.0 / 57600.0, 47021.0 / 35512320.0, 9694607.0 / 2095994880.0,
     733191589.0 / 59609088000.0, 326190917.0 / 11700633600.0},
    {1.0 / 345600.0, 3617.0 / 35512320.0, 745739.0 / 838397952.0, 56399353.0 / 12773376000.0,
     25091609.0 / 1560084480.0, 1755948832039.0 / 36229939200000.0, 4887769399.0 / 37838389248.0},
}};

double dimension_error(double h, double length, double alpha, int order, std::size_t n_atoms, double q2sum) {
  const double ha = h * alpha;
  double series = 0.0;
  for (int m = 0; m < order; ++m) {
    series += kErrorSeries[static_cast<std::size_t>(order)][static_cast<std::size_t>(m)] * std::pow(ha, 2 * m);
  }
  const double root = std::sqrt(alpha * length * std::sqrt(2.0 * std::numbers::pi) * series /
                                static_cast<double>(n_atoms));
  return q2sum * std::pow(ha, order) * root / (length * length);
}

} // namespace

double select_alpha(double cutoff, double accuracy) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw ConfigurationError("cutoff must be positive");
  if (!(accuracy > 0.0 && accuracy < 1.0)) throw ConfigurationError("accuracy must lie in (0, 1)");
  return (1.35 - 0.15 * std::log(accuracy)) / cutoff;
}

double estimate_kspace_error(const GridDims &dims, const SimulationBox &box, double alpha, int order,
                             std::size_t n_atoms, double q2sum) {
  if (!is_supported_order(order)) throw ConfigurationError("stencil order must be 3, 5 or 7");
  if (n_atoms == 0 || !(q2sum > 0.0)) return 0.0;
  double sum_sq = 0.0;
  for (std::size_t d = 0; d < 3; ++d) {
    const double h = box.length(d) / dims[d];
    const double e = dimension_error(h, box.length(d), alpha, order, n_atoms, q2sum);
    sum_sq += e * e;
  }
  const double absolute = std::sqrt(sum_sq / 3.0);
  const double density = static_cast<double>(n_atoms) / box.volume();
  const double force_scale = q2sum / static_cast<double>(n_atoms) * std::cbrt(density * density);
  return kEstimatorCalibration * absolute / force_scale;
}

SystemSummary summarize(const AtomSystem &system) { return {system.size(), system.charge_squared_sum()}; }

PppmParams plan_params(const SimulationBox &box, const SystemSummary &summary, const TuneRequest &request) {
  PppmParams p;
  p.cutoff = request.cutoff;
  p.accuracy = request.accuracy;
  p.order = request.order;
  p.mode = request.mode;
  p.table_points = request.table_points;
  p.use_table = request.use_table;
  p.coulomb_constant = request.coulomb_constant;
  p.dielectric = request.dielectric;
  p.influence = request.influence;

  if (!is_supported_order(request.order)) throw ConfigurationError("stencil order must be 3, 5 or 7");
  p.alpha = request.alpha ? *request.alpha : select_alpha(request.cutoff, request.accuracy);

  if (request.grid) {
    p.grid = *request.grid;
  } else {
    GridSelection sel;
    sel.cap = request.grid_cap;
    sel.grid_bump = request.grid_bump;
    sel.ik_relaxation = request.ik_relaxation;
    sel.mode = request.mode;
    p.grid = select_grid_dims(box, p.alpha, request.accuracy, request.order, summary.n_atoms, summary.q2sum, sel);
  }
  p.validate(box);
  return p;
}

} // namespace pppm
