#include "pppm/stencil.hpp"

#include <cmath>
#include <string>

namespace pppm {
namespace {

void check_offset(double t) {
  if (!(t >= -0.5 && t < 0.5)) {
    throw InvalidOffset("stencil offset " + std::to_string(t) + " outside [-1/2, 1/2)");
  }
}

// Fills spline[r] = M_n(f + r), r = 0..n-1, for f in (0, 1] and n >= 2.
// Returns M_{n-1}(f + r) in lower (entries 0..n-2) for the derivative.
void spline_values(double f, int n, std::array<double, kPaddedRowLength> &spline,
                   std::array<double, kPaddedRowLength> &lower) {
  spline.fill(0.0);
  spline[0] = f;
  spline[1] = 1.0 - f;
  lower = spline;
  for (int k = 3; k <= n; ++k) {
    lower = spline;
    const double inv = 1.0 / (k - 1);
    for (int r = k - 1; r >= 0; --r) {
      const double x = f + r;
      const double left = r < k - 1 ? lower[static_cast<std::size_t>(r)] : 0.0;
      const double right = r > 0 ? lower[static_cast<std::size_t>(r - 1)] : 0.0;
      spline[static_cast<std::size_t>(r)] = (x * left + (k - x) * right) * inv;
    }
  }
}

} // namespace

double WeightRow::sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void check_order(int order) {
  if (!is_supported_order(order)) {
    throw UnsupportedOrder("stencil order " + std::to_string(order) + " is not one of 3, 5, 7");
  }
}

void evaluate_weights(double t, int order, WeightRow &assignment, WeightRow &derivative) {
  check_order(order);
  check_offset(t);
  // Row r sits at spline argument r + 1/2 - t = f + r with f = 1/2 - t in (0, 1].
  const double f = 0.5 - t;
  std::array<double, kPaddedRowLength> spline{};
  std::array<double, kPaddedRowLength> lower{};
  spline_values(f, order, spline, lower);

  assignment.order = order;
  derivative.order = order;
  assignment.weights.fill(0.0);
  derivative.weights.fill(0.0);
  for (int r = 0; r < order; ++r) {
    const auto i = static_cast<std::size_t>(r);
    assignment.weights[i] = spline[i];
    // dM_S(x)/dx = M_{S-1}(x) - M_{S-1}(x-1), and dx/dt = -1.
    const double hi = r < order - 1 ? lower[i] : 0.0;
    const double lo = r > 0 ? lower[i - 1] : 0.0;
    derivative.weights[i] = lo - hi;
  }
}

WeightRow assignment_weights(double t, int order) {
  WeightRow a;
  WeightRow d;
  evaluate_weights(t, order, a, d);
  return a;
}

WeightRow derivative_weights(double t, int order) {
  WeightRow a;
  WeightRow d;
  evaluate_weights(t, order, a, d);
  return d;
}

NodeOffset nearest_node(double u) {
  const double node = std::floor(u + 0.5);
  double t = u - node;
  // u + 0.5 can round up across an integer; keep t inside [-1/2, 1/2).
  if (t < -0.5) return {static_cast<long>(node) - 1, t + 1.0};
  if (t >= 0.5) return {static_cast<long>(node) + 1, t - 1.0};
  return {static_cast<long>(node), t};
}

// ---------------------------------------------------------------------------

StencilTable::StencilTable(int order, int n_points) : order_(order), n_points_(n_points) {
  check_order(order);
  if (n_points < 2) throw ConfigurationError("lookup table needs at least 2 points");
  assignment_.resize(static_cast<std::size_t>(n_points));
  derivative_.resize(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    evaluate_weights(bin_center(k), order, assignment_[static_cast<std::size_t>(k)],
                     derivative_[static_cast<std::size_t>(k)]);
  }
}

double StencilTable::bin_center(int k) const { return -0.5 + (k + 0.5) / n_points_; }

int StencilTable::bin_index(double t) const {
  check_offset(t);
  const int k = static_cast<int>(std::floor((t + 0.5) * n_points_));
  return k < n_points_ ? k : n_points_ - 1;
}

StencilTable::Rows StencilTable::lookup(double t) const {
  const auto k = static_cast<std::size_t>(bin_index(t));
  return {assignment_[k], derivative_[k]};
}

StencilTable build_table(int order, int n_points) { return StencilTable(order, n_points); }

} // namespace pppm
