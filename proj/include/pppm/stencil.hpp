#pragma once

// Per-dimension charge-assignment weights.
//
// Offset convention: an atom at grid coordinate u (position / spacing) is
// registered to its nearest node n0 = floor(u + 1/2), and t = u - n0 lies in
// [-1/2, 1/2). Row entry r (r = 0..S-1) belongs to node n0 + r - (S-1)/2 and
// holds the centered cardinal B-spline of order S at the node-atom distance:
//
//   w_r(t) = M_S(r + 1/2 - t)
//
// with M_1 = 1 on [0,1) and M_n(x) = x/(n-1) M_{n-1}(x) + (n-x)/(n-1) M_{n-1}(x-1).
// For S = 3, t = 0 this gives (M_3(0.5), M_3(1.5), M_3(2.5)) = (1/8, 3/4, 1/8).
//
// Derivative rows hold d w_r / dt, i.e. the derivative with respect to the
// atom offset in grid units.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "pppm/model.hpp"

namespace pppm {

/// Rows are always this long; entries at index >= order are exactly 0.0.
inline constexpr int kPaddedRowLength = 8;

class InvalidOffset : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class UnsupportedOrder : public ConfigurationError {
public:
  using ConfigurationError::ConfigurationError;
};

struct WeightRow {
  int order = 0;
  alignas(64) std::array<double, kPaddedRowLength> weights{};

  double operator[](std::size_t r) const { return weights[r]; }
  double sum() const;
  static constexpr int padded_len() { return kPaddedRowLength; }
  friend bool operator==(const WeightRow &, const WeightRow &) = default;
};

/// Throws UnsupportedOrder unless order is 3, 5 or 7.
void check_order(int order);

WeightRow assignment_weights(double t, int order);
WeightRow derivative_weights(double t, int order);

/// Computes both families at once (shares the recursion).
void evaluate_weights(double t, int order, WeightRow &assignment, WeightRow &derivative);

/// Splits a grid coordinate into its nearest node and offset t in [-1/2, 1/2).
struct NodeOffset {
  long node = 0;
  double t = 0.0;
};
NodeOffset nearest_node(double grid_coordinate);

/// Precomputed weights at n_points bin centers. Bin k covers
/// [-1/2 + k/n, -1/2 + (k+1)/n) and stores the exact evaluation at
/// t_k = -1/2 + (k + 1/2)/n. Lookup returns the row of the bin containing t.
class StencilTable {
public:
  StencilTable(int order, int n_points);

  int order() const { return order_; }
  int n_points() const { return n_points_; }
  double bin_width() const { return 1.0 / n_points_; }
  double bin_center(int k) const;
  int bin_index(double t) const;

  const WeightRow &assignment_row(int k) const { return assignment_[static_cast<std::size_t>(k)]; }
  const WeightRow &derivative_row(int k) const { return derivative_[static_cast<std::size_t>(k)]; }

  struct Rows {
    const WeightRow &assignment;
    const WeightRow &derivative;
  };
  /// Nearest-entry lookup, no interpolation. Throws InvalidOffset outside [-1/2, 1/2).
  Rows lookup(double t) const;

private:
  int order_;
  int n_points_;
  std::vector<WeightRow> assignment_;
  std::vector<WeightRow> derivative_;
};

StencilTable build_table(int order, int n_points);

/// Supplies weight rows to the mapping kernels either from a table or by
/// direct polynomial evaluation.
class WeightSource {
public:
  /// Direct evaluation.
  explicit WeightSource(int order) : order_(order) { check_order(order); }
  /// Table lookup; the table must outlive the source.
  explicit WeightSource(const StencilTable &table) : order_(table.order()), table_(&table) {}

  int order() const { return order_; }
  bool tabulated() const { return table_ != nullptr; }

  void assignment(double t, WeightRow &out) const {
    if (table_) {
      out = table_->lookup(t).assignment;
    } else {
      out = assignment_weights(t, order_);
    }
  }
  void both(double t, WeightRow &assign, WeightRow &deriv) const {
    if (table_) {
      const auto rows = table_->lookup(t);
      assign = rows.assignment;
      deriv = rows.derivative;
    } else {
      evaluate_weights(t, order_, assign, deriv);
    }
  }

private:
  int order_;
  const StencilTable *table_ = nullptr;
};

} // namespace pppm
