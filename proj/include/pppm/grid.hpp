#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pppm/model.hpp"

namespace pppm {

/// Dense real 3D grid, x-fastest: index = x + nx * (y + ny * z).
class Grid3 {
public:
  Grid3() = default;
  explicit Grid3(GridDims dims) : dims_(dims), values_(dims.count(), 0.0) {}

  const GridDims &dims() const { return dims_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims_.nx) *
               (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(z));
  }
  double &operator()(int x, int y, int z) { return values_[index(x, y, z)]; }
  double operator()(int x, int y, int z) const { return values_[index(x, y, z)]; }
  double &operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  double *data() { return values_.data(); }
  const double *data() const { return values_.data(); }
  std::vector<double> &values() { return values_; }
  const std::vector<double> &values() const { return values_; }

  void fill(double v) { values_.assign(values_.size(), v); }
  double sum() const;
  Grid3 &operator+=(const Grid3 &other);

  friend bool operator==(const Grid3 &, const Grid3 &) = default;

private:
  GridDims dims_;
  std::vector<double> values_;
};

/// Charge density rho (charge / length^3) on the mesh.
struct ChargeGrid {
  Grid3 density;
  Vec3 spacing;

  const GridDims &dims() const { return density.dims(); }
  double cell_volume() const { return spacing.x * spacing.y * spacing.z; }
  /// Sum of rho times the cell volume.
  double total_charge() const { return density.sum() * cell_volume(); }
};

/// Solver output: three field components E = -grad(phi) for IK, or the
/// potential phi alone for AD.
struct FieldGrids {
  DiffMode mode = DiffMode::IK;
  std::vector<Grid3> components;

  const GridDims &dims() const { return components.front().dims(); }
  const Grid3 &potential() const { return components.front(); }
  const Grid3 &field(std::size_t d) const { return components[d]; }
};

/// Leading harmonics of the AD self force. A charge q at fractional cell
/// offset s_d = x_d / h_d feels a spurious force from its own mesh image,
///   F_d = C q^2 (c[d][0] sin(2 pi s_d) + c[d][1] sin(4 pi s_d)),
/// which distribute_force_ad subtracts when given these coefficients.
struct SelfForceCoeffs {
  std::array<std::array<double, 2>, 3> c{};
};

} // namespace pppm
