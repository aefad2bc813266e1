#pragma once

// Reciprocal-space Poisson solve on the charge mesh.
//
// Conventions (used by every function here):
//   rho_hat(k) = sum_g rho_g exp(-i k.r_g)             (forward, unnormalized)
//   phi_hat(k) = G(k) rho_hat(k)                        (AD)
//   E_hat_d(k) = -i k_d G(k) rho_hat(k)                 (IK)
//   grid values = (1 / (nx ny nz)) sum_k ... exp(i k.r_g) (backward)
//   E_kspace   = (h^3 / (2 nx ny nz)) sum_{k != 0} G(k) |rho_hat(k)|^2
// with h^3 the cell volume. G carries no Coulomb constant; callers scale
// fields and energies by C / dielectric.
//
// The default influence function is
//   G(k) = 4 pi exp(-k^2 / 4 alpha^2) / (k^2 D(k)^2),  D(k) = prod_d sinc(k_d h_d / 2)^S
// which deconvolves both the charge assignment and the force interpolation.
// For even n the Nyquist wave number is dropped from the derivative so
// the IK fields stay real and odd in k.

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "pppm/fft.hpp"
#include "pppm/grid.hpp"
#include "pppm/model.hpp"

namespace pppm {

/// Modes with |D(k)| below this get G = 0.
inline constexpr double kDeconvolutionFloor = 1e-10;

/// Signed mode index in (-n/2, n/2] for storage index i in [0, n).
inline int signed_mode(int i, int n) { return i <= n / 2 ? i : i - n; }

/// Transform of the order-S centered B-spline at k*h: sinc(kh/2)^S.
double spline_transform(double kh, int order);

class KSpacePlan {
public:
  KSpacePlan(const GridDims &dims, const SimulationBox &box, double alpha, int order,
             InfluenceKind kind = InfluenceKind::Deconvolved,
             std::shared_ptr<const RealTransform3d> transform = nullptr);

  const GridDims &dims() const { return dims_; }
  const SimulationBox &box() const { return box_; }
  double alpha() const { return alpha_; }
  int order() const { return order_; }
  InfluenceKind influence_kind() const { return kind_; }
  const RealTransform3d &transform() const { return *transform_; }

  std::size_t spectrum_size() const { return influence_.size(); }
  std::size_t spectrum_index(int mx, int iy, int iz) const {
    return static_cast<std::size_t>(mx) +
           static_cast<std::size_t>(half_x_) *
               (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(iz));
  }
  /// Half-spectrum x extent, nx/2 + 1.
  int half_x() const { return half_x_; }

  /// Wave vector of a storage index (ix may be any value in [0, nx)).
  Vec3 wave_vector(int ix, int iy, int iz) const;
  /// G at a storage index, any ix in [0, nx) (uses G(k) = G(-k) for ix > nx/2).
  double influence(int ix, int iy, int iz) const;
  const std::vector<double> &influence_half() const { return influence_; }

  /// Derivative wave number per dimension and storage index (Nyquist zeroed).
  double derivative_k(std::size_t d, int i) const { return dk_[d][static_cast<std::size_t>(i)]; }

  /// Weight of each half-spectrum x index in full-spectrum sums (1 or 2).
  double hermitian_weight(int mx) const;

  const SelfForceCoeffs &self_force() const { return self_force_; }

private:
  void compute_self_force(const Vec3 &h);

  GridDims dims_;
  SimulationBox box_;
  double alpha_;
  int order_;
  InfluenceKind kind_;
  int half_x_;
  std::array<std::vector<double>, 3> k_;
  std::array<std::vector<double>, 3> dk_;
  std::vector<double> influence_;
  SelfForceCoeffs self_force_;
  std::shared_ptr<const RealTransform3d> transform_;
};

KSpacePlan build_plan(const GridDims &dims, const SimulationBox &box, double alpha, int order,
                      InfluenceKind kind = InfluenceKind::Deconvolved);

/// Any dimension divisible by 16 is bumped by one (FFT sizes that are
/// multiples of 16 perform badly in common FFT libraries).
GridDims adjust_grid_dims(const GridDims &dims, bool enabled = true);

struct GridSelection {
  /// Largest count allowed in any dimension.
  int cap = 512;
  bool grid_bump = true;
  /// Multiplies the accuracy target for IK (IK tolerates a slightly coarser grid).
  double ik_relaxation = 1.0;
  DiffMode mode = DiffMode::IK;
};

/// Coarsest grid (equal spacing target in all dimensions) whose estimated
/// relative k-space force error is <= accuracy, then adjust_grid_dims.
/// Throws ConfigurationError when the cap would be exceeded.
GridDims select_grid_dims(const SimulationBox &box, double alpha, double accuracy, int order, std::size_t n_atoms,
                          double q2sum, const GridSelection &selection = {});

/// Forward transform of the density.
std::vector<Complex> density_spectrum(const ChargeGrid &rho, const KSpacePlan &plan);

FieldGrids solve_ik(const std::vector<Complex> &rho_hat, const KSpacePlan &plan);
FieldGrids solve_ad(const std::vector<Complex> &rho_hat, const KSpacePlan &plan);
double spectrum_energy(const std::vector<Complex> &rho_hat, const KSpacePlan &plan, double cell_volume);

FieldGrids poisson_ik(const ChargeGrid &rho, const KSpacePlan &plan);
FieldGrids poisson_ad(const ChargeGrid &rho, const KSpacePlan &plan);

/// Reciprocal-space energy for C = 1; multiply by the Coulomb prefactor.
double kspace_energy(const ChargeGrid &rho, const KSpacePlan &plan);

/// Energy of a uniform neutralizing background for net charge Q:
/// -pi Q^2 / (2 V alpha^2), for C = 1.
double background_energy(double net_charge, double volume, double alpha);

} // namespace pppm
