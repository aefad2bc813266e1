#include "pppm/kspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pppm/tuner.hpp"

namespace pppm {
namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double green(double k2, double alpha) { return 4.0 * kPi * std::exp(-k2 / (4.0 * alpha * alpha)) / k2; }

// Hockney-Eastwood optimal influence function at wave vector k, summing
// aliases k + 2 pi m / h for |m_d| <= 2.
double optimal_influence(const Vec3 &k, const Vec3 &h, double alpha, int order) {
  constexpr int kAliases = 2;
  const double k2 = dot(k, k);
  double numerator = 0.0;
  double denominator = 0.0;
  for (int mx = -kAliases; mx <= kAliases; ++mx) {
    const double kx = k.x + 2.0 * kPi * mx / h.x;
    const double ux = spline_transform(kx * h.x, order);
    for (int my = -kAliases; my <= kAliases; ++my) {
      const double ky = k.y + 2.0 * kPi * my / h.y;
      const double uy = spline_transform(ky * h.y, order);
      for (int mz = -kAliases; mz <= kAliases; ++mz) {
        const double kz = k.z + 2.0 * kPi * mz / h.z;
        const double uz = spline_transform(kz * h.z, order);
        const double u2 = (ux * uy * uz) * (ux * uy * uz);
        const double km2 = kx * kx + ky * ky + kz * kz;
        denominator += u2;
        if (km2 > 0.0) numerator += (k.x * kx + k.y * ky + k.z * kz) * u2 * green(km2, alpha);
      }
    }
  }
  if (denominator <= 0.0) return 0.0;
  return numerator / (k2 * denominator * denominator);
}

void check_dims(const ChargeGrid &rho, const KSpacePlan &plan) {
  if (!(rho.dims() == plan.dims())) {
    throw InvalidInput("charge grid " + to_string(rho.dims()) + " does not match plan " + to_string(plan.dims()));
  }
}

void check_spectrum(const std::vector<Complex> &rho_hat, const KSpacePlan &plan) {
  if (rho_hat.size() != plan.spectrum_size()) throw InvalidInput("spectrum size does not match plan");
}

} // namespace

double spline_transform(double kh, int order) { return std::pow(sinc(0.5 * kh), order); }

KSpacePlan::KSpacePlan(const GridDims &dims, const SimulationBox &box, double alpha, int order, InfluenceKind kind,
                       std::shared_ptr<const RealTransform3d> transform)
    : dims_(dims), box_(box), alpha_(alpha), order_(order), kind_(kind), half_x_(dims.nx / 2 + 1),
      transform_(std::move(transform)) {
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
    throw ConfigurationError("grid dimensions must be positive, got " + to_string(dims));
  }
  if (dims.nx < order || dims.ny < order || dims.nz < order) {
    throw ConfigurationError("grid " + to_string(dims) + " is smaller than the stencil order");
  }
  if (!(alpha > 0.0)) throw ConfigurationError("alpha must be positive");
  if (!is_supported_order(order)) throw ConfigurationError("stencil order must be 3, 5 or 7");
  if (!transform_) transform_ = make_fftw_transform(dims);
  if (!(transform_->dims() == dims)) throw ConfigurationError("transform dims differ from plan dims");

  Vec3 h;
  for (std::size_t d = 0; d < 3; ++d) {
    const int n = dims[d];
    h[d] = box.length(d) / n;
    k_[d].resize(static_cast<std::size_t>(n));
    dk_[d].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int m = signed_mode(i, n);
      const double k = 2.0 * kPi * m / box.length(d);
      k_[d][static_cast<std::size_t>(i)] = k;
      const bool nyquist = (n % 2 == 0) && (2 * m == n);
      dk_[d][static_cast<std::size_t>(i)] = nyquist ? 0.0 : k;
    }
  }

  influence_.assign(half_spectrum_size(dims), 0.0);
  for (int iz = 0; iz < dims.nz; ++iz) {
    for (int iy = 0; iy < dims.ny; ++iy) {
      for (int mx = 0; mx < half_x_; ++mx) {
        const Vec3 k = wave_vector(mx, iy, iz);
        const double k2 = dot(k, k);
        if (k2 == 0.0) continue;
        double g = 0.0;
        if (kind_ == InfluenceKind::Optimal) {
          g = optimal_influence(k, h, alpha, order);
        } else {
          const double deconv = spline_transform(k.x * h.x, order) * spline_transform(k.y * h.y, order) *
                                spline_transform(k.z * h.z, order);
          if (std::abs(deconv) >= kDeconvolutionFloor) g = green(k2, alpha) / (deconv * deconv);
        }
        influence_[spectrum_index(mx, iy, iz)] = g;
      }
    }
  }
  compute_self_force(h);
}

// Self energy of one charge on the mesh, by Poisson summation per dimension:
//   U(x) ~ sum_k G(k) prod_d A_d(k_d, x_d),
//   A_d = sum_{j,j'} W_j W_j' cos(2 pi (j - j') s_d),  W_j = sinc(k_d h_d / 2 + pi j)^S.
// Keeping the p = |j - j'| = 1, 2 harmonics in one dimension and p = 0 in
// the other two gives the coefficients below.
void KSpacePlan::compute_self_force(const Vec3 &h) {
  constexpr int kAlias = 4;
  std::array<std::array<std::vector<double>, 3>, 3> b; // b[d][p][i]
  for (std::size_t d = 0; d < 3; ++d) {
    const int n = dims_[d];
    for (auto &v : b[d]) v.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      const double kh = k_[d][static_cast<std::size_t>(i)] * h[d];
      std::array<double, 2 * kAlias + 3> w{};
      for (int j = -kAlias; j <= kAlias + 2; ++j) {
        w[static_cast<std::size_t>(j + kAlias)] = spline_transform(kh + 2.0 * kPi * j, order_);
      }
      for (int p = 0; p < 3; ++p) {
        double sum = 0.0;
        for (int j = -kAlias; j <= kAlias; ++j) {
          sum += w[static_cast<std::size_t>(j + kAlias)] * w[static_cast<std::size_t>(j + kAlias + p)];
        }
        b[d][static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] = sum;
      }
    }
  }
  std::array<std::array<double, 2>, 3> sums{};
  for (int iz = 0; iz < dims_.nz; ++iz) {
    for (int iy = 0; iy < dims_.ny; ++iy) {
      for (int mx = 0; mx < half_x_; ++mx) {
        const double g = hermitian_weight(mx) * influence_[spectrum_index(mx, iy, iz)];
        if (g == 0.0) continue;
        const std::array<std::size_t, 3> idx{static_cast<std::size_t>(mx), static_cast<std::size_t>(iy),
                                             static_cast<std::size_t>(iz)};
        for (std::size_t d = 0; d < 3; ++d) {
          double others = g;
          for (std::size_t e = 0; e < 3; ++e) {
            if (e != d) others *= b[e][0][idx[e]];
          }
          sums[d][0] += others * b[d][1][idx[d]];
          sums[d][1] += others * b[d][2][idx[d]];
        }
      }
    }
  }
  const double volume = box_.volume();
  for (std::size_t d = 0; d < 3; ++d) {
    self_force_.c[d][0] = 2.0 * kPi / (volume * h[d]) * sums[d][0];
    self_force_.c[d][1] = 4.0 * kPi / (volume * h[d]) * sums[d][1];
  }
}

Vec3 KSpacePlan::wave_vector(int ix, int iy, int iz) const {
  return {k_[0][static_cast<std::size_t>(ix)], k_[1][static_cast<std::size_t>(iy)],
          k_[2][static_cast<std::size_t>(iz)]};
}

double KSpacePlan::influence(int ix, int iy, int iz) const {
  if (ix < half_x_) return influence_[spectrum_index(ix, iy, iz)];
  // conjugate partner (-ix, -iy, -iz) mod n
  const int cx = dims_.nx - ix;
  const int cy = iy == 0 ? 0 : dims_.ny - iy;
  const int cz = iz == 0 ? 0 : dims_.nz - iz;
  return influence_[spectrum_index(cx, cy, cz)];
}

double KSpacePlan::hermitian_weight(int mx) const {
  if (mx == 0) return 1.0;
  if (dims_.nx % 2 == 0 && 2 * mx == dims_.nx) return 1.0;
  return 2.0;
}

KSpacePlan build_plan(const GridDims &dims, const SimulationBox &box, double alpha, int order, InfluenceKind kind) {
  return KSpacePlan(dims, box, alpha, order, kind);
}

GridDims adjust_grid_dims(const GridDims &dims, bool enabled) {
  if (!enabled) return dims;
  GridDims out = dims;
  for (std::size_t d = 0; d < 3; ++d) {
    if (out[d] % 16 == 0) out[d] += 1;
  }
  return out;
}

GridDims select_grid_dims(const SimulationBox &box, double alpha, double accuracy, int order, std::size_t n_atoms,
                          double q2sum, const GridSelection &selection) {
  if (!(alpha > 0.0)) throw ConfigurationError("alpha must be positive");
  if (!(accuracy > 0.0 && accuracy < 1.0)) throw ConfigurationError("accuracy must lie in (0, 1)");
  if (!is_supported_order(order)) throw ConfigurationError("stencil order must be 3, 5 or 7");
  const double target = selection.mode == DiffMode::IK ? accuracy * selection.ik_relaxation : accuracy;
  const double longest = std::max({box.length(0), box.length(1), box.length(2)});

  for (int n = order; n <= selection.cap; ++n) {
    const double h = longest / n;
    GridDims dims;
    bool over_cap = false;
    for (std::size_t d = 0; d < 3; ++d) {
      // ceil with a little slack so L/h == n exactly does not round up
      const int nd = static_cast<int>(std::ceil(box.length(d) / h - 1e-9));
      dims[d] = std::max(order, nd);
      over_cap = over_cap || dims[d] > selection.cap;
    }
    if (over_cap) break;
    if (estimate_kspace_error(dims, box, alpha, order, n_atoms, q2sum) <= target) {
      return adjust_grid_dims(dims, selection.grid_bump);
    }
  }
  throw ConfigurationError("accuracy " + std::to_string(accuracy) + " needs more than " +
                           std::to_string(selection.cap) + " grid points per dimension");
}

std::vector<Complex> density_spectrum(const ChargeGrid &rho, const KSpacePlan &plan) {
  check_dims(rho, plan);
  std::vector<Complex> out(plan.spectrum_size());
  plan.transform().forward(rho.density.values(), out);
  return out;
}

FieldGrids solve_ad(const std::vector<Complex> &rho_hat, const KSpacePlan &plan) {
  check_spectrum(rho_hat, plan);
  const auto &g = plan.influence_half();
  std::vector<Complex> phi_hat(rho_hat.size());
  for (std::size_t i = 0; i < phi_hat.size(); ++i) phi_hat[i] = g[i] * rho_hat[i];
  FieldGrids out{DiffMode::AD, {Grid3(plan.dims())}};
  plan.transform().backward(phi_hat, out.components[0].values());
  return out;
}

FieldGrids solve_ik(const std::vector<Complex> &rho_hat, const KSpacePlan &plan) {
  check_spectrum(rho_hat, plan);
  const GridDims &n = plan.dims();
  const auto &g = plan.influence_half();
  FieldGrids out{DiffMode::IK, {Grid3(n), Grid3(n), Grid3(n)}};
  std::vector<Complex> e_hat(rho_hat.size());
  for (std::size_t d = 0; d < 3; ++d) {
    for (int iz = 0; iz < n.nz; ++iz) {
      for (int iy = 0; iy < n.ny; ++iy) {
        for (int mx = 0; mx < plan.half_x(); ++mx) {
          const int i = d == 0 ? mx : (d == 1 ? iy : iz);
          const std::size_t s = plan.spectrum_index(mx, iy, iz);
          // -i k_d G rho_hat
          const double kg = plan.derivative_k(d, i) * g[s];
          e_hat[s] = Complex(kg * rho_hat[s].imag(), -kg * rho_hat[s].real());
        }
      }
    }
    plan.transform().backward(e_hat, out.components[d].values());
  }
  return out;
}

double spectrum_energy(const std::vector<Complex> &rho_hat, const KSpacePlan &plan, double cell_volume) {
  check_spectrum(rho_hat, plan);
  const GridDims &n = plan.dims();
  const auto &g = plan.influence_half();
  double sum = 0.0;
  for (int iz = 0; iz < n.nz; ++iz) {
    for (int iy = 0; iy < n.ny; ++iy) {
      for (int mx = 0; mx < plan.half_x(); ++mx) {
        const std::size_t s = plan.spectrum_index(mx, iy, iz);
        sum += plan.hermitian_weight(mx) * g[s] * std::norm(rho_hat[s]);
      }
    }
  }
  return 0.5 * cell_volume * sum / static_cast<double>(n.count());
}

FieldGrids poisson_ik(const ChargeGrid &rho, const KSpacePlan &plan) { return solve_ik(density_spectrum(rho, plan), plan); }

FieldGrids poisson_ad(const ChargeGrid &rho, const KSpacePlan &plan) { return solve_ad(density_spectrum(rho, plan), plan); }

double kspace_energy(const ChargeGrid &rho, const KSpacePlan &plan) {
  return spectrum_energy(density_spectrum(rho, plan), plan, rho.cell_volume());
}

double background_energy(double net_charge, double volume, double alpha) {
  return -kPi * net_charge * net_charge / (2.0 * volume * alpha * alpha);
}

} // namespace pppm
