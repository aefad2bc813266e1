#include "pppm/ewald.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace pppm {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void real_space(const AtomSystem &system, double alpha, double cutoff, double pref, ForceSet &forces,
                double &energy) {
  const auto &pos = system.positions();
  const auto &q = system.charges();
  const double rc2 = cutoff * cutoff;
  const double gauss_pref = 2.0 * alpha / std::sqrt(kPi);
  energy = 0.0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (std::size_t j = i + 1; j < system.size(); ++j) {
      const Vec3 d = minimum_image(pos[i] - pos[j], system.box());
      const double r2 = dot(d, d);
      if (r2 >= rc2) continue;
      const double r = std::sqrt(r2);
      if (r < 1e-10) throw SingularityError("atoms " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      const double qq = pref * q[i] * q[j];
      const double e = std::erfc(alpha * r) / r;
      energy += qq * e;
      const double f = qq * (e + gauss_pref * std::exp(-alpha * alpha * r2)) / r2;
      forces[i] += d * f;
      forces[j] -= d * f;
    }
  }
}

// Phase factors exp(i 2 pi m x / L) for m = 0..kmax, per atom.
std::vector<std::vector<cplx>> phases(const AtomSystem &system, std::size_t dim, int kmax) {
  const double L = system.box().length(dim);
  std::vector<std::vector<cplx>> out(system.size(), std::vector<cplx>(static_cast<std::size_t>(kmax) + 1));
  for (std::size_t j = 0; j < system.size(); ++j) {
    const double theta = 2.0 * kPi * system.positions()[j][dim] / L;
    for (int m = 0; m <= kmax; ++m) out[j][static_cast<std::size_t>(m)] = std::polar(1.0, m * theta);
  }
  return out;
}

cplx phase_at(const std::vector<cplx> &row, int m) {
  return m >= 0 ? row[static_cast<std::size_t>(m)] : std::conj(row[static_cast<std::size_t>(-m)]);
}

void reciprocal_space(const AtomSystem &system, double alpha, int kmax, double pref, ForceSet &forces,
                      double &energy) {
  const SimulationBox &box = system.box();
  const double volume = box.volume();
  const auto &q = system.charges();
  const std::size_t n = system.size();
  const auto px = phases(system, 0, kmax);
  const auto py = phases(system, 1, kmax);
  const auto pz = phases(system, 2, kmax);
  std::vector<cplx> e(n);
  energy = 0.0;

  for (int mx = 0; mx <= kmax; ++mx) {
    for (int my = -kmax; my <= kmax; ++my) {
      for (int mz = -kmax; mz <= kmax; ++mz) {
        // half space: each +-m pair once
        if (mx == 0 && (my < 0 || (my == 0 && mz <= 0))) continue;
        const Vec3 k{2.0 * kPi * mx / box.length(0), 2.0 * kPi * my / box.length(1), 2.0 * kPi * mz / box.length(2)};
        const double k2 = dot(k, k);
        const double a = std::exp(-k2 / (4.0 * alpha * alpha)) / k2;
        cplx s(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          e[j] = px[j][static_cast<std::size_t>(mx)] * phase_at(py[j], my) * phase_at(pz[j], mz);
          s += q[j] * e[j];
        }
        // doubled for the -k partner
        energy += 2.0 * (2.0 * kPi / volume) * a * std::norm(s);
        const double fpref = 2.0 * (4.0 * kPi / volume) * a;
        for (std::size_t j = 0; j < n; ++j) {
          const double im = (std::conj(s) * e[j]).imag();
          forces[j] += k * (pref * fpref * q[j] * im);
        }
      }
    }
  }
  energy *= pref;
}

} // namespace

EwaldResult ewald_reference(const AtomSystem &system, double alpha, double cutoff, int kmax,
                            double coulomb_prefactor) {
  system.require_neutral();
  if (!(alpha > 0.0)) throw ConfigurationError("alpha must be positive");
  if (!(cutoff > 0.0) || cutoff > 0.5 * system.box().min_length()) {
    throw ConfigurationError("reference cutoff must lie in (0, min(L)/2]");
  }
  if (kmax < 1) throw ConfigurationError("kmax must be at least 1");

  EwaldResult out{ForceSet(system.size()), {}};
  double e_real = 0.0;
  double e_recip = 0.0;
  real_space(system, alpha, cutoff, coulomb_prefactor, out.forces, e_real);
  reciprocal_space(system, alpha, kmax, coulomb_prefactor, out.forces, e_recip);
  const double e_self = -coulomb_prefactor * alpha / std::sqrt(kPi) * system.charge_squared_sum();
  out.energy = EnergyBreakdown::make(e_real, e_recip, e_self);
  return out;
}

int converged_kmax(const SimulationBox &box, double alpha, double tolerance) {
  const double longest = std::max({box.length(0), box.length(1), box.length(2)});
  const double kmax = alpha * longest * std::sqrt(-std::log(tolerance)) / kPi;
  return std::max(1, static_cast<int>(std::ceil(kmax)));
}

double converged_alpha(double cutoff, double tolerance) {
  // erfc is monotone; bisect on x = alpha * cutoff
  double lo = 0.0;
  double hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid) > tolerance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi / cutoff;
}

EwaldResult converged_ewald(const AtomSystem &system, double coulomb_prefactor, double tolerance) {
  const double cutoff = 0.5 * system.box().min_length();
  const double alpha = converged_alpha(cutoff, tolerance);
  return ewald_reference(system, alpha, cutoff, converged_kmax(system.box(), alpha, tolerance), coulomb_prefactor);
}

RmsError rms_force_error(const ForceSet &test, const ForceSet &reference) {
  if (test.size() != reference.size()) throw InvalidInput("force sets differ in length");
  if (reference.size() == 0) throw InvalidInput("empty force sets");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Vec3 d = test[i] - reference[i];
    diff += dot(d, d);
    ref += dot(reference[i], reference[i]);
  }
  const auto n = static_cast<double>(test.size());
  RmsError out;
  out.absolute = std::sqrt(diff / n);
  if (ref == 0.0) throw Error("relative force error is undefined for an all-zero reference");
  out.relative = out.absolute / std::sqrt(ref / n);
  return out;
}

} // namespace pppm
