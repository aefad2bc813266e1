#pragma once

// Reference Ewald summation and force error metrics.
//
// The reciprocal part is a direct sum over integer modes |m_d| <= kmax,
//   E_k = (2 pi / V) sum_{k != 0} exp(-k^2 / 4 alpha^2) / k^2 |S(k)|^2,
//   S(k) = sum_j q_j exp(i k.r_j),  k = 2 pi (m_x / L_x, m_y / L_y, m_z / L_z),
// evaluated over the half space m > 0 (lexicographically) and doubled. The
// real-space part is a plain O(N^2) minimum-image loop (no cell list), so
// it is only valid for cutoff <= min(L)/2.
//
// Convergence: the largest omitted mode is suppressed by
// exp(-(pi kmax / (alpha L))^2); converged_kmax picks kmax so this is below
// a tolerance.

#include <cstddef>

#include "pppm/model.hpp"

namespace pppm {

struct EwaldResult {
  ForceSet forces;
  EnergyBreakdown energy;
};

/// Throws ConfigurationError for non-neutral systems or cutoff > min(L)/2.
EwaldResult ewald_reference(const AtomSystem &system, double alpha, double cutoff, int kmax,
                            double coulomb_prefactor = 1.0);

/// Smallest kmax with exp(-(pi kmax / (alpha L_max))^2) <= tolerance.
int converged_kmax(const SimulationBox &box, double alpha, double tolerance = 1e-12);

/// Splitting parameter making the real-space tail erfc(alpha * cutoff) <= tolerance.
double converged_alpha(double cutoff, double tolerance = 1e-12);

/// Fully converged Ewald sum with cutoff = min(L)/2, independent of any PPPM
/// parameters.
EwaldResult converged_ewald(const AtomSystem &system, double coulomb_prefactor = 1.0, double tolerance = 1e-12);

struct RmsError {
  double absolute = 0.0;
  double relative = 0.0;
};

/// absolute = sqrt(sum |F - F_ref|^2 / N); relative = absolute / sqrt(sum |F_ref|^2 / N).
/// Throws InvalidInput on length mismatch and Error when the reference norm is zero.
RmsError rms_force_error(const ForceSet &test, const ForceSet &reference);

} // namespace pppm
