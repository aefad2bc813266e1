#pragma once

// Real-space part of the Ewald split: screened Coulomb pairs within the
// cutoff, found through a periodic cell list, plus optional truncated
// Lennard-Jones.

#include <cstddef>
#include <vector>

#include "pppm/model.hpp"

namespace pppm {

class CellList {
public:
  /// Throws ConfigurationError when cutoff > min(L)/2.
  CellList(const AtomSystem &system, double cutoff);

  const std::array<int, 3> &cells_per_dim() const { return dims_; }
  std::size_t cell_count() const { return cells_.size(); }
  double cutoff() const { return cutoff_; }
  const Vec3 &cell_size() const { return cell_size_; }
  const std::vector<std::size_t> &atoms_in(std::size_t cell) const { return cells_[cell]; }
  std::size_t cell_of(std::size_t atom) const { return atom_cell_[atom]; }
  std::size_t occupied_cells() const;

  /// Distinct cells in the periodic 27-cell neighbourhood of `cell` (itself included).
  const std::vector<std::size_t> &neighbours(std::size_t cell) const { return neighbours_[cell]; }

private:
  std::array<int, 3> dims_{};
  double cutoff_;
  Vec3 cell_size_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<std::vector<std::size_t>> neighbours_;
  std::vector<std::size_t> atom_cell_;
};

CellList build_cell_list(const AtomSystem &system, double cutoff);

struct LjParams {
  bool enabled = false;
  double epsilon = 0.0;
  double sigma = 1.0;
  double cutoff = 0.0;

  void validate(double coulomb_cutoff) const;
};

struct PairResult {
  ForceSet forces;
  double energy = 0.0;
  /// Pairs inside the cutoff.
  std::size_t pairs = 0;
};

struct PairOptions {
  double coulomb_prefactor = 1.0;
  int workers = 1;
};

/// Half enumeration: every minimum-image pair with r < cutoff is visited
/// once and its force applied to both atoms. Energy is unshifted.
/// Throws SingularityError when two atoms are closer than 1e-10.
PairResult pair_forces(const AtomSystem &system, const CellList &cells, double alpha, double cutoff,
                       const LjParams &lj = {}, const PairOptions &options = {});

/// -C (alpha / sqrt(pi)) sum q_i^2.
double self_energy(const AtomSystem &system, double alpha, double coulomb_prefactor = 1.0);

/// Screened Coulomb pair term for C = 1 and unit charges.
struct ScreenedCoulomb {
  double energy;
  /// Force magnitude divided by r, so F_vec = qq * force_over_r * r_vec.
  double force_over_r;
};
ScreenedCoulomb screened_coulomb(double r, double alpha);

} // namespace pppm
