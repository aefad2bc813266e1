#include "pppm/shortrange.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pppm/parallel.hpp"

namespace pppm {

namespace {
constexpr double kMinSeparation = 1e-10;
}

CellList::CellList(const AtomSystem &system, double cutoff) : cutoff_(cutoff) {
  const SimulationBox &box = system.box();
  if (!(cutoff > 0.0)) throw ConfigurationError("cutoff must be positive");
  if (cutoff > 0.5 * box.min_length()) {
    throw ConfigurationError("cutoff " + std::to_string(cutoff) + " exceeds half the smallest box edge");
  }
  for (std::size_t d = 0; d < 3; ++d) {
    dims_[d] = std::max(1, static_cast<int>(std::floor(box.length(d) / cutoff)));
    cell_size_[d] = box.length(d) / dims_[d];
  }
  const auto ncell = static_cast<std::size_t>(dims_[0]) * static_cast<std::size_t>(dims_[1]) *
                     static_cast<std::size_t>(dims_[2]);
  cells_.resize(ncell);
  atom_cell_.resize(system.size());

  auto flat = [this](int x, int y, int z) {
    return static_cast<std::size_t>(x + dims_[0] * (y + dims_[1] * z));
  };
  for (std::size_t i = 0; i < system.size(); ++i) {
    const Vec3 &p = system.positions()[i];
    std::array<int, 3> c{};
    for (std::size_t d = 0; d < 3; ++d) {
      c[d] = std::min(dims_[d] - 1, static_cast<int>(p[d] / cell_size_[d]));
    }
    atom_cell_[i] = flat(c[0], c[1], c[2]);
    cells_[atom_cell_[i]].push_back(i);
  }

  neighbours_.resize(ncell);
  for (int z = 0; z < dims_[2]; ++z) {
    for (int y = 0; y < dims_[1]; ++y) {
      for (int x = 0; x < dims_[0]; ++x) {
        auto &list = neighbours_[flat(x, y, z)];
        for (int dz = -1; dz <= 1; ++dz) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int nx = (x + dx + dims_[0]) % dims_[0];
              const int ny = (y + dy + dims_[1]) % dims_[1];
              const int nz = (z + dz + dims_[2]) % dims_[2];
              list.push_back(flat(nx, ny, nz));
            }
          }
        }
        // fewer than 3 cells per dimension revisits the same neighbour
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
      }
    }
  }
}

std::size_t CellList::occupied_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const auto &c) { return !c.empty(); }));
}

CellList build_cell_list(const AtomSystem &system, double cutoff) { return CellList(system, cutoff); }

void LjParams::validate(double coulomb_cutoff) const {
  if (!enabled) return;
  if (!(epsilon >= 0.0)) throw ConfigurationError("LJ epsilon must be non-negative");
  if (!(sigma > 0.0)) throw ConfigurationError("LJ sigma must be positive");
  if (!(cutoff > 0.0) || cutoff > coulomb_cutoff) {
    throw ConfigurationError("LJ cutoff must be positive and no larger than the pair cutoff");
  }
}

ScreenedCoulomb screened_coulomb(double r, double alpha) {
  const double erfc_term = std::erfc(alpha * r) / r;
  const double gauss = 2.0 * alpha / std::sqrt(std::numbers::pi) * std::exp(-alpha * alpha * r * r);
  return {erfc_term, (erfc_term + gauss) / (r * r)};
}

PairResult pair_forces(const AtomSystem &system, const CellList &cells, double alpha, double cutoff,
                       const LjParams &lj, const PairOptions &options) {
  if (!(alpha > 0.0)) throw ConfigurationError("alpha must be positive");
  if (cutoff > cells.cutoff()) throw ConfigurationError("cell list was built for a smaller cutoff");
  lj.validate(cutoff);

  const auto &pos = system.positions();
  const auto &q = system.charges();
  const SimulationBox &box = system.box();
  const double rc2 = cutoff * cutoff;
  const double lj_rc2 = lj.cutoff * lj.cutoff;
  const double sigma2 = lj.sigma * lj.sigma;
  const double pref = options.coulomb_prefactor;

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(cells.cell_count())));
  std::vector<PairResult> partial(static_cast<std::size_t>(workers));
  for (auto &p : partial) p.forces = ForceSet(system.size());

  parallel_chunks(cells.cell_count(), workers, [&](int w, std::size_t begin, std::size_t end) {
    PairResult &acc = partial[static_cast<std::size_t>(w)];
    for (std::size_t c = begin; c < end; ++c) {
      for (std::size_t i : cells.atoms_in(c)) {
        for (std::size_t nc : cells.neighbours(c)) {
          for (std::size_t j : cells.atoms_in(nc)) {
            if (j <= i) continue;
            const Vec3 d = minimum_image(pos[i] - pos[j], box);
            const double r2 = dot(d, d);
            if (r2 >= rc2) continue;
            const double r = std::sqrt(r2);
            if (r < kMinSeparation) {
              std::ostringstream msg;
              msg << "atoms " << i << " and " << j << " overlap (r = " << r << ")";
              throw SingularityError(msg.str());
            }
            const double qq = pref * q[i] * q[j];
            const ScreenedCoulomb sc = screened_coulomb(r, alpha);
            double energy = qq * sc.energy;
            double f_over_r = qq * sc.force_over_r;
            if (lj.enabled && r2 < lj_rc2) {
              const double s6 = std::pow(sigma2 / r2, 3);
              energy += 4.0 * lj.epsilon * (s6 * s6 - s6);
              f_over_r += 24.0 * lj.epsilon * (2.0 * s6 * s6 - s6) / r2;
            }
            acc.energy += energy;
            acc.forces[i] += d * f_over_r;
            acc.forces[j] -= d * f_over_r;
            ++acc.pairs;
          }
        }
      }
    }
  });

  PairResult out = std::move(partial.front());
  for (std::size_t w = 1; w < partial.size(); ++w) {
    out.forces += partial[w].forces;
    out.energy += partial[w].energy;
    out.pairs += partial[w].pairs;
  }
  return out;
}

double self_energy(const AtomSystem &system, double alpha, double coulomb_prefactor) {
  return -coulomb_prefactor * alpha / std::sqrt(std::numbers::pi) * system.charge_squared_sum();
}

} // namespace pppm
