#include "pppm/gridmap.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pppm/parallel.hpp"

namespace pppm {
namespace {

constexpr int kPad = kPaddedRowLength;
constexpr double kPi = std::numbers::pi;

// First stencil node per dimension (wrapped) and the offsets t.
struct Placement {
  std::array<int, 3> start{};
  std::array<double, 3> t{};
};

Placement place_atom(const Vec3 &pos, const Vec3 &spacing, const GridDims &dims, int order) {
  Placement p;
  const int half = (order - 1) / 2;
  for (std::size_t d = 0; d < 3; ++d) {
    const double u = pos[d] / spacing[d];
    if (!(u >= 0.0 && u < dims[d])) {
      throw Error("internal: atom coordinate " + std::to_string(pos[d]) + " lies outside the box");
    }
    const NodeOffset no = nearest_node(u);
    const long n = dims[d];
    long s = (no.node - half) % n;
    if (s < 0) s += n;
    p.start[d] = static_cast<int>(s);
    p.t[d] = no.t;
  }
  return p;
}

// x indices of a padded row starting at `start`, wrapped into [0, nx).
std::array<int, kPad> row_indices(int start, int nx) {
  std::array<int, kPad> xs{};
  int x = start;
  for (int r = 0; r < kPad; ++r) {
    xs[static_cast<std::size_t>(r)] = x;
    if (++x == nx) x = 0;
  }
  return xs;
}

void map_atom(double q_density, const Placement &p, const WeightRow &wx, const WeightRow &wy,
              const WeightRow &wz, int order, RowLoop rows, Grid3 &grid) {
  const GridDims &n = grid.dims();
  const auto xs = row_indices(p.start[0], n.nx);
  const bool contiguous = p.start[0] + kPad <= n.nx;
  double *values = grid.data();

  int z = p.start[2];
  for (int k = 0; k < order; ++k) {
    const double wzq = q_density * wz.weights[static_cast<std::size_t>(k)];
    int y = p.start[1];
    for (int j = 0; j < order; ++j) {
      const double wyz = wzq * wy.weights[static_cast<std::size_t>(j)];
      double *row = values + grid.index(0, y, z);
      if (rows == RowLoop::Padded) {
        if (contiguous) {
          double *cell = row + p.start[0];
          for (int r = 0; r < kPad; ++r) cell[r] += wyz * wx.weights[static_cast<std::size_t>(r)];
        } else {
          for (int r = 0; r < kPad; ++r) {
            row[xs[static_cast<std::size_t>(r)]] += wyz * wx.weights[static_cast<std::size_t>(r)];
          }
        }
      } else {
        for (int r = 0; r < order; ++r) {
          row[xs[static_cast<std::size_t>(r)]] += wyz * wx.weights[static_cast<std::size_t>(r)];
        }
      }
      if (++y == n.ny) y = 0;
    }
    if (++z == n.nz) z = 0;
  }
}

void check_field_dims(const FieldGrids &fields, const PppmParams &params, DiffMode expected) {
  if (fields.mode != expected) {
    throw InvalidInput("field grids hold " + to_string(fields.mode) + " data but " + to_string(expected) +
                       " force distribution was requested");
  }
  const std::size_t want = expected == DiffMode::IK ? 3 : 1;
  if (fields.components.size() != want) throw InvalidInput("field grids have the wrong component count");
  for (const auto &g : fields.components) {
    if (!(g.dims() == params.grid)) throw InvalidInput("field grid dimensions do not match params");
  }
}

Vec3 spacing_of(const SimulationBox &box, const GridDims &dims) {
  return {box.length(0) / dims.nx, box.length(1) / dims.ny, box.length(2) / dims.nz};
}

} // namespace

WeightSource make_weight_source(const PppmParams &params, const StencilTable *table) {
  if (params.use_table) {
    if (table == nullptr) throw ConfigurationError("use_table is set but no stencil table was supplied");
    if (table->order() != params.order) throw ConfigurationError("stencil table order differs from params");
    return WeightSource(*table);
  }
  return WeightSource(params.order);
}

void check_mapping_config(const PppmParams &params, const WeightSource &weights) {
  check_order(params.order);
  if (weights.order() != params.order) {
    throw ConfigurationError("stencil order " + std::to_string(weights.order()) + " differs from params order " +
                             std::to_string(params.order));
  }
  for (std::size_t d = 0; d < 3; ++d) {
    if (params.grid[d] < params.order) {
      throw ConfigurationError("grid " + to_string(params.grid) + " is smaller than the stencil order");
    }
  }
}

ChargeGrid make_charge_grid(const SimulationBox &box, const GridDims &dims) {
  return ChargeGrid{Grid3(dims), spacing_of(box, dims)};
}

std::size_t stencil_points_touched(std::size_t atoms, int order) {
  const auto s = static_cast<std::size_t>(order);
  return atoms * s * s * s;
}

std::size_t accumulate_charge(const AtomSystem &system, std::span<const std::size_t> atoms,
                              const WeightSource &weights, ChargeGrid &grid, RowLoop rows) {
  const int order = weights.order();
  const double inv_volume = 1.0 / grid.cell_volume();
  const auto &pos = system.positions();
  const auto &q = system.charges();
  WeightRow w[3];
  for (std::size_t i : atoms) {
    const Placement p = place_atom(pos[i], grid.spacing, grid.dims(), order);
    for (std::size_t d = 0; d < 3; ++d) weights.assignment(p.t[d], w[d]);
    map_atom(q[i] * inv_volume, p, w[0], w[1], w[2], order, rows, grid.density);
  }
  return stencil_points_touched(atoms.size(), order);
}

ChargeGrid map_charge(const AtomSystem &system, const PppmParams &params, const WeightSource &weights,
                      const MapOptions &options) {
  check_mapping_config(params, weights);
  ChargeGrid result = make_charge_grid(system.box(), params.grid);
  std::vector<std::size_t> order(system.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(system.size())));

  if (workers == 1) {
    accumulate_charge(system, order, weights, result, options.rows);
    return result;
  }

  std::vector<ChargeGrid> replicas(static_cast<std::size_t>(workers), result);
  parallel_chunks(system.size(), workers, [&](int w, std::size_t begin, std::size_t end) {
    const std::span<const std::size_t> slice(order.data() + begin, end - begin);
    accumulate_charge(system, slice, weights, replicas[static_cast<std::size_t>(w)], options.rows);
  });
  for (const auto &r : replicas) result.density += r.density;
  return result;
}

ForceSet distribute_force_ik(const FieldGrids &fields, const AtomSystem &system, const PppmParams &params,
                             const WeightSource &weights, const MapOptions &options) {
  check_mapping_config(params, weights);
  check_field_dims(fields, params, DiffMode::IK);
  const int order = params.order;
  const GridDims &n = params.grid;
  const Vec3 spacing = spacing_of(system.box(), n);
  const double prefactor = params.coulomb_prefactor();
  const double *ex = fields.components[0].data();
  const double *ey = fields.components[1].data();
  const double *ez = fields.components[2].data();
  const auto &pos = system.positions();
  const auto &q = system.charges();
  ForceSet out(system.size());

  parallel_chunks(system.size(), options.workers, [&](int, std::size_t begin, std::size_t end) {
    WeightRow w[3];
    for (std::size_t i = begin; i < end; ++i) {
      const Placement p = place_atom(pos[i], spacing, n, order);
      for (std::size_t d = 0; d < 3; ++d) weights.assignment(p.t[d], w[d]);
      const auto xs = row_indices(p.start[0], n.nx);
      const int row_len = options.rows == RowLoop::Padded ? kPad : order;

      double sx = 0.0;
      double sy = 0.0;
      double sz = 0.0;
      int z = p.start[2];
      for (int k = 0; k < order; ++k) {
        int y = p.start[1];
        for (int j = 0; j < order; ++j) {
          const double wyz = w[2].weights[static_cast<std::size_t>(k)] * w[1].weights[static_cast<std::size_t>(j)];
          const std::size_t row = fields.components[0].index(0, y, z);
          for (int r = 0; r < row_len; ++r) {
            const std::size_t c = row + static_cast<std::size_t>(xs[static_cast<std::size_t>(r)]);
            const double wt = wyz * w[0].weights[static_cast<std::size_t>(r)];
            sx += wt * ex[c];
            sy += wt * ey[c];
            sz += wt * ez[c];
          }
          if (++y == n.ny) y = 0;
        }
        if (++z == n.nz) z = 0;
      }
      const double s = prefactor * q[i];
      out[i] = {s * sx, s * sy, s * sz};
    }
  });
  return out;
}

GradientSums gather_potential_gradient(const FieldGrids &fields, const AtomSystem &system,
                                       const WeightSource &weights, const MapOptions &options) {
  if (fields.mode != DiffMode::AD || fields.components.size() != 1) {
    throw InvalidInput("potential gradient needs AD field grids");
  }
  const int order = weights.order();
  const Grid3 &phi = fields.potential();
  const GridDims &n = phi.dims();
  const Vec3 spacing = spacing_of(system.box(), n);
  const auto &pos = system.positions();
  GradientSums sums;
  sums.x.assign(system.size(), 0.0);
  sums.y.assign(system.size(), 0.0);
  sums.z.assign(system.size(), 0.0);

  parallel_chunks(system.size(), options.workers, [&](int, std::size_t begin, std::size_t end) {
    WeightRow w[3];
    WeightRow dw[3];
    for (std::size_t i = begin; i < end; ++i) {
      const Placement p = place_atom(pos[i], spacing, n, order);
      for (std::size_t d = 0; d < 3; ++d) weights.both(p.t[d], w[d], dw[d]);
      const auto xs = row_indices(p.start[0], n.nx);
      const int row_len = options.rows == RowLoop::Padded ? kPad : order;

      double gx = 0.0;
      double gy = 0.0;
      double gz = 0.0;
      int z = p.start[2];
      for (int k = 0; k < order; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        int y = p.start[1];
        for (int j = 0; j < order; ++j) {
          const auto jj = static_cast<std::size_t>(j);
          const double a = w[2].weights[kk] * w[1].weights[jj];
          const double b = w[2].weights[kk] * dw[1].weights[jj];
          const double c = dw[2].weights[kk] * w[1].weights[jj];
          const double *row = phi.data() + phi.index(0, y, z);
          for (int r = 0; r < row_len; ++r) {
            const auto rr = static_cast<std::size_t>(r);
            const double v = row[xs[rr]];
            gx += a * dw[0].weights[rr] * v;
            gy += b * w[0].weights[rr] * v;
            gz += c * w[0].weights[rr] * v;
          }
          if (++y == n.ny) y = 0;
        }
        if (++z == n.nz) z = 0;
      }
      sums.x[i] = gx;
      sums.y[i] = gy;
      sums.z[i] = gz;
    }
  });
  return sums;
}

ForceSet distribute_force_ad(const FieldGrids &fields, const AtomSystem &system, const PppmParams &params,
                             const WeightSource &weights, const MapOptions &options,
                             const SelfForceCoeffs *self_force) {
  check_mapping_config(params, weights);
  check_field_dims(fields, params, DiffMode::AD);
  const GradientSums g = gather_potential_gradient(fields, system, weights, options);

  // Second pass: no inner loops, unit stride over the gradient arrays.
  const Vec3 spacing = spacing_of(system.box(), params.grid);
  const double cx = -params.coulomb_prefactor() / spacing.x;
  const double cy = -params.coulomb_prefactor() / spacing.y;
  const double cz = -params.coulomb_prefactor() / spacing.z;
  const auto &q = system.charges();
  ForceSet out(system.size());
  for (std::size_t i = 0; i < system.size(); ++i) {
    out[i] = {cx * q[i] * g.x[i], cy * q[i] * g.y[i], cz * q[i] * g.z[i]};
  }
  if (!self_force) return out;
  const auto &pos = system.positions();
  const double pref = params.coulomb_prefactor();
  for (std::size_t i = 0; i < system.size(); ++i) {
    const double qq = pref * q[i] * q[i];
    for (std::size_t d = 0; d < 3; ++d) {
      const double s = 2.0 * kPi * pos[i][d] / spacing[d];
      out[i][d] -= qq * (self_force->c[d][0] * std::sin(s) + self_force->c[d][1] * std::sin(2.0 * s));
    }
  }
  return out;
}

} // namespace pppm
