#pragma once

// Mapping between atoms and the mesh: Map-Charge (atoms -> rho) and
// Distribute-Force (mesh -> per-atom forces) for both differentiation modes.
//
// Stencil rows are consumed at their padded length (8) by default. The
// Exact row loop stops at the stencil order and exists to check that the
// padded zeros contribute nothing.
//
// Periodicity is handled by modular index arithmetic; there are no ghost
// layers.

#include <cstddef>
#include <span>

#include "pppm/grid.hpp"
#include "pppm/model.hpp"
#include "pppm/stencil.hpp"

namespace pppm {

enum class RowLoop { Padded, Exact };

struct MapOptions {
  int workers = 1;
  RowLoop rows = RowLoop::Padded;
};

/// Table-backed source when params.use_table is set, direct evaluation
/// otherwise. `table` may be null only when use_table is false.
WeightSource make_weight_source(const PppmParams &params, const StencilTable *table);

/// Throws ConfigurationError if the grid is smaller than the stencil or the
/// weight source order disagrees with params.order.
void check_mapping_config(const PppmParams &params, const WeightSource &weights);

/// Empty density grid with the spacing implied by box and params.grid.
ChargeGrid make_charge_grid(const SimulationBox &box, const GridDims &dims);

/// Spreads every atom's charge over its S^3 nearest nodes as density.
/// With workers > 1 each worker maps a contiguous slice of atoms into a
/// private grid; the copies are summed in worker order.
ChargeGrid map_charge(const AtomSystem &system, const PppmParams &params, const WeightSource &weights,
                      const MapOptions &options = {});

/// Adds the density of the listed atoms to `grid`. Returns the number of
/// stencil points written (S^3 per atom, padding excluded).
std::size_t accumulate_charge(const AtomSystem &system, std::span<const std::size_t> atoms,
                              const WeightSource &weights, ChargeGrid &grid, RowLoop rows = RowLoop::Padded);

/// S^3 * N: grid cells touched by one charge mapping.
std::size_t stencil_points_touched(std::size_t atoms, int order);

/// F_j = C q_j * (weighted average of E at x_j), same weights as map_charge.
ForceSet distribute_force_ik(const FieldGrids &fields, const AtomSystem &system, const PppmParams &params,
                             const WeightSource &weights, const MapOptions &options = {});

/// Per-atom potential gradient sums from the derivative stencil, in grid units.
/// Each array has one entry per atom.
struct GradientSums {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
};

/// First atom pass of the AD force: sums of phi weighted by the derivative
/// row in one dimension and assignment rows in the other two.
GradientSums gather_potential_gradient(const FieldGrids &fields, const AtomSystem &system,
                                       const WeightSource &weights, const MapOptions &options = {});

/// F_j = -C q_j grad(phi)(x_j), computed in two atom passes (gather, then
/// scale by charge, grid spacing and Coulomb prefactor). With `self_force`
/// the leading self-force harmonics are subtracted in the second pass.
ForceSet distribute_force_ad(const FieldGrids &fields, const AtomSystem &system, const PppmParams &params,
                             const WeightSource &weights, const MapOptions &options = {},
                             const SelfForceCoeffs *self_force = nullptr);

} // namespace pppm
