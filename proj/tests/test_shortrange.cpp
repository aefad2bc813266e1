#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "pppm/scenario.hpp"
#include "pppm/shortrange.hpp"

using namespace pppm;

namespace {

AtomSystem random_system(std::size_t n, double length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, length);
  std::vector<Vec3> pos(n);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = {u(rng), u(rng), u(rng)};
    q[i] = i % 2 ? -1.0 : 1.0;
  }
  return AtomSystem(SimulationBox(length, length * 1.1, length * 1.2), pos, q);
}

std::set<std::pair<std::size_t, std::size_t>> brute_pairs(const AtomSystem &s, double cutoff) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (norm(minimum_image(s.positions()[j] - s.positions()[i], s.box())) < cutoff) out.insert({i, j});
    }
  }
  return out;
}

std::set<std::pair<std::size_t, std::size_t>> cell_pairs(const AtomSystem &s, const CellList &cells, double cutoff) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t c = 0; c < cells.cell_count(); ++c) {
    for (std::size_t i : cells.atoms_in(c)) {
      for (std::size_t nc : cells.neighbours(c)) {
        for (std::size_t j : cells.atoms_in(nc)) {
          if (j <= i) continue;
          if (norm(minimum_image(s.positions()[j] - s.positions()[i], s.box())) < cutoff) out.insert({i, j});
        }
      }
    }
  }
  return out;
}

ForceSet brute_forces(const AtomSystem &s, double alpha, double cutoff) {
  ForceSet f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const Vec3 d = minimum_image(s.positions()[i] - s.positions()[j], s.box());
      const double r = norm(d);
      if (r >= cutoff) continue;
      const Vec3 fij = d * (s.charges()[i] * s.charges()[j] * screened_coulomb(r, alpha).force_over_r);
      f[i] += fij;
      f[j] -= fij;
    }
  }
  return f;
}

} // namespace

TEST_CASE("cell list layout") {
  const AtomSystem one(SimulationBox(10, 10, 10), {{1, 2, 3}}, {1.0});
  const CellList c1 = build_cell_list(one, 3.0);
  CHECK(c1.cells_per_dim() == std::array<int, 3>{3, 3, 3});
  CHECK(c1.occupied_cells() == 1);
  CHECK_THROWS_AS(build_cell_list(one, 5.5), ConfigurationError);

  const AtomSystem s = random_system(200, 9.0, 2);
  const CellList cells = build_cell_list(s, 2.5);
  std::vector<int> seen(s.size(), 0);
  for (std::size_t c = 0; c < cells.cell_count(); ++c) {
    for (std::size_t i : cells.atoms_in(c)) {
      ++seen[i];
      CHECK(cells.cell_of(i) == c);
    }
  }
  for (int k : seen) CHECK(k == 1);
  for (std::size_t d = 0; d < 3; ++d) CHECK(cells.cell_size()[d] >= 2.5);
}

TEST_CASE("cell list pair set equals brute force") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const double length = 6.0 + static_cast<double>(seed % 7);
    const double cutoff = 1.0 + 0.05 * static_cast<double>(seed % 40);
    const AtomSystem s = random_system(60 + seed, length, seed);
    const CellList cells = build_cell_list(s, cutoff);
    CHECK(cell_pairs(s, cells, cutoff) == brute_pairs(s, cutoff));
    CHECK(pair_forces(s, cells, 0.7, cutoff).pairs == brute_pairs(s, cutoff).size());
  }
}

TEST_CASE("cell list forces equal brute force") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AtomSystem s = random_system(200, 10.0, 100 + seed);
    const double cutoff = 3.0 + 0.2 * static_cast<double>(seed);
    const PairResult r = pair_forces(s, build_cell_list(s, cutoff), 0.8, cutoff);
    const ForceSet ref = brute_forces(s, 0.8, cutoff);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t d = 0; d < 3; ++d) CHECK(std::abs(r.forces[i][d] - ref[i][d]) <= 1e-12);
    }
    for (int workers : {2, 3, 8}) {
      const PairResult p = pair_forces(s, build_cell_list(s, cutoff), 0.8, cutoff, {}, {1.0, workers});
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t d = 0; d < 3; ++d) CHECK(std::abs(p.forces[i][d] - ref[i][d]) <= 1e-12);
      }
      CHECK(p.energy == doctest::Approx(r.energy).epsilon(1e-13));
    }
  }
}

TEST_CASE("screened coulomb values") {
  const ScreenedCoulomb unit = screened_coulomb(1.0, 1.0);
  CHECK(unit.energy == doctest::Approx(0.157299207050285).epsilon(1e-14));
  CHECK(unit.force_over_r == doctest::Approx(0.572406704470880).epsilon(1e-14));
  const ScreenedCoulomb bare = screened_coulomb(1.0, 1e-9);
  CHECK(bare.force_over_r == doctest::Approx(1.0).epsilon(1e-8));

  const SimulationBox box(10, 10, 10);
  const AtomSystem two(box, {{1, 1, 1}, {2, 1, 1}}, {1.0, 1.0});
  const PairResult r = pair_forces(two, build_cell_list(two, 3.0), 1.0, 3.0);
  CHECK(r.energy == doctest::Approx(0.157299207050285).epsilon(1e-14));
  CHECK(r.forces[1].x == doctest::Approx(0.572406704470880).epsilon(1e-14));
  CHECK(r.forces[0].x == -r.forces[1].x);
  PairOptions scaled;
  scaled.coulomb_prefactor = 2.0;
  CHECK(pair_forces(two, build_cell_list(two, 3.0), 1.0, 3.0, {}, scaled).energy == doctest::Approx(2 * r.energy));
}

TEST_CASE("pairs beyond the cutoff contribute nothing") {
  const SimulationBox box(10, 10, 10);
  const AtomSystem two(box, {{1, 1, 1}, {1 + 3.0 + 1e-6, 1, 1}}, {1.0, -1.0});
  const PairResult r = pair_forces(two, build_cell_list(two, 3.0), 0.5, 3.0);
  CHECK(r.energy == 0.0);
  CHECK(r.pairs == 0);
  CHECK(r.forces[0] == Vec3{});
}

TEST_CASE("overlapping atoms raise a singularity error") {
  const SimulationBox box(10, 10, 10);
  const AtomSystem two(box, {{1, 1, 1}, {1, 1, 1 + 1e-12}}, {1.0, -1.0});
  CHECK_THROWS_AS(pair_forces(two, build_cell_list(two, 3.0), 0.5, 3.0), SingularityError);
}

TEST_CASE("self energy") {
  const SimulationBox box(10, 10, 10);
  CHECK(self_energy(AtomSystem(box, {{1, 1, 1}}, {0.0}), 1.0) == 0.0);
  const AtomSystem one(box, {{1, 1, 1}}, {1.0});
  CHECK(self_energy(one, 1.0) == doctest::Approx(-0.564189583547756).epsilon(1e-14));
  CHECK(self_energy(one, 2.0) == doctest::Approx(2 * self_energy(one, 1.0)));
}

TEST_CASE("newton's third law") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AtomSystem s = random_system(150, 9.0, seed);
    const PairResult r = pair_forces(s, build_cell_list(s, 4.0), 0.7, 4.0);
    const Vec3 net = r.forces.net();
    const Vec3 abs = r.forces.abs_sum();
    for (std::size_t d = 0; d < 3; ++d) CHECK(std::abs(net[d]) <= 1e-12 * abs[d]);
  }
}

TEST_CASE("lennard-jones term") {
  const SimulationBox box(10, 10, 10);
  const AtomSystem two(box, {{1, 1, 1}, {1 + std::pow(2.0, 1.0 / 6.0), 1, 1}}, {0.0, 0.0});
  LjParams lj{true, 1.5, 1.0, 2.5};
  const PairResult r = pair_forces(two, build_cell_list(two, 3.0), 0.5, 3.0, lj);
  CHECK(r.energy == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::abs(r.forces[0].x) <= 1e-12);
  CHECK_THROWS_AS((LjParams{true, -1.0, 1.0, 2.5}.validate(3.0)), ConfigurationError);
  CHECK_THROWS_AS((LjParams{true, 1.0, 0.0, 2.5}.validate(3.0)), ConfigurationError);
  CHECK_THROWS_AS((LjParams{true, 1.0, 1.0, 3.5}.validate(3.0)), ConfigurationError);
}

TEST_CASE("pair energy tail is bounded by the erfc estimate") {
  ScenarioOptions so;
  so.n = 200;
  so.box_length = 14.0;
  so.seed = 5;
  const AtomSystem s = generate_scenario(so);
  const double alpha = 1.0;
  const double e5 = pair_forces(s, build_cell_list(s, 5.0), alpha, 5.0).energy;
  const double e6 = pair_forces(s, build_cell_list(s, 6.0), alpha, 6.0).energy;
  const double n = static_cast<double>(s.size());
  CHECK(std::abs(e6 - e5) <= n * n * std::erfc(alpha * 5.0) / 5.0);
}

TEST_CASE("interacting pairs grow as the cube of the cutoff") {
  ScenarioOptions so;
  so.n = 2000;
  so.box_length = 16.0;
  so.seed = 3;
  const AtomSystem s = generate_scenario(so);
  std::vector<double> lx, ly;
  for (double rc : {3.0, 4.0, 5.0, 6.0, 7.0}) {
    lx.push_back(std::log(rc));
    ly.push_back(std::log(static_cast<double>(pair_forces(s, build_cell_list(s, rc), 0.5, rc).pairs)));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / 5;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / 5;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  CHECK(std::abs(sxy / sxx - 3.0) <= 0.2);
}
