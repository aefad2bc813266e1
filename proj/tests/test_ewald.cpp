#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pppm/ewald.hpp"
#include "pppm/scenario.hpp"

using namespace pppm;

namespace {

constexpr double kMadelung = 1.747564594633;

AtomSystem gas(std::size_t n, double length, std::uint64_t seed) {
  ScenarioOptions so;
  so.n = n;
  so.box_length = length;
  so.seed = seed;
  return generate_scenario(so);
}

} // namespace

TEST_CASE("isolated dipole feels the bare coulomb force") {
  ScenarioOptions so;
  so.kind = ScenarioKind::DipoleProbe;
  so.n = 2;
  so.separation = 1.0;
  so.box_length = 50.0;
  const AtomSystem s = generate_scenario(so);
  // kmax = 12 leaves exp(-(12 pi / 20)^2) ~ 3e-2 of the last mode; 24 is converged.
  const EwaldResult r = ewald_reference(s, 0.4, 25.0, 24);
  const Vec3 d = s.positions()[1] - s.positions()[0];
  CHECK(norm(r.forces[0]) == doctest::Approx(1.0).epsilon(1e-4));
  // Remaining offset is the tinfoil dipole term 4 pi p / (3 V).
  CHECK(norm(r.forces[0]) == doctest::Approx(1.0 - 4 * std::numbers::pi / (3 * 50.0 * 50.0 * 50.0)).epsilon(1e-7));
  CHECK(dot(r.forces[0], d) > 0.0); // attractive
  CHECK(norm(r.forces[0] + r.forces[1]) <= 1e-12);
}

TEST_CASE("rock-salt lattice energy gives the madelung constant") {
  for (double a : {1.0, 2.0}) {
    ScenarioOptions so;
    so.kind = ScenarioKind::Rocksalt;
    so.n = 64;
    so.spacing = a;
    const AtomSystem s = generate_scenario(so);
    const EwaldResult r = converged_ewald(s);
    const double per_pair = r.energy.total / (static_cast<double>(s.size()) / 2);
    CHECK(per_pair == doctest::Approx(-kMadelung / a).epsilon(1e-9));
    CHECK(r.forces.mean_magnitude() <= 1e-9);
  }
}

TEST_CASE("total energy does not depend on the splitting parameter") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const AtomSystem s = gas(40, 8.0, seed);
    const EwaldResult a = ewald_reference(s, 1.4, 4.0, converged_kmax(s.box(), 1.4));
    const EwaldResult b = ewald_reference(s, 1.8, 4.0, converged_kmax(s.box(), 1.8));
    CHECK(a.energy.total == doctest::Approx(b.energy.total).epsilon(1e-8));
    CHECK(rms_force_error(a.forces, b.forces).relative <= 1e-7);
  }
  // 0.3 and 0.5 need a cutoff deep enough for erfc(alpha r_C) to vanish.
  const AtomSystem s = gas(20, 40.0, 9);
  const EwaldResult a = ewald_reference(s, 0.3, 20.0, converged_kmax(s.box(), 0.3));
  const EwaldResult b = ewald_reference(s, 0.5, 20.0, converged_kmax(s.box(), 0.5));
  CHECK(a.energy.total == doctest::Approx(b.energy.total).epsilon(1e-8));
}

TEST_CASE("reference forces conserve momentum") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const AtomSystem s = gas(60, 9.0, seed);
    const EwaldResult r = ewald_reference(s, 0.8, 4.5, converged_kmax(s.box(), 0.8));
    const Vec3 net = r.forces.net();
    const Vec3 abs = r.forces.abs_sum();
    for (std::size_t d = 0; d < 3; ++d) CHECK(std::abs(net[d]) <= 1e-10 * abs[d]);
  }
}

TEST_CASE("reference preconditions") {
  const SimulationBox box(10, 10, 10);
  const AtomSystem charged(box, {{1, 1, 1}, {2, 2, 2}}, {1.0, 0.5});
  CHECK_THROWS_AS(ewald_reference(charged, 0.5, 4.0, 5), ConfigurationError);
  const AtomSystem neutral(box, {{1, 1, 1}, {2, 2, 2}}, {1.0, -1.0});
  CHECK_THROWS_AS(ewald_reference(neutral, 0.5, 6.0, 5), ConfigurationError);
  CHECK(converged_kmax(box, 0.5, 1e-12) >= 1);
  CHECK(std::erfc(converged_alpha(4.0) * 4.0) <= 1e-12);
}

TEST_CASE("rms error metric") {
  ForceSet ref(4);
  ref[2] = {2, 0, 0};
  CHECK(rms_force_error(ref, ref).absolute == 0.0);
  CHECK(rms_force_error(ref, ref).relative == 0.0);
  ForceSet test = ref;
  test[2] += Vec3{1, 0, 0};
  const RmsError e = rms_force_error(test, ref);
  CHECK(e.absolute == doctest::Approx(0.5));
  CHECK(e.relative == doctest::Approx(0.5));
  CHECK_THROWS_AS(rms_force_error(ForceSet(3), ref), InvalidInput);
  CHECK_THROWS_AS(rms_force_error(ref, ForceSet(4)), Error);
}
