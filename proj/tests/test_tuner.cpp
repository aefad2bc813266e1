#include <doctest.h>

#include <cmath>

#include "pppm/driver.hpp"
#include "pppm/ewald.hpp"
#include "pppm/scenario.hpp"
#include "pppm/tuner.hpp"

using namespace pppm;

namespace {

AtomSystem acceptance_gas() {
  ScenarioOptions so;
  so.n = 512;
  so.seed = 1;
  return generate_scenario(so);
}

} // namespace

TEST_CASE("splitting parameter") {
  CHECK(select_alpha(5.0, 1e-4) == doctest::Approx(0.546310).epsilon(1e-6));
  CHECK(select_alpha(10.0, 1e-3) == doctest::Approx(select_alpha(5.0, 1e-3) / 2));
  CHECK_THROWS_AS(select_alpha(5.0, std::exp(9.0)), ConfigurationError);
  CHECK_THROWS_AS(select_alpha(0.0, 1e-4), ConfigurationError);
}

TEST_CASE("estimate is monotone in grid and order") {
  const SimulationBox box(10, 11, 12);
  for (int order : {3, 5, 7}) {
    for (int n = 8; n <= 64; n *= 2) {
      const double e = estimate_kspace_error({n, n, n}, box, 0.6, order, 300, 300);
      CHECK(estimate_kspace_error({2 * n, n, n}, box, 0.6, order, 300, 300) < e);
      CHECK(estimate_kspace_error({n, 2 * n, n}, box, 0.6, order, 300, 300) < e);
      CHECK(estimate_kspace_error({n, n, 2 * n}, box, 0.6, order, 300, 300) < e);
    }
  }
  for (int n : {10, 20, 40}) {
    const double e3 = estimate_kspace_error({n, n, n}, box, 0.6, 3, 300, 300);
    const double e5 = estimate_kspace_error({n, n, n}, box, 0.6, 5, 300, 300);
    const double e7 = estimate_kspace_error({n, n, n}, box, 0.6, 7, 300, 300);
    CHECK(e7 < e5);
    CHECK(e5 < e3);
  }
}

TEST_CASE("plan_params is a pure function of its inputs") {
  const AtomSystem s = acceptance_gas();
  TuneRequest req;
  req.cutoff = 5.0;
  const PppmParams a = plan_params(s.box(), summarize(s), req);
  const PppmParams b = plan_params(s.box(), summarize(s), req);
  CHECK(a == b);
  CHECK_NOTHROW(a.validate(s.box()));
  CHECK(a.alpha == select_alpha(5.0, 1e-4));
}

TEST_CASE("estimator is mode-blind by default") {
  const AtomSystem s = acceptance_gas();
  TuneRequest req;
  req.cutoff = 4.0;
  req.mode = DiffMode::IK;
  const PppmParams ik = plan_params(s.box(), summarize(s), req);
  req.mode = DiffMode::AD;
  const PppmParams ad = plan_params(s.box(), summarize(s), req);
  CHECK(ik.alpha == ad.alpha);
  CHECK(ik.grid == ad.grid);
  req.mode = DiffMode::IK;
  req.ik_relaxation = 3.0;
  const PppmParams relaxed = plan_params(s.box(), summarize(s), req);
  CHECK(relaxed.grid.count() <= ik.grid.count());
}

TEST_CASE("shorter cutoffs need finer grids") {
  // Large enough for r_C = 7 under the minimum-image bound.
  ScenarioOptions so;
  so.n = 2000;
  const AtomSystem s = generate_scenario(so);
  TuneRequest req;
  req.cutoff = 3.0;
  const GridDims g3 = plan_params(s.box(), summarize(s), req).grid;
  req.cutoff = 7.0;
  const GridDims g7 = plan_params(s.box(), summarize(s), req).grid;
  for (std::size_t d = 0; d < 3; ++d) CHECK(g3[d] > g7[d]);
  std::size_t previous = SIZE_MAX;
  for (double rc : {3.0, 4.0, 5.0, 6.0, 7.0}) {
    req.cutoff = rc;
    const std::size_t count = plan_params(s.box(), summarize(s), req).grid.count();
    CHECK(count <= previous);
    previous = count;
  }
}

TEST_CASE("overrides") {
  const AtomSystem s = acceptance_gas();
  TuneRequest req;
  req.cutoff = 5.0;
  req.grid = GridDims{16, 16, 16};
  req.alpha = 0.7;
  const PppmParams p = plan_params(s.box(), summarize(s), req);
  CHECK(p.grid == GridDims{16, 16, 16});
  CHECK(p.alpha == 0.7);
  req.grid = GridDims{5, 16, 16};
  CHECK_THROWS_AS(plan_params(s.box(), summarize(s), req), ConfigurationError);
  req.grid.reset();
  req.grid_bump = false;
  const PppmParams plain = plan_params(s.box(), summarize(s), req);
  req.grid_bump = true;
  const PppmParams bumped = plan_params(s.box(), summarize(s), req);
  CHECK(bumped.grid == adjust_grid_dims(plain.grid));
  req.cutoff = 100.0;
  CHECK_THROWS_AS(plan_params(s.box(), summarize(s), req), ConfigurationError);
}

TEST_CASE("grids chosen for 1e-4 meet the target on the acceptance gas") {
  const AtomSystem s = acceptance_gas();
  TuneRequest req;
  req.cutoff = 5.0;
  req.accuracy = 1e-4;
  const PppmParams p = plan_params(s.box(), summarize(s), req);
  const EwaldResult ref = ewald_reference(s, p.alpha, p.cutoff, converged_kmax(s.box(), p.alpha));
  const ForceEvaluation ev = PppmSolver(p, s.box()).compute(s);
  CHECK(rms_force_error(ev.forces, ref.forces).relative <= 2e-4);
}
