#include "pppm/scenario.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace pppm {
namespace {

AtomSystem random_gas(const ScenarioOptions &o) {
  if (o.n < 2 || o.n % 2 != 0) throw ConfigurationError("random_gas needs an even atom count >= 2");
  if (!(o.density > 0.0)) throw ConfigurationError("random_gas density must be positive");
  const double L = o.box_length ? *o.box_length : std::cbrt(static_cast<double>(o.n) / o.density);
  const SimulationBox box(L, L, L);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> coord(0.0, L);
  const double min2 = o.min_separation * o.min_separation;

  std::vector<Vec3> pos;
  pos.reserve(o.n);
  const std::size_t max_attempts = 10000 * o.n;
  std::size_t attempts = 0;
  while (pos.size() < o.n) {
    if (++attempts > max_attempts) {
      throw ConfigurationError("random_gas could not place atoms with the requested minimum separation");
    }
    const Vec3 p{coord(rng), coord(rng), coord(rng)};
    bool ok = true;
    for (const auto &other : pos) {
      const Vec3 d = minimum_image(p - other, box);
      if (dot(d, d) < min2) {
        ok = false;
        break;
      }
    }
    if (ok) pos.push_back(p);
  }
  std::vector<double> q(o.n);
  for (std::size_t i = 0; i < o.n; ++i) q[i] = i % 2 == 0 ? 1.0 : -1.0;
  return AtomSystem(box, std::move(pos), std::move(q));
}

AtomSystem rocksalt(const ScenarioOptions &o) {
  const auto k = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(o.n))));
  if (k * k * k != o.n || k % 2 != 0 || k == 0) {
    throw ConfigurationError("rocksalt needs N = k^3 with k even (8, 64, 512, ...), got " + std::to_string(o.n));
  }
  if (!(o.spacing > 0.0)) throw ConfigurationError("rocksalt spacing must be positive");
  const double L = o.spacing * static_cast<double>(k);
  const SimulationBox box(L, L, L);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> shake(-o.jitter * o.spacing, o.jitter * o.spacing);

  std::vector<Vec3> pos;
  std::vector<double> q;
  pos.reserve(o.n);
  q.reserve(o.n);
  for (std::size_t z = 0; z < k; ++z) {
    for (std::size_t y = 0; y < k; ++y) {
      for (std::size_t x = 0; x < k; ++x) {
        Vec3 p{static_cast<double>(x) * o.spacing, static_cast<double>(y) * o.spacing,
               static_cast<double>(z) * o.spacing};
        if (o.jitter > 0.0) p += Vec3{shake(rng), shake(rng), shake(rng)};
        pos.push_back(p);
        q.push_back((x + y + z) % 2 == 0 ? 1.0 : -1.0);
      }
    }
  }
  return AtomSystem(box, std::move(pos), std::move(q));
}

AtomSystem dipole_probe(const ScenarioOptions &o) {
  if (o.n != 2) throw ConfigurationError("dipole_probe needs exactly 2 atoms");
  const double L = o.box_length ? *o.box_length : 50.0;
  if (!(o.separation > 0.0) || o.separation >= 0.5 * L) {
    throw ConfigurationError("dipole separation must lie in (0, L/2)");
  }
  const SimulationBox box(L, L, L);
  const Vec3 center{0.5 * L, 0.5 * L, 0.5 * L};
  const Vec3 half{0.5 * o.separation, 0.0, 0.0};
  return AtomSystem(box, {center - half, center + half}, {1.0, -1.0});
}

void assign_velocities(std::vector<Vec3> &vel, const std::vector<double> &mass, double temperature,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 momentum;
  double total_mass = 0.0;
  for (std::size_t i = 0; i < vel.size(); ++i) {
    const double s = std::sqrt(temperature / mass[i]);
    vel[i] = {s * gauss(rng), s * gauss(rng), s * gauss(rng)};
    momentum += vel[i] * mass[i];
    total_mass += mass[i];
  }
  const Vec3 drift = momentum * (1.0 / total_mass);
  for (auto &v : vel) v -= drift;
}

} // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
  case ScenarioKind::RandomGas: return "random_gas";
  case ScenarioKind::Rocksalt: return "rocksalt";
  case ScenarioKind::DipoleProbe: return "dipole_probe";
  }
  return "unknown";
}

ScenarioKind parse_scenario(const std::string &name) {
  if (name == "random_gas") return ScenarioKind::RandomGas;
  if (name == "rocksalt") return ScenarioKind::Rocksalt;
  if (name == "dipole_probe") return ScenarioKind::DipoleProbe;
  throw InvalidInput("unknown scenario '" + name + "' (random_gas, rocksalt, dipole_probe)");
}

AtomSystem generate_scenario(const ScenarioOptions &options) {
  AtomSystem system = [&] {
    switch (options.kind) {
    case ScenarioKind::RandomGas: return random_gas(options);
    case ScenarioKind::Rocksalt: return rocksalt(options);
    case ScenarioKind::DipoleProbe: return dipole_probe(options);
    }
    throw InvalidInput("unknown scenario");
  }();
  if (options.temperature < 0.0) throw ConfigurationError("temperature must be non-negative");
  std::vector<Vec3> vel(system.size());
  if (options.temperature > 0.0) assign_velocities(vel, system.masses(), options.temperature, options.seed);
  return system.with_state(system.positions(), std::move(vel));
}

} // namespace pppm
