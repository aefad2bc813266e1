#include "pppm/model.hpp"

#include <algorithm>
#include <sstream>

namespace pppm {

SimulationBox::SimulationBox(const Vec3 &lengths) : lengths_(lengths) {
  for (std::size_t d = 0; d < 3; ++d) {
    if (!std::isfinite(lengths_[d]) || lengths_[d] <= 0.0) {
      throw InvalidInput("box edge lengths must be finite and strictly positive");
    }
  }
}

double SimulationBox::min_length() const {
  return std::min({lengths_.x, lengths_.y, lengths_.z});
}

Vec3 wrap(const Vec3 &position, const SimulationBox &box) {
  if (!is_finite(position)) throw InvalidInput("cannot wrap a non-finite position");
  Vec3 out;
  for (std::size_t d = 0; d < 3; ++d) {
    const double len = box.length(d);
    double r = std::fmod(position[d], len);
    if (r < 0.0) r += len;
    // -tiny + L rounds to L
    if (r >= len) r = 0.0;
    out[d] = r;
  }
  return out;
}

Vec3 minimum_image(const Vec3 &displacement, const SimulationBox &box) {
  if (!is_finite(displacement)) throw InvalidInput("non-finite displacement");
  Vec3 out;
  for (std::size_t d = 0; d < 3; ++d) {
    const double len = box.length(d);
    const double half = 0.5 * len;
    double r = displacement[d];
    if (r < -half || r >= half) {
      r -= len * std::floor(r / len + 0.5);
      if (r < -half) r += len;
      if (r >= half) r -= len;
    }
    out[d] = r;
  }
  return out;
}

// ---------------------------------------------------------------------------

AtomSystem::AtomSystem(SimulationBox box, std::vector<Vec3> positions, std::vector<double> charges)
    : box_(box), positions_(std::move(positions)), charges_(std::move(charges)) {
  masses_.assign(positions_.size(), 1.0);
  validate_and_wrap();
}

AtomSystem::AtomSystem(SimulationBox box, std::vector<Vec3> positions, std::vector<double> charges,
                       std::vector<double> masses, std::vector<Vec3> velocities)
    : box_(box), positions_(std::move(positions)), charges_(std::move(charges)),
      masses_(std::move(masses)), velocities_(std::move(velocities)) {
  if (masses_.empty()) masses_.assign(positions_.size(), 1.0);
  validate_and_wrap();
}

void AtomSystem::validate_and_wrap() {
  const std::size_t n = positions_.size();
  if (n == 0) throw InvalidInput("atom system must contain at least one atom");
  if (charges_.size() != n) throw InvalidInput("positions and charges differ in length");
  if (masses_.size() != n) throw InvalidInput("positions and masses differ in length");
  if (!velocities_.empty() && velocities_.size() != n) {
    throw InvalidInput("positions and velocities differ in length");
  }
  net_charge_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(charges_[i])) throw InvalidInput("non-finite charge on atom " + std::to_string(i));
    if (!std::isfinite(masses_[i]) || masses_[i] <= 0.0) {
      throw InvalidInput("mass of atom " + std::to_string(i) + " must be finite and positive");
    }
    if (!velocities_.empty() && !is_finite(velocities_[i])) {
      throw InvalidInput("non-finite velocity on atom " + std::to_string(i));
    }
    positions_[i] = wrap(positions_[i], box_);
    net_charge_ += charges_[i];
  }
}

double AtomSystem::abs_charge_sum() const {
  double s = 0.0;
  for (double q : charges_) s += std::abs(q);
  return s;
}

double AtomSystem::charge_squared_sum() const {
  double s = 0.0;
  for (double q : charges_) s += q * q;
  return s;
}

bool AtomSystem::is_neutral() const {
  return std::abs(net_charge_) <= 1e-12 * abs_charge_sum();
}

void AtomSystem::require_neutral() const {
  if (!is_neutral()) {
    std::ostringstream msg;
    msg << "system is not charge neutral: net charge " << net_charge_ << ", sum |q| "
        << abs_charge_sum();
    throw ConfigurationError(msg.str());
  }
}

AtomSystem AtomSystem::with_state(std::vector<Vec3> positions, std::vector<Vec3> velocities) const {
  return AtomSystem(box_, std::move(positions), charges_, masses_, std::move(velocities));
}

// ---------------------------------------------------------------------------

std::string to_string(DiffMode mode) { return mode == DiffMode::IK ? "ik" : "ad"; }

DiffMode parse_diff_mode(const std::string &text) {
  if (text == "ik" || text == "IK") return DiffMode::IK;
  if (text == "ad" || text == "AD") return DiffMode::AD;
  throw InvalidInput("unknown differentiation mode '" + text + "' (expected ik or ad)");
}

std::string to_string(const GridDims &dims) {
  return std::to_string(dims.nx) + "," + std::to_string(dims.ny) + "," + std::to_string(dims.nz);
}

bool is_supported_order(int order) {
  return std::find(kSupportedOrders.begin(), kSupportedOrders.end(), order) != kSupportedOrders.end();
}

void PppmParams::validate(const SimulationBox &box) const {
  auto fail = [](const std::string &what) { throw ConfigurationError(what); };
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) fail("cutoff must be positive");
  if (!(accuracy > 0.0 && accuracy < 1.0)) fail("accuracy must lie in (0, 1)");
  if (!is_supported_order(order)) fail("stencil order must be 3, 5 or 7");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be positive");
  for (std::size_t d = 0; d < 3; ++d) {
    if (grid[d] < order) {
      fail("grid dimensions " + to_string(grid) + " must each be at least the stencil order " +
           std::to_string(order));
    }
  }
  if (cutoff > 0.5 * box.min_length()) {
    fail("cutoff " + std::to_string(cutoff) + " exceeds half the smallest box edge");
  }
  if (use_table && table_points < 2) fail("table_points must be at least 2");
  if (!(coulomb_constant > 0.0) || !(dielectric > 0.0)) {
    fail("coulomb constant and dielectric must be positive");
  }
}

// ---------------------------------------------------------------------------

Vec3 ForceSet::net() const {
  Vec3 s;
  for (const auto &f : forces) s += f;
  return s;
}

double ForceSet::mean_magnitude() const {
  if (forces.empty()) return 0.0;
  double s = 0.0;
  for (const auto &f : forces) s += norm(f);
  return s / static_cast<double>(forces.size());
}

Vec3 ForceSet::abs_sum() const {
  Vec3 s;
  for (const auto &f : forces) s += Vec3{std::abs(f.x), std::abs(f.y), std::abs(f.z)};
  return s;
}

ForceSet &ForceSet::operator+=(const ForceSet &other) {
  if (other.size() != size()) throw InvalidInput("force sets differ in length");
  for (std::size_t i = 0; i < forces.size(); ++i) forces[i] += other.forces[i];
  return *this;
}

} // namespace pppm
