#pragma once

// Domain types shared by every part of the solver: vectors, the periodic
// orthorhombic box, the atom system and the resolved solver parameters.
//
// Units are reduced Gaussian-style: energies are C*q^2/length and forces
// C*q^2/length^2, with the Coulomb constant C and the dielectric both
// defaulting to 1.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pppm {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Parameter combination the solver cannot run with.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

/// Two atoms (nearly) on top of each other.
class SingularityError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Vec3

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double &operator[](std::size_t d) { return d == 0 ? x : (d == 1 ? y : z); }
  constexpr double operator[](std::size_t d) const { return d == 0 ? x : (d == 1 ? y : z); }

  constexpr Vec3 &operator+=(const Vec3 &o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3 &operator-=(const Vec3 &o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3 &operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }
inline bool is_finite(const Vec3 &a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// ---------------------------------------------------------------------------
// Periodic box

/// Orthorhombic periodic box with its origin at (0,0,0).
class SimulationBox {
public:
  SimulationBox() = default;
  /// Throws InvalidInput unless every edge is finite and strictly positive.
  explicit SimulationBox(const Vec3 &lengths);
  SimulationBox(double lx, double ly, double lz) : SimulationBox(Vec3{lx, ly, lz}) {}

  const Vec3 &lengths() const { return lengths_; }
  double length(std::size_t d) const { return lengths_[d]; }
  double volume() const { return lengths_.x * lengths_.y * lengths_.z; }
  double min_length() const;

  friend bool operator==(const SimulationBox &, const SimulationBox &) = default;

private:
  Vec3 lengths_{1.0, 1.0, 1.0};
};

/// Maps a position into [0, L_d) in every dimension.
Vec3 wrap(const Vec3 &position, const SimulationBox &box);

/// Nearest periodic image of a displacement, each component in [-L_d/2, L_d/2).
Vec3 minimum_image(const Vec3 &displacement, const SimulationBox &box);

// ---------------------------------------------------------------------------
// Atom system

/// Positions, charges, masses and (optionally) velocities of N >= 1 atoms in
/// a periodic box. Positions are wrapped into the box on construction.
class AtomSystem {
public:
  AtomSystem(SimulationBox box, std::vector<Vec3> positions, std::vector<double> charges);
  AtomSystem(SimulationBox box, std::vector<Vec3> positions, std::vector<double> charges,
             std::vector<double> masses, std::vector<Vec3> velocities = {});

  const SimulationBox &box() const { return box_; }
  std::size_t size() const { return positions_.size(); }
  const std::vector<Vec3> &positions() const { return positions_; }
  const std::vector<double> &charges() const { return charges_; }
  const std::vector<double> &masses() const { return masses_; }
  const std::vector<Vec3> &velocities() const { return velocities_; }
  bool has_velocities() const { return !velocities_.empty(); }

  double net_charge() const { return net_charge_; }
  double abs_charge_sum() const;
  double charge_squared_sum() const;
  /// |sum q| <= 1e-12 * sum |q|.
  bool is_neutral() const;
  /// Throws ConfigurationError when the system is not neutral.
  void require_neutral() const;

  /// Copy with new positions (wrapped) and velocities; charges and masses kept.
  AtomSystem with_state(std::vector<Vec3> positions, std::vector<Vec3> velocities) const;

private:
  void validate_and_wrap();

  SimulationBox box_;
  std::vector<Vec3> positions_;
  std::vector<double> charges_;
  std::vector<double> masses_;
  std::vector<Vec3> velocities_;
  double net_charge_ = 0.0;
};

// ---------------------------------------------------------------------------
// Solver parameters

enum class DiffMode { IK, AD };

enum class InfluenceKind {
  /// (4 pi / k^2) exp(-k^2 / 4 alpha^2) divided by the squared spline transform.
  Deconvolved,
  /// Hockney-Eastwood optimal function with alias sums over +-2 images.
  Optimal,
};

std::string to_string(DiffMode mode);
DiffMode parse_diff_mode(const std::string &text);

struct GridDims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  int operator[](std::size_t d) const { return d == 0 ? nx : (d == 1 ? ny : nz); }
  int &operator[](std::size_t d) { return d == 0 ? nx : (d == 1 ? ny : nz); }
  std::size_t count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  friend bool operator==(const GridDims &, const GridDims &) = default;
};

std::string to_string(const GridDims &dims);

inline constexpr std::array<int, 3> kSupportedOrders{3, 5, 7};
bool is_supported_order(int order);

struct PppmParams {
  double cutoff = 0.0;
  double accuracy = 1e-4;
  int order = 7;
  DiffMode mode = DiffMode::IK;
  double alpha = 0.0;
  GridDims grid;
  int table_points = 5000;
  bool use_table = true;
  double coulomb_constant = 1.0;
  double dielectric = 1.0;
  InfluenceKind influence = InfluenceKind::Deconvolved;

  double coulomb_prefactor() const { return coulomb_constant / dielectric; }

  /// Checks the parameter invariants, including the minimum-image bound
  /// cutoff <= min(L)/2 for the given box. Throws ConfigurationError.
  void validate(const SimulationBox &box) const;

  friend bool operator==(const PppmParams &, const PppmParams &) = default;
};

// ---------------------------------------------------------------------------
// Results

struct ForceSet {
  std::vector<Vec3> forces;

  ForceSet() = default;
  explicit ForceSet(std::size_t n) : forces(n) {}

  std::size_t size() const { return forces.size(); }
  Vec3 &operator[](std::size_t i) { return forces[i]; }
  const Vec3 &operator[](std::size_t i) const { return forces[i]; }

  Vec3 net() const;
  double mean_magnitude() const;
  /// Per-component sum of absolute values over all atoms.
  Vec3 abs_sum() const;
  ForceSet &operator+=(const ForceSet &other);
};

struct EnergyBreakdown {
  double pair = 0.0;
  double kspace = 0.0;
  double self_energy = 0.0;
  double total = 0.0;

  static EnergyBreakdown make(double pair, double kspace, double self_energy) {
    return {pair, kspace, self_energy, pair + kspace + self_energy};
  }
};

} // namespace pppm
