#include "pppm/atom_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace pppm {
namespace {

// Next non-empty line with comments stripped, split into tokens.
bool next_record(std::istream &in, std::vector<std::string> &tokens, int &line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    tokens.clear();
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (!tokens.empty()) return true;
  }
  return false;
}

double to_real(const std::string &tok, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw InvalidInput("line " + std::to_string(line_no) + ": '" + tok + "' is not a finite number");
  }
  return v;
}

} // namespace

AtomSystem read_atom_system(std::istream &in) {
  std::vector<std::string> tok;
  int line_no = 0;

  if (!next_record(in, tok, line_no)) throw InvalidInput("empty atom file");
  if (tok.size() != 1) throw InvalidInput("line " + std::to_string(line_no) + ": expected atom count");
  long long n = 0;
  try {
    std::size_t used = 0;
    n = std::stoll(tok[0], &used);
    if (used != tok[0].size()) n = -1;
  } catch (const std::exception &) {
    n = -1;
  }
  if (n < 1) throw InvalidInput("line " + std::to_string(line_no) + ": atom count must be >= 1");

  if (!next_record(in, tok, line_no)) throw InvalidInput("missing box line");
  if (tok.size() != 3) throw InvalidInput("line " + std::to_string(line_no) + ": expected Lx Ly Lz");
  const SimulationBox box(to_real(tok[0], line_no), to_real(tok[1], line_no), to_real(tok[2], line_no));

  std::vector<Vec3> pos;
  std::vector<double> q;
  std::vector<double> mass;
  std::vector<Vec3> vel;
  pos.reserve(static_cast<std::size_t>(n));
  q.reserve(static_cast<std::size_t>(n));
  std::size_t columns = 0;
  for (long long i = 0; i < n; ++i) {
    if (!next_record(in, tok, line_no)) {
      throw InvalidInput("expected " + std::to_string(n) + " atoms, found " + std::to_string(i));
    }
    if (tok.size() != 4 && tok.size() != 8) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 4 or 8 columns");
    }
    if (columns == 0) columns = tok.size();
    if (tok.size() != columns) {
      throw InvalidInput("line " + std::to_string(line_no) + ": inconsistent column count");
    }
    pos.push_back({to_real(tok[0], line_no), to_real(tok[1], line_no), to_real(tok[2], line_no)});
    q.push_back(to_real(tok[3], line_no));
    if (columns == 8) {
      mass.push_back(to_real(tok[4], line_no));
      vel.push_back({to_real(tok[5], line_no), to_real(tok[6], line_no), to_real(tok[7], line_no)});
    }
  }
  if (next_record(in, tok, line_no)) {
    throw InvalidInput("line " + std::to_string(line_no) + ": trailing data after last atom");
  }
  return AtomSystem(box, std::move(pos), std::move(q), std::move(mass), std::move(vel));
}

AtomSystem read_atom_system_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open atom file '" + path + "'");
  return read_atom_system(in);
}

void write_atom_system(std::ostream &out, const AtomSystem &system) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  const auto &L = system.box().lengths();
  out << system.size() << '\n' << L.x << ' ' << L.y << ' ' << L.z << '\n';
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto &p = system.positions()[i];
    out << p.x << ' ' << p.y << ' ' << p.z << ' ' << system.charges()[i];
    if (system.has_velocities()) {
      const auto &v = system.velocities()[i];
      out << ' ' << system.masses()[i] << ' ' << v.x << ' ' << v.y << ' ' << v.z;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

} // namespace pppm
