#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pppm/cli.hpp"
#include "pppm/report.hpp"
#include "pppm/scenario.hpp"

using namespace pppm;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pppm");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> records(const std::string &text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

nlohmann::json without_times(nlohmann::json j) {
  j.erase("sections");
  j.erase("total_seconds");
  return j;
}

} // namespace

TEST_CASE("scenarios") {
  ScenarioOptions gas;
  gas.n = 100;
  gas.seed = 4;
  const AtomSystem a = generate_scenario(gas);
  const AtomSystem b = generate_scenario(gas);
  CHECK(a.positions() == b.positions());
  CHECK(a.charges() == b.charges());
  CHECK(a.net_charge() == 0.0);
  gas.seed = 5;
  CHECK(generate_scenario(gas).positions() != a.positions());

  ScenarioOptions salt;
  salt.kind = ScenarioKind::Rocksalt;
  salt.n = 64;
  salt.spacing = 1.0;
  const AtomSystem s = generate_scenario(salt);
  CHECK(s.net_charge() == 0.0);
  CHECK(s.box().length(0) == 4.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec3 &p = s.positions()[i];
    CHECK(p.x == std::round(p.x));
    const int parity = static_cast<int>(p.x + p.y + p.z) % 2;
    CHECK(s.charges()[i] == (parity == 0 ? 1.0 : -1.0));
  }
  salt.n = 16;
  CHECK_THROWS_AS(generate_scenario(salt), ConfigurationError);
  gas.n = 7;
  CHECK_THROWS_AS(generate_scenario(gas), ConfigurationError);

  ScenarioOptions dip;
  dip.kind = ScenarioKind::DipoleProbe;
  dip.n = 2;
  const AtomSystem d = generate_scenario(dip);
  CHECK(d.box().length(0) == 50.0);
  CHECK(norm(minimum_image(d.positions()[1] - d.positions()[0], d.box())) == doctest::Approx(1.0));
  dip.n = 3;
  CHECK_THROWS_AS(generate_scenario(dip), ConfigurationError);
  CHECK_THROWS_AS(parse_scenario("water"), InvalidInput);

  ScenarioOptions warm = gas;
  warm.n = 200;
  warm.temperature = 1.5;
  const AtomSystem w = generate_scenario(warm);
  CHECK(w.has_velocities());
}

TEST_CASE("grid text parsing") {
  CHECK(parse_grid("12,13,14") == GridDims{12, 13, 14});
  CHECK_THROWS_AS(parse_grid("12,13"), InvalidInput);
  CHECK_THROWS_AS(parse_grid("a,b,c"), InvalidInput);
  CHECK_THROWS_AS(parse_grid("12,0,14"), InvalidInput);
}

TEST_CASE("tune prints alpha and grid") {
  const CliResult r = invoke({"tune", "--cutoff", "5", "--accuracy", "1e-4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["alpha"].get<double>() == doctest::Approx(0.546310).epsilon(1e-6));
  CHECK(j["grid"].size() == 3);
  CHECK(j["estimated_error"].get<double>() <= 1e-4);
}

TEST_CASE("grid bump flag") {
  // Find a gas size whose unbumped grid lands on a multiple of 16.
  bool found = false;
  for (int n = 200; n <= 2000 && !found; n += 2) {
    const std::string ns = std::to_string(n);
    const CliResult plain = invoke({"tune", "--n", ns, "--cutoff", "3", "--no-grid-bump"});
    REQUIRE(plain.code == 0);
    const auto g = nlohmann::json::parse(plain.out)["grid"];
    if (g[0].get<int>() % 16 != 0) continue;
    found = true;
    const auto bumped = nlohmann::json::parse(invoke({"tune", "--n", ns, "--cutoff", "3"}).out)["grid"];
    CHECK(bumped[0].get<int>() == g[0].get<int>() + 1);
  }
  CHECK(found);
}

TEST_CASE("bench reports the stencil work ratio") {
  const std::vector<std::string> base{"bench", "--n", "128", "--cutoff", "3", "--repeat", "1"};
  auto with = [&](const std::string &order) {
    auto args = base;
    args.insert(args.end(), {"--order", order});
    const CliResult r = invoke(args);
    REQUIRE(r.code == 0);
    const auto recs = records(r.out);
    REQUIRE(recs.size() == 1);
    CHECK_NOTHROW(validate_report(recs[0]));
    CHECK(recs[0]["kind"] == "bench");
    return recs[0]["meta"]["stencil_points_per_atom"].get<double>();
  };
  const double s7 = with("7");
  const double s5 = with("5");
  CHECK(s7 == 343.0);
  CHECK(s5 == 125.0);
  CHECK(s7 / s5 == 2.744);
}

TEST_CASE("run is deterministic and writes a valid report") {
  const std::vector<std::string> args{"run", "--n", "128", "--cutoff", "3", "--temperature", "1",
                                      "--steps", "5", "--seed", "3"};
  const CliResult a = invoke(args);
  const CliResult b = invoke(args);
  REQUIRE(a.code == 0);
  const auto ra = records(a.out);
  const auto rb = records(b.out);
  REQUIRE(ra.size() == 1);
  CHECK_NOTHROW(validate_report(ra[0]));
  CHECK(ra[0]["kind"] == "run");
  CHECK(without_times(ra[0]) == without_times(rb[0]));
  CHECK(ra[0]["meta"]["relative_drift"].get<double>() <= 1e-3);
  for (const auto &name : kSectionNames) CHECK(ra[0]["sections"][std::string(name)].get<double>() >= 0.0);
}

TEST_CASE("csv output and output files") {
  const std::string path = "cli_test_sweep.csv";
  const CliResult r = invoke({"sweep", "--n", "128", "--cutoffs", "2.5,3", "--orders", "5,7", "--repeat", "1",
                              "--format", "csv", "--output", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].find("pppm_non_fft") != std::string::npos);
  CHECK(lines[0].find("pair") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("sweep records validate") {
  const CliResult r = invoke({"sweep", "--n", "128", "--cutoffs", "3", "--modes", "ik,ad", "--repeat", "1"});
  REQUIRE(r.code == 0);
  const auto recs = records(r.out);
  REQUIRE(recs.size() == 2);
  for (const auto &rec : recs) {
    CHECK_NOTHROW(validate_report(rec));
    CHECK(rec["kind"] == "sweep");
  }
  CHECK(recs[1]["meta"]["params"]["mode"] == "ad");
}

TEST_CASE("verify dipole") {
  const CliResult r = invoke({"verify", "--scenario", "dipole_probe", "--n", "2", "--box", "20", "--no-table"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"tune", "--bogus"}).code == 2);
  CHECK(invoke({"tune", "--help"}).code == 0);
  const CliResult bad_order = invoke({"tune", "--order", "4"});
  CHECK(bad_order.code == 1);
  CHECK(bad_order.err.find("error") != std::string::npos);
  CHECK(invoke({"tune", "--mode", "fd"}).code == 1);
  CHECK(invoke({"tune", "--scenario", "rocksalt", "--n", "10"}).code == 1);
  CHECK(invoke({"tune", "--input", "/nonexistent/atoms.txt"}).code == 1);
  CHECK(invoke({"bench", "--format", "xml", "--n", "64", "--cutoff", "3"}).code == 1);
}

TEST_CASE("input files") {
  const std::string path = "cli_test_atoms.txt";
  {
    std::ofstream f(path);
    f << "2\n10 10 10\n1 1 1 1\n2 1 1 -1\n";
  }
  const CliResult r = invoke({"tune", "--input", path, "--cutoff", "4"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["n"] == 2);
  std::remove(path.c_str());
}

TEST_CASE("report schema validation") {
  TimingReport rep;
  rep.kind = "bench";
  rep.sections = {0.1, 0.2, 0.3};
  rep.total_seconds = 1.0;
  nlohmann::json j = rep.to_json();
  CHECK_NOTHROW(validate_report(j));
  CHECK(j["sections"]["other"].get<double>() == doctest::Approx(0.4));
  rep.total_seconds = 0.5;
  CHECK(rep.to_json()["sections"]["other"].get<double>() == 0.0);
  nlohmann::json missing = j;
  missing["sections"].erase("pair");
  CHECK_THROWS_AS(validate_report(missing), InvalidInput);
  nlohmann::json extra = j;
  extra["sections"]["io"] = 0.0;
  CHECK_THROWS_AS(validate_report(extra), InvalidInput);
  nlohmann::json negative = j;
  negative["sections"]["pair"] = -1.0;
  CHECK_THROWS_AS(validate_report(negative), InvalidInput);
}
