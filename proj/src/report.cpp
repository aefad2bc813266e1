#include "pppm/report.hpp"

#include <algorithm>
#include <sstream>
#include <utility>
#include <vector>

#include "pppm/model.hpp"

#ifndef PPPM_BUILD_ID
#define PPPM_BUILD_ID "dev"
#endif

namespace pppm {

double TimingReport::other() const { return std::max(0.0, total_seconds - sections.measured()); }

nlohmann::json TimingReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["sections"] = {{"pppm_non_fft", sections.pppm_non_fft},
                   {"pppm_fft", sections.pppm_fft},
                   {"pair", sections.pair},
                   {"other", other()}};
  j["total_seconds"] = total_seconds;
  j["meta"] = meta;
  return j;
}

void validate_report(const nlohmann::json &record) {
  auto fail = [](const std::string &what) { throw InvalidInput("report schema: " + what); };
  if (!record.is_object()) fail("record is not an object");
  if (!record.contains("kind") || !record["kind"].is_string()) fail("missing string 'kind'");
  if (!record.contains("sections") || !record["sections"].is_object()) fail("missing object 'sections'");
  const auto &s = record["sections"];
  if (s.size() != kSectionNames.size()) fail("'sections' must have exactly four keys");
  for (auto name : kSectionNames) {
    const std::string key(name);
    if (!s.contains(key) || !s[key].is_number()) fail("missing numeric section '" + key + "'");
    if (s[key].get<double>() < 0.0) fail("section '" + key + "' is negative");
  }
  if (!record.contains("total_seconds") || !record["total_seconds"].is_number()) fail("missing 'total_seconds'");
  if (record["total_seconds"].get<double>() < 0.0) fail("'total_seconds' is negative");
  if (!record.contains("meta") || !record["meta"].is_object()) fail("missing object 'meta'");
}

namespace {

void flatten(const nlohmann::json &j, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else if (it->is_string()) {
      out.emplace_back(key, it->get<std::string>());
    } else {
      out.emplace_back(key, it->dump());
    }
  }
}

std::string csv_escape(const std::string &v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace

std::string csv_header(const nlohmann::json &record) {
  std::vector<std::pair<std::string, std::string>> cols;
  flatten(record, "", cols);
  std::ostringstream ss;
  for (std::size_t i = 0; i < cols.size(); ++i) ss << (i ? "," : "") << csv_escape(cols[i].first);
  return ss.str();
}

std::string csv_row(const nlohmann::json &record) {
  std::vector<std::pair<std::string, std::string>> cols;
  flatten(record, "", cols);
  std::ostringstream ss;
  for (std::size_t i = 0; i < cols.size(); ++i) ss << (i ? "," : "") << csv_escape(cols[i].second);
  return ss.str();
}

std::string build_id() { return PPPM_BUILD_ID; }

} // namespace pppm
