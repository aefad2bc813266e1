#pragma once

// Timing breakdown records. Every report carries exactly the four sections
// pppm_non_fft, pppm_fft, pair and other (wall seconds); "other" is the
// total minus the three measured sections, clipped at zero.
//
// Reports serialize as one JSON object per line:
//   {"kind": "...", "sections": {...}, "total_seconds": t, "meta": {...}}

#include <array>
#include <chrono>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

namespace pppm {

inline constexpr std::array<std::string_view, 4> kSectionNames{"pppm_non_fft", "pppm_fft", "pair", "other"};

struct SectionTimes {
  double pppm_non_fft = 0.0;
  double pppm_fft = 0.0;
  double pair = 0.0;

  double measured() const { return pppm_non_fft + pppm_fft + pair; }
  SectionTimes &operator+=(const SectionTimes &o) {
    pppm_non_fft += o.pppm_non_fft;
    pppm_fft += o.pppm_fft;
    pair += o.pair;
    return *this;
  }
};

/// Adds the elapsed wall time to `sink` when it goes out of scope.
class ScopedTimer {
public:
  explicit ScopedTimer(double &sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~ScopedTimer() {
    sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  ScopedTimer(const ScopedTimer &) = delete;
  ScopedTimer &operator=(const ScopedTimer &) = delete;

private:
  double &sink_;
  std::chrono::steady_clock::time_point start_;
};

struct TimingReport {
  std::string kind;
  SectionTimes sections;
  double total_seconds = 0.0;
  nlohmann::json meta = nlohmann::json::object();

  double other() const;
  nlohmann::json to_json() const;
};

/// Throws pppm::InvalidInput describing the first schema violation.
void validate_report(const nlohmann::json &record);

/// Column order used by CSV output.
std::string csv_header(const nlohmann::json &record);
std::string csv_row(const nlohmann::json &record);

/// Identifies the build in report metadata.
std::string build_id();

} // namespace pppm
