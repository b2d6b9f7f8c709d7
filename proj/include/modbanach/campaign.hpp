#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modbanach/io.hpp"

namespace modbanach {

inline constexpr const char* kLibraryVersion = "0.1.0";

// A validated campaign. `document` is the normalized configuration with
// every default filled in; it re-validates to itself.
struct CampaignConfig {
  Json document;
  std::string command;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

// Throws ConfigError with the JSON path of the first offending field.
CampaignConfig validate_config(const Json& document);

struct CampaignCheck {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct CampaignResult {
  Json config;    // echo of the normalized configuration
  Json payload;   // deterministic numbers: identical for identical configs, whatever `jobs` is
  std::vector<CampaignCheck> checks;
  std::vector<ViolationReport> reports;     // verify campaigns
  std::map<std::string, CsvTable> series;   // plot-ready tables by kind
  bool numerical_failure = false;
  std::string failure;
  double wall_seconds = 0.0;
  std::string version = kLibraryVersion;

  bool passed() const;
  // 0 all checks hold, 1 some check violated, 3 numerical failure.
  int exit_code() const;
  // {"version", "config", "payload", "wall_seconds"}
  Json document() const;
  // One row per check: command, check, holds, detail.
  std::string summary_csv() const;
};

// Exit code for a configuration that fails validation.
inline constexpr int kExitInvalidConfig = 2;

CampaignResult run_campaign(const CampaignConfig& config);

// Plot-ready CSV for one series: "trace" (n, norm, residual, defect),
// "asymptotics" (n, alpha, beta) or "nakano_terms" (n, term, log_slope).
// Throws std::invalid_argument when the result does not carry the series.
std::string emit_plot_data(const CampaignResult& result, const std::string& kind);

}  // namespace modbanach
