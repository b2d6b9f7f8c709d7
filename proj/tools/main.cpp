// Command-line runner for verification campaigns.
//
//   modbanach --config campaign.json [--seed N] [--jobs N] [--out DIR] [--format json|csv|both]
//
// Exit codes: 0 every check holds, 1 a check is violated, 2 invalid
// configuration, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "modbanach/campaign.hpp"
#include "modbanach/error.hpp"

namespace fs = std::filesystem;
using namespace modbanach;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run a modular-space verification campaign"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out_dir;
  std::string format = "both";
  bool quiet = false;
  app.add_option("--config", config_path, "Campaign configuration (JSON)")->required();
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--jobs", jobs, "Override the configured degree of parallelism")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory (default: $MODBANACH_OUT, else the current directory)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_flag("--quiet", quiet, "Do not print the summary");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv("MODBANACH_OUT");
    out_dir = env && *env ? env : ".";
  }

  CampaignConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError(config_path + ": cannot open the configuration file");
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(config_path + ": not valid JSON: " + e.what());
    }
    if (seed && doc.is_object()) doc["seed"] = *seed;
    if (jobs && doc.is_object()) doc["jobs"] = *jobs;
    config = validate_config(doc);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  CampaignResult result;
  try {
    result = run_campaign(config);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }

  try {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    if (format != "csv") write_file(dir / "result.json", result.document().dump(2) + "\n");
    if (format != "json") {
      write_file(dir / "summary.csv", result.summary_csv());
      if (!result.reports.empty()) write_file(dir / "reports.csv", violation_csv(result.reports));
      for (const auto& [kind, table] : result.series) write_file(dir / (kind + ".csv"), emit_plot_data(result, kind));
    }
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return 3;
  }

  if (!quiet) {
    for (const auto& c : result.checks)
      std::cout << (c.holds ? "HOLDS     " : "VIOLATED  ") << c.name << "  " << c.detail << "\n";
    if (result.numerical_failure) std::cout << "FAILURE   " << result.failure << "\n";
    std::cout << config.command << ": " << (result.passed() ? "all checks hold" : "not all checks hold") << " ("
              << result.wall_seconds << " s, results in " << out_dir << ")\n";
  }
  return result.exit_code();
}
