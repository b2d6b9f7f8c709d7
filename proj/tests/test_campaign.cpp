#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modbanach/campaign.hpp"
#include "modbanach/error.hpp"

using namespace modbanach;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

CampaignResult run(const std::string& text) { return run_campaign(validate_config(Json::parse(text))); }

std::string config_error(const std::string& text) {
  try {
    validate_config(Json::parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("modbanach_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + MODBANACH_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kJvnEuclid = R"({"command": "jvn", "seed": 1, "space": {"kind": "euclid", "params": {"d": 5}}})";
const char* kParallelogramLp4 =
    R"({"command": "verify", "seed": 1, "check": "parallelogram", "space": {"kind": "lp", "params": {"p": 4, "d": 2}}, "samples": 200})";
// A slow rotation between E0 = R and H: isometric, but (PT)^n x = cos^n(0.05) x is still moving at n_max.
std::string slow_rotation() {
  char buf[400];
  std::snprintf(buf, sizeof buf,
                R"({"command": "iterate", "seed": 2, "embedding": {"kind": "matrix", "params": )"
                R"({"e0": {"kind": "euclid", "params": {"d": 1}}, "h_dim": 1, "rows": [[%.17g], [%.17g]]}}, )"
                R"("x": [1], "n_max": 50, "limit": {"samples": 2, "summand_budget": 2}, "isometry_samples": 50})",
                std::cos(0.05), std::sin(0.05));
  return buf;
}

}  // namespace

TEST(Config, ValidationNamesTheField) {
  EXPECT_EQ(config_error(R"({"command": "jvn", "space": {"kind": "euclid", "params": {"d": 2}}})").rfind("$.seed:", 0), 0u);
  EXPECT_EQ(config_error(R"({"command": "fly", "seed": 1})").rfind("$.command:", 0), 0u);
  EXPECT_EQ(config_error(R"({"command": "jvn", "seed": 1, "space": {"kind": "lp", "params": {"p": 0.5, "d": 2}}})")
                .rfind("$.space", 0),
            0u);
  EXPECT_EQ(config_error(R"({"command": "jvn", "seed": 1, "jobs": 0, "space": {"kind": "euclid", "params": {"d": 2}}})")
                .rfind("$.jobs:", 0),
            0u);
  EXPECT_EQ(config_error(R"({"command": "jvn", "seed": 1, "bogus": 3, "space": {"kind": "euclid", "params": {"d": 2}}})")
                .rfind("$.bogus:", 0),
            0u);
  EXPECT_EQ(config_error(R"({"command": "verify", "seed": 1, "check": "clarkson_lower", "space": {"kind": "lp", "params": {"p": 1.5, "d": 2}}})")
                .rfind("$.", 0),
            0u);
  EXPECT_EQ(config_error(R"({"command": "iterate", "seed": 1, "embedding": {"kind": "inclusion", "params": {"e0": {"kind": "euclid", "params": {"d": 2}}}}, "x": [1, 2, 3]})")
                .rfind("$.x:", 0),
            0u);
  EXPECT_EQ(config_error(R"({"command": "iterate", "seed": 1, "n_max": 3, "embedding": {"kind": "inclusion", "params": {"e0": {"kind": "euclid", "params": {"d": 1}}}}, "x": [1]})")
                .rfind("$.n_max:", 0),
            0u);
}

TEST(Campaign, VerifyClarksonExample) {
  auto r = run(R"({"command": "verify", "seed": 42, "check": "clarkson_lower", "space": {"kind": "lp", "params": {"p": 3, "d": 5}}, "samples": 100000, "tolerance": 1e-12})");
  EXPECT_EQ(r.exit_code(), 0);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_LE(r.reports[0].max_violation, 1e-12);
}

TEST(Campaign, JvnEuclidExample) {
  auto r = run(kJvnEuclid);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_NEAR(r.payload.at("estimate").at("lower_bound").get<double>(), 1.0, 1e-9);
}

TEST(Campaign, SummandExample) {
  auto r = run(R"({"command": "summand", "seed": 3, "space": {"kind": "lp", "params": {"p": 4, "d": 2}}})");
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_FALSE(r.payload.at("search").at("found").get<bool>());
  EXPECT_GT(r.payload.at("search").at("residual").get<double>(), 0.01);
}

TEST(Campaign, ViolatedAndNumericalFailureCodes) {
  EXPECT_EQ(run(kParallelogramLp4).exit_code(), 1);
  auto r = run(slow_rotation());
  EXPECT_TRUE(r.numerical_failure);
  EXPECT_EQ(r.exit_code(), 3);
  EXPECT_TRUE(r.payload.contains("failure"));
}

TEST(Campaign, ExpectationsBecomeChecks) {
  auto r = run(R"({"command": "jvn", "seed": 1, "space": {"kind": "euclid", "params": {"d": 3}},
                   "expect": [{"path": "/estimate/lower_bound", "equals": 2, "tolerance": 1e-9}]})");
  EXPECT_EQ(r.exit_code(), 1);
  EXPECT_THROW(run(R"({"command": "jvn", "seed": 1, "space": {"kind": "euclid", "params": {"d": 3}},
                       "expect": [{"path": "no-slash"}]})"),
               ConfigError);
}

TEST(Campaign, EchoedConfigRerunsToTheSamePayload) {
  for (const char* text : {kJvnEuclid, kParallelogramLp4}) {
    auto first = run(text);
    auto again = run_campaign(validate_config(first.config));
    EXPECT_EQ(validate_config(first.config).document, first.config);
    EXPECT_EQ(again.payload.dump(), first.payload.dump());
  }
}

TEST(Campaign, PayloadIgnoresJobs) {
  auto doc = Json::parse(R"({"command": "verify", "seed": 4, "check": "clarkson_upper", "space": {"kind": "schatten", "params": {"p": 1.5, "side": 3}}, "samples": 3000})");
  auto a = run_campaign(validate_config(doc));
  doc["jobs"] = 8;
  auto b = run_campaign(validate_config(doc));
  EXPECT_EQ(a.payload.dump(), b.payload.dump());
}

TEST(PlotData, SeriesColumns) {
  auto it = run(R"({"command": "iterate", "seed": 5, "embedding": {"kind": "counterexample", "params": {"e1": {"kind": "lp", "params": {"p": 4, "d": 2}}, "h_dim": 2}}, "x": [0, 0, 1], "n_max": 6, "limit": {"samples": 2, "summand_budget": 2}, "isometry_samples": 20})");
  const auto trace = emit_plot_data(it, "trace");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "n,norm,residual,defect");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 8);
  EXPECT_NE(trace.find("\n1,0,1,0\n"), std::string::npos) << trace;
  EXPECT_EQ(trace, emit_plot_data(run_campaign(validate_config(it.config)), "trace"));

  auto as = run(R"({"command": "asymptotics", "seed": 1, "spec": {"kind": "power", "params": {"a": 1}}, "horizon": 20})");
  EXPECT_EQ(emit_plot_data(as, "asymptotics").rfind("n,alpha,beta\n", 0), 0u);

  auto nk = run(R"({"command": "nakano", "seed": 1, "exponents": {"kind": "power", "params": {"a": 1}}, "terms": {"c": 0.5, "count": 10}})");
  EXPECT_EQ(emit_plot_data(nk, "nakano_terms").rfind("n,term,log_slope\n", 0), 0u);
  EXPECT_THROW(emit_plot_data(nk, "trace"), std::invalid_argument);
}

TEST(Cli, ExitCodesEndToEnd) {
  const auto dir = scratch("cli");
  spit(dir / "ok.json", kJvnEuclid);
  spit(dir / "violated.json", kParallelogramLp4);
  spit(dir / "invalid.json", R"({"command": "jvn", "space": {"kind": "euclid", "params": {"d": 2}}})");
  spit(dir / "broken.json", "{ not json");
  spit(dir / "numerical.json", slow_rotation());
  const std::string out = " --out \"" + (dir / "out").string() + "\"";
  EXPECT_EQ(cli("--config \"" + (dir / "ok.json").string() + "\"" + out), 0);
  EXPECT_EQ(cli("--config \"" + (dir / "violated.json").string() + "\"" + out), 1);
  EXPECT_EQ(cli("--config \"" + (dir / "invalid.json").string() + "\"" + out), 2);
  EXPECT_EQ(cli("--config \"" + (dir / "broken.json").string() + "\"" + out), 2);
  EXPECT_EQ(cli("--config \"" + (dir / "missing.json").string() + "\"" + out), 2);
  EXPECT_EQ(cli("--config \"" + (dir / "ok.json").string() + "\" --jobs 0" + out), 2);
  EXPECT_EQ(cli("--config \"" + (dir / "numerical.json").string() + "\"" + out), 3);
  fs::remove_all(dir);
}

TEST(Cli, OutputsSeedOverrideAndEnvDirectory) {
  const auto dir = scratch("out");
  spit(dir / "it.json", R"({"command": "iterate", "seed": 5, "embedding": {"kind": "counterexample", "params": {"e1": {"kind": "euclid", "params": {"d": 1}}, "h_dim": 1}}, "x": [1, 1], "n_max": 10, "limit": {"samples": 1, "summand_budget": 1}, "isometry_samples": 10})");
  ASSERT_EQ(cli("--config \"" + (dir / "it.json").string() + "\" --seed 77 --out \"" + (dir / "a").string() + "\""), 0);
  for (const char* f : {"result.json", "summary.csv", "trace.csv"}) EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
  const auto doc = Json::parse(slurp(dir / "a" / "result.json"));
  EXPECT_EQ(doc.at("payload").at("seed").get<std::uint64_t>(), 77u);
  EXPECT_EQ(doc.at("config").at("seed").get<std::uint64_t>(), 77u);
  EXPECT_EQ(doc.at("version"), kLibraryVersion);

  ASSERT_EQ(cli("--config \"" + (dir / "it.json").string() + "\" --format csv",
                "MODBANACH_OUT=\"" + (dir / "env").string() + "\""),
            0);
  EXPECT_TRUE(fs::exists(dir / "env" / "trace.csv"));
  EXPECT_FALSE(fs::exists(dir / "env" / "result.json"));
  // Same config and seed: the plot data is bit-stable.
  ASSERT_EQ(cli("--config \"" + (dir / "it.json").string() + "\" --seed 77 --format csv --out \"" +
                (dir / "b").string() + "\""),
            0);
  EXPECT_EQ(slurp(dir / "a" / "trace.csv"), slurp(dir / "b" / "trace.csv"));
  fs::remove_all(dir);
}

// Set MODBANACH_REGEN_GOLDEN=1 to rewrite the expected payloads.
TEST(Golden, PayloadsMatchByteForByte) {
  const bool regen = std::getenv("MODBANACH_REGEN_GOLDEN") != nullptr;
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(GOLDEN_DIR)) {
    const auto name = entry.path().filename().string();
    const std::string suffix = ".config.json";
    if (name.size() <= suffix.size() || name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    ++seen;
    const auto stem = name.substr(0, name.size() - suffix.size());
    const auto expected_path = entry.path().parent_path() / (stem + ".payload.json");
    auto doc = Json::parse(slurp(entry.path()));
    for (std::size_t jobs : {1, 8}) {
      doc["jobs"] = jobs;
      const auto text = run_campaign(validate_config(doc)).payload.dump(2) + "\n";
      if (regen && jobs == 1) spit(expected_path, text);
      EXPECT_EQ(text, slurp(expected_path)) << stem << " with jobs " << jobs;
    }
  }
  EXPECT_GE(seen, 7u);
}
