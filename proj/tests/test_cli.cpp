// Drives the bench binary end to end: flag parsing, config files, dataset
// ingestion and report emission.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "caracore/datasets.hpp"
#include "caracore/report.hpp"

using namespace caracore;

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CARACORE_BENCH_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("caracore_cli_" + name);
}

}  // namespace

TEST(Cli, SweepWritesParsableJson) {
  const auto out = temp_path("sweep.json");
  const int rc = run_cli("sweep --synthetic 500,3,0,100 --solver linear --m 1 "
                         "--methods plain,coreset --trials 2 --seed 9 --out " +
                         out.string());
  ASSERT_EQ(rc, 0);
  const json report = json::parse(read_file(out));
  EXPECT_EQ(report["records"].size(), 4u);
  EXPECT_EQ(report["config"]["seed"], 9);
  EXPECT_EQ(report["config"]["solver"], "linear");
  for (const auto& rec : report["records"])
    EXPECT_LE(rec["err_max_abs"].get<double>(), 1e-8);
  fs::remove(out);
}

TEST(Cli, ConfigFileDrivesRunAndFlagsOverride) {
  const auto cfg_path = temp_path("config.json");
  {
    json cfg;
    cfg["data"] = {{"kind", "synthetic"},
                   {"synthetic", {{"n", 400}, {"d", 3}, {"low", 0.0}, {"high", 10.0}}}};
    cfg["solver"] = "ridge";
    cfg["methods"] = {"plain", "coreset"};
    cfg["m"] = 3;
    cfg["alphas"] = {0.1, 1.0};
    cfg["trials"] = 1;
    cfg["seed"] = 21;
    std::ofstream(cfg_path) << cfg.dump();
  }
  const auto out1 = temp_path("cfg_run1.json");
  const auto out2 = temp_path("cfg_run2.json");
  ASSERT_EQ(run_cli("sweep --config " + cfg_path.string() + " --out " + out1.string()), 0);
  ASSERT_EQ(run_cli("sweep --config " + cfg_path.string() + " --out " + out2.string()), 0);

  const json r1 = json::parse(read_file(out1));
  const json r2 = json::parse(read_file(out2));
  EXPECT_EQ(r1["config"], r2["config"]);
  ASSERT_EQ(r1["records"].size(), 2u);
  for (size_t i = 0; i < r1["records"].size(); ++i) {
    EXPECT_EQ(r1["records"][i]["err_max_abs"], r2["records"][i]["err_max_abs"]);
    EXPECT_EQ(r1["records"][i]["seed"], r2["records"][i]["seed"]);
  }
  EXPECT_EQ(r1["config"]["seed"], 21);

  // An explicit flag wins over the config file.
  const auto out3 = temp_path("cfg_run3.json");
  ASSERT_EQ(run_cli("sweep --config " + cfg_path.string() + " --seed 99 --out " +
                    out3.string()),
            0);
  EXPECT_EQ(json::parse(read_file(out3))["config"]["seed"], 99);
  fs::remove(cfg_path);
  fs::remove(out1);
  fs::remove(out2);
  fs::remove(out3);
}

TEST(Cli, CsvDatasetFlagsFeedTheSweep) {
  const auto csv = temp_path("data.csv");
  {
    std::ofstream out(csv);
    out << "f0,f1,y\n";
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
      const double a = uniform01(rng), b = uniform01(rng);
      out << a << ',' << b << ',' << (3.0 * a - b) << "\n";
    }
    out << "bad,row,here\n";
  }
  const auto out = temp_path("csv_sweep.json");
  const int rc = run_cli("sweep --dataset " + csv.string() +
                         " --features 0,1 --target 2 --header --solver linear --m 1 "
                         "--methods plain --trials 1 --out " +
                         out.string());
  ASSERT_EQ(rc, 0);  // bad row dropped by default
  const json report = json::parse(read_file(out));
  EXPECT_EQ(report["records"][0]["n"], 200);

  // Strict mode refuses the unparsable row.
  EXPECT_NE(run_cli("sweep --dataset " + csv.string() +
                    " --features 0,1 --target 2 --header --strict-rows --solver linear "
                    "--m 1 --methods plain --trials 1 --out " +
                    out.string()),
            0);
  fs::remove(csv);
  fs::remove(out);
}

TEST(Cli, HistogramDefaultsCoverAllMethods) {
  const auto out = temp_path("hist.json");
  const int rc = run_cli("histogram --synthetic 2000,3,0,1000 --trials 3 --out " +
                         out.string());
  ASSERT_EQ(rc, 0);
  const json report = json::parse(read_file(out));
  EXPECT_EQ(report["config"]["precision"], "f32");
  EXPECT_EQ(report["histograms"].size(), 6u);
  EXPECT_EQ(report["config"]["trials"], 3);
  const size_t bins = report["config"]["histogram_bin_edges"].size() - 1;
  for (const auto& h : report["histograms"]) EXPECT_EQ(h["counts"].size(), bins);
  fs::remove(out);
}

TEST(Cli, CsvFormatRowsMatchRecords) {
  const auto out = temp_path("rows.csv");
  const int rc = run_cli("sweep --synthetic 300,2,0,10 --solver linear --m 1 "
                         "--methods plain,coreset,coreset-pp --trials 2 --format csv "
                         "--out " +
                         out.string());
  ASSERT_EQ(rc, 0);
  const std::string csv = read_file(out);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);  // header + 6 records
  fs::remove(out);
}

TEST(Cli, BadArgumentsFailCleanly) {
  EXPECT_NE(run_cli("sweep --synthetic nonsense"), 0);
  EXPECT_NE(run_cli("sweep --synthetic 100,3,0,10 --solver ridge --methods sketch-svd"),
            0);  // sketches are linear-only
  EXPECT_NE(run_cli("unknown-subcommand"), 0);
}
