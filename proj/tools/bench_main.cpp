// Benchmark and verification harness for the caracore library.
//
// Subcommands:
//   sweep      size/time/error sweep of solver methods over data sizes
//   cv-sweep   cross-validation cost sweep over regularization-grid sizes
//   histogram  low-precision accuracy histogram for linear regression
//   verify     runs the library's invariant suite; nonzero exit on violation
//
// Precedence: built-in defaults < subcommand defaults < --config file <
// explicit flags.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "caracore/bench.hpp"
#include "caracore/report.hpp"
#include "caracore/verify.hpp"

namespace {

using namespace caracore;

struct Flags {
  std::string config_path;
  std::string dataset;
  std::vector<Index> features;
  Index target = 0;
  bool header = false;
  bool strict_rows = false;
  std::string synthetic;
  std::string sizes;
  std::string precision;
  std::string solver;
  std::string methods;
  std::string alphas;
  std::string alpha_counts;
  Index m = 3;
  double rho = 0.5;
  Index k = 0, k1 = 0, k2 = 0;
  int trials = 5;
  std::uint64_t seed = 42;
  std::string out = "-";
  std::string format = "json";
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> parse_alpha_list(const std::string& s) {
  // Either an explicit comma list, or "count:lo:hi" for a log-spaced grid.
  std::vector<double> alphas;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw CLI::ValidationError("--alphas", "expected count:lo:hi");
    const int count = std::stoi(parts[0]);
    const double lo = std::stod(parts[1]);
    const double hi = std::stod(parts[2]);
    if (count < 1 || !(lo > 0) || !(hi >= lo))
      throw CLI::ValidationError("--alphas", "need count >= 1 and 0 < lo <= hi");
    for (int i = 0; i < count; ++i)
      alphas.push_back(count == 1 ? lo
                                  : std::pow(10.0, std::log10(lo) +
                                                       (std::log10(hi) - std::log10(lo)) *
                                                           i / (count - 1)));
    return alphas;
  }
  for (const auto& part : split(s, ',')) alphas.push_back(std::stod(part));
  return alphas;
}

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override it");
  cmd->add_option("--dataset", f.dataset, "CSV dataset path");
  cmd->add_option("--features", f.features, "0-based feature column indices")
      ->delimiter(',');
  cmd->add_option("--target", f.target, "0-based target column index");
  cmd->add_flag("--header", f.header, "dataset has a single header line");
  cmd->add_flag("--strict-rows", f.strict_rows,
                "fail on unparsable rows instead of dropping them");
  cmd->add_option("--synthetic", f.synthetic, "synthetic data as n,d,low,high");
  cmd->add_option("--sizes", f.sizes, "comma list of row counts to sweep");
  cmd->add_option("--precision", f.precision, "f32 or f64")
      ->check(CLI::IsMember({"f32", "f64"}));
  cmd->add_option("--solver", f.solver, "linear, ridge, lasso or elastic")
      ->check(CLI::IsMember({"linear", "ridge", "lasso", "elastic"}));
  cmd->add_option("--methods", f.methods,
                  "comma list: plain, coreset, coreset-pp, sketch-cholesky, "
                  "sketch-svd, sketch-inverse");
  cmd->add_option("--m", f.m, "fold count");
  cmd->add_option("--alphas", f.alphas, "comma list, or count:lo:hi (log-spaced)");
  cmd->add_option("--alpha-counts", f.alpha_counts,
                  "comma list of grid sizes (cv-sweep)");
  cmd->add_option("--rho", f.rho, "elastic-net mix in [0,1]");
  cmd->add_option("--k", f.k, "cluster count (0 = default 2(d+1)^2+2)");
  cmd->add_option("--k1", f.k1, "sparse cluster count (0 = default)");
  cmd->add_option("--k2", f.k2, "sparse block count (0 = default)");
  cmd->add_option("--trials", f.trials, "trials per configuration");
  cmd->add_option("--seed", f.seed, "base seed; trial t uses seed + t");
  cmd->add_option("--out", f.out, "output path, - for stdout");
  cmd->add_option("--format", f.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

BenchConfig build_config(CLI::App* cmd, const Flags& f, BenchConfig cfg) {
  if (cmd->count("--config") > 0) {
    std::ifstream in(f.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + f.config_path);
    json j;
    in >> j;
    cfg = config_from_json(j, cfg);
  }
  if (cmd->count("--dataset") > 0) {
    cfg.data_kind = DatasetKind::Csv;
    cfg.csv.path = f.dataset;
    cfg.csv.feature_columns = f.features;
    cfg.csv.target_column = f.target;
    cfg.csv.header = f.header;
    cfg.csv.drop_bad_rows = !f.strict_rows;
  }
  if (cmd->count("--synthetic") > 0) {
    const auto parts = split(f.synthetic, ',');
    if (parts.size() != 4)
      throw CLI::ValidationError("--synthetic", "expected n,d,low,high");
    cfg.data_kind = DatasetKind::Synthetic;
    cfg.synthetic.n = std::stoll(parts[0]);
    cfg.synthetic.d = std::stoll(parts[1]);
    cfg.synthetic.low = std::stod(parts[2]);
    cfg.synthetic.high = std::stod(parts[3]);
  }
  if (cmd->count("--sizes") > 0) {
    cfg.sizes.clear();
    for (const auto& part : split(f.sizes, ',')) cfg.sizes.push_back(std::stoll(part));
  }
  if (cmd->count("--precision") > 0)
    cfg.precision = f.precision == "f32" ? Precision::F32 : Precision::F64;
  if (cmd->count("--solver") > 0) cfg.solver = parse_solver(f.solver);
  if (cmd->count("--methods") > 0) {
    cfg.methods.clear();
    for (const auto& part : split(f.methods, ','))
      cfg.methods.push_back(parse_method(part));
  }
  if (cmd->count("--m") > 0) cfg.m = f.m;
  if (cmd->count("--alphas") > 0) cfg.alphas = parse_alpha_list(f.alphas);
  if (cmd->count("--alpha-counts") > 0) {
    cfg.alpha_counts.clear();
    for (const auto& part : split(f.alpha_counts, ','))
      cfg.alpha_counts.push_back(std::stoll(part));
  }
  if (cmd->count("--rho") > 0) cfg.rho = f.rho;
  if (cmd->count("--k") > 0) cfg.k = f.k;
  if (cmd->count("--k1") > 0) cfg.k1 = f.k1;
  if (cmd->count("--k2") > 0) cfg.k2 = f.k2;
  if (cmd->count("--trials") > 0) cfg.trials = f.trials;
  if (cmd->count("--seed") > 0) cfg.seed = f.seed;
  return cfg;
}

void emit(const BenchmarkReport& report, const Flags& f) {
  emit_report(report, f.format == "csv" ? ReportFormat::Csv : ReportFormat::Json, f.out);
  if (f.out != "-" && !f.out.empty())
    std::cerr << "report written to " << f.out << "\n";
}

int run_verify(CLI::App* cmd, std::uint64_t seed) {
  VerifyOptions opt;
  if (cmd->count("--seed") > 0) opt.seed = seed;
  const auto results = run_verification(opt);
  for (const auto& r : results) {
    std::printf("[%s] %-28s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.c_str());
  }
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caracore benchmark harness"};
  app.require_subcommand(1);

  Flags sweep_flags, cv_flags, hist_flags;
  auto* sweep = app.add_subcommand("sweep", "size/time/error sweep over data sizes");
  add_flags(sweep, sweep_flags);
  auto* cv = app.add_subcommand("cv-sweep", "cost sweep over regularization-grid sizes");
  add_flags(cv, cv_flags);
  auto* hist = app.add_subcommand("histogram",
                                  "low-precision accuracy histogram (linear regression)");
  add_flags(hist, hist_flags);

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  std::uint64_t verify_seed = 0;
  verify->add_option("--seed", verify_seed, "seed for the fuzz corpora");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      emit(run_size_sweep(build_config(sweep, sweep_flags, BenchConfig{})), sweep_flags);
    } else if (cv->parsed()) {
      emit(run_cv_sweep(build_config(cv, cv_flags, BenchConfig{})), cv_flags);
    } else if (hist->parsed()) {
      BenchConfig defaults;
      defaults.precision = Precision::F32;
      defaults.solver = SolverKind::Linear;
      defaults.trials = 20;
      defaults.methods = {Method::Plain,          Method::CoresetExact,
                          Method::CoresetPP,      Method::SketchCholesky,
                          Method::SketchSvd,      Method::SketchInverse};
      emit(run_accuracy_histogram(build_config(hist, hist_flags, defaults)), hist_flags);
    } else if (verify->parsed()) {
      return run_verify(verify, verify_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
