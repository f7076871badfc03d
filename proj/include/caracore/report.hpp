#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "caracore/errors.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

using json = nlohmann::ordered_json;

/// One timed run of one method on one dataset instance. Every record carries
/// the seed that reproduces it.
struct TrialRecord {
  std::string method;
  Index n = 0;
  Index d = 0;
  Index alpha_count = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double wall_time_seconds = 0;
  double coreset_build_seconds = 0;
  Index coreset_builds = 0;
  std::optional<double> err_max_abs;  // vs the f64 full-data reference
  std::optional<double> err_l2;
  Index cholesky_failures = 0;
  std::string note;
};

struct HistogramRecord {
  std::string method;
  std::vector<double> bin_edges;  // ascending; counts has edges-1 entries
  std::vector<Index> counts;
};

struct SummaryRecord {
  std::string method;
  Index n = 0;
  double median_wall_time_seconds = 0;
  std::optional<double> median_err_max_abs;
  Index cholesky_failures = 0;
  Index records = 0;
};

struct BenchmarkReport {
  json config;  // full parameter echo; feeding it back reproduces the run
  std::string environment;
  std::vector<TrialRecord> records;
  std::vector<HistogramRecord> histograms;
  std::vector<SummaryRecord> summaries;
  json analysis;  // derived statistics (method comparisons etc.)
};

enum class ReportFormat { Json, Csv };

inline json to_json(const TrialRecord& r) {
  json j;
  j["method"] = r.method;
  j["n"] = r.n;
  j["d"] = r.d;
  j["alpha_count"] = r.alpha_count;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["wall_time_seconds"] = r.wall_time_seconds;
  j["coreset_build_seconds"] = r.coreset_build_seconds;
  j["coreset_builds"] = r.coreset_builds;
  j["err_max_abs"] = r.err_max_abs ? json(*r.err_max_abs) : json(nullptr);
  j["err_l2"] = r.err_l2 ? json(*r.err_l2) : json(nullptr);
  j["cholesky_failures"] = r.cholesky_failures;
  j["note"] = r.note;
  return j;
}

inline json to_json(const BenchmarkReport& report) {
  json j;
  j["config"] = report.config;
  j["environment"] = report.environment;
  j["records"] = json::array();
  for (const auto& r : report.records) j["records"].push_back(to_json(r));
  j["histograms"] = json::array();
  for (const auto& h : report.histograms) {
    json hj;
    hj["method"] = h.method;
    hj["bin_edges"] = h.bin_edges;
    hj["counts"] = h.counts;
    j["histograms"].push_back(hj);
  }
  j["summaries"] = json::array();
  for (const auto& s : report.summaries) {
    json sj;
    sj["method"] = s.method;
    sj["n"] = s.n;
    sj["median_wall_time_seconds"] = s.median_wall_time_seconds;
    sj["median_err_max_abs"] =
        s.median_err_max_abs ? json(*s.median_err_max_abs) : json(nullptr);
    sj["cholesky_failures"] = s.cholesky_failures;
    sj["records"] = s.records;
    j["summaries"].push_back(sj);
  }
  j["analysis"] = report.analysis;
  return j;
}

namespace detail {

inline std::string csv_field(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(17);
  os << *v;
  return os.str();
}

inline void write_report_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "method,n,d,alpha_count,trial,seed,wall_time_seconds,coreset_build_seconds,"
         "coreset_builds,err_max_abs,err_l2,cholesky_failures,note\n";
  out.precision(17);
  for (const auto& r : report.records) {
    out << r.method << ',' << r.n << ',' << r.d << ',' << r.alpha_count << ',' << r.trial
        << ',' << r.seed << ',' << r.wall_time_seconds << ',' << r.coreset_build_seconds
        << ',' << r.coreset_builds << ',' << csv_field(r.err_max_abs) << ','
        << csv_field(r.err_l2) << ',' << r.cholesky_failures << ',' << r.note << '\n';
  }
}

}  // namespace detail

/// Writes the report to `path` ("-" for stdout). JSON is a single object;
/// CSV holds one row per trial record.
inline void emit_report(const BenchmarkReport& report, ReportFormat format,
                        const std::string& path) {
  std::ofstream file;
  const bool to_stdout = path == "-" || path.empty();
  if (!to_stdout) {
    file.open(path);
    if (!file) throw Error("emit_report: cannot open " + path);
  }
  std::ostream& out = to_stdout ? std::cout : file;
  if (format == ReportFormat::Json)
    out << to_json(report).dump(2) << '\n';
  else
    detail::write_report_csv(report, out);
}

}  // namespace caracore
