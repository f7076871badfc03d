#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "caracore/cv.hpp"
#include "caracore/datasets.hpp"
#include "caracore/lms.hpp"
#include "caracore/report.hpp"
#include "caracore/sketches.hpp"
#include "caracore/solvers.hpp"

namespace caracore {

enum class Method {
  Plain,           // the solver on the original rows
  CoresetExact,    // per-fold scaled-row-subset compression
  CoresetPP,       // per-fold reconstructed d+1-row compression
  SketchCholesky,  // accumulated Gram + Cholesky factor
  SketchSvd,       // accumulated Gram + sqrt(D) V^T
  SketchInverse,   // accumulated normal equations, solved directly
};

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Plain: return "plain";
    case Method::CoresetExact: return "coreset";
    case Method::CoresetPP: return "coreset-pp";
    case Method::SketchCholesky: return "sketch-cholesky";
    case Method::SketchSvd: return "sketch-svd";
    case Method::SketchInverse: return "sketch-inverse";
  }
  return "?";
}

inline Method parse_method(const std::string& name) {
  if (name == "plain") return Method::Plain;
  if (name == "coreset") return Method::CoresetExact;
  if (name == "coreset-pp") return Method::CoresetPP;
  if (name == "sketch-cholesky") return Method::SketchCholesky;
  if (name == "sketch-svd") return Method::SketchSvd;
  if (name == "sketch-inverse") return Method::SketchInverse;
  throw std::invalid_argument("unknown method: " + name);
}

inline SolverKind parse_solver(const std::string& name) {
  if (name == "linear") return SolverKind::Linear;
  if (name == "ridge") return SolverKind::Ridge;
  if (name == "lasso") return SolverKind::Lasso;
  if (name == "elastic") return SolverKind::ElasticNet;
  throw std::invalid_argument("unknown solver: " + name);
}

struct BenchConfig {
  DatasetKind data_kind = DatasetKind::Synthetic;
  SyntheticSpec synthetic{100000, 7, 0.0, 1000.0, 0};  // seed comes from `seed`
  CsvSpec csv;
  Precision precision = Precision::F64;

  std::vector<Index> sizes;  // row counts to sweep; empty = dataset size
  SolverKind solver = SolverKind::Ridge;
  std::vector<Method> methods{Method::Plain, Method::CoresetExact, Method::CoresetPP};
  Index m = 3;
  std::vector<double> alphas;        // empty = 100 log-spaced in [1e-3, 1e3]
  std::vector<Index> alpha_counts{10, 25, 50, 100};
  double rho = 0.5;
  Index k = 0;   // 0 = 2(d+1)^2 + 2
  Index k1 = 0;  // 0 = defaults from default_lms_params
  Index k2 = 0;
  int trials = 5;
  std::uint64_t seed = 42;
  std::vector<double> histogram_bin_edges;  // empty = log-spaced 1e-12..1e2

  std::vector<double> effective_alphas() const {
    if (!alphas.empty()) return alphas;
    std::vector<double> a(100);
    for (int i = 0; i < 100; ++i) a[static_cast<size_t>(i)] = std::pow(10.0, -3.0 + 6.0 * i / 99.0);
    return a;
  }

  std::vector<double> effective_bin_edges() const {
    if (!histogram_bin_edges.empty()) return histogram_bin_edges;
    std::vector<double> edges;
    for (int i = 0; i <= 28; ++i) edges.push_back(std::pow(10.0, -12.0 + 0.5 * i));
    return edges;
  }

  Index feature_dim() const {
    return data_kind == DatasetKind::Synthetic
               ? synthetic.d
               : static_cast<Index>(csv.feature_columns.size());
  }

  CoresetParams effective_params() const {
    CoresetParams p = default_lms_params(feature_dim());
    if (k > 0) p.k = k;
    if (k1 > 0) p.k1 = k1;
    if (k2 > 0) p.k2 = k2;
    return p;
  }
};

inline json to_json(const BenchConfig& cfg) {
  json j;
  json data;
  data["kind"] = cfg.data_kind == DatasetKind::Synthetic ? "synthetic" : "csv";
  if (cfg.data_kind == DatasetKind::Synthetic) {
    data["synthetic"] = {{"n", cfg.synthetic.n},
                         {"d", cfg.synthetic.d},
                         {"low", cfg.synthetic.low},
                         {"high", cfg.synthetic.high}};
  } else {
    data["csv"] = {{"path", cfg.csv.path},
                   {"feature_columns", cfg.csv.feature_columns},
                   {"target_column", cfg.csv.target_column},
                   {"header", cfg.csv.header},
                   {"drop_bad_rows", cfg.csv.drop_bad_rows}};
  }
  j["data"] = data;
  j["precision"] = precision_name(cfg.precision);
  j["sizes"] = cfg.sizes;
  j["solver"] = solver_name(cfg.solver);
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["m"] = cfg.m;
  j["alphas"] = cfg.effective_alphas();
  j["alpha_counts"] = cfg.alpha_counts;
  j["rho"] = cfg.rho;
  j["k"] = cfg.k;
  j["k1"] = cfg.k1;
  j["k2"] = cfg.k2;
  if (cfg.feature_dim() > 0) {
    const CoresetParams eff = cfg.effective_params();
    j["k_effective"] = eff.k;
    j["k1_effective"] = eff.k1;
    j["k2_effective"] = eff.k2;
  }
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["histogram_bin_edges"] = cfg.effective_bin_edges();
  return j;
}

inline BenchConfig config_from_json(const json& j, BenchConfig cfg = {}) {
  if (j.contains("data")) {
    const auto& data = j.at("data");
    const std::string kind = data.value("kind", "synthetic");
    cfg.data_kind = kind == "csv" ? DatasetKind::Csv : DatasetKind::Synthetic;
    if (data.contains("synthetic")) {
      const auto& s = data.at("synthetic");
      cfg.synthetic.n = s.value("n", cfg.synthetic.n);
      cfg.synthetic.d = s.value("d", cfg.synthetic.d);
      cfg.synthetic.low = s.value("low", cfg.synthetic.low);
      cfg.synthetic.high = s.value("high", cfg.synthetic.high);
    }
    if (data.contains("csv")) {
      const auto& c = data.at("csv");
      cfg.csv.path = c.value("path", cfg.csv.path);
      cfg.csv.feature_columns = c.value("feature_columns", cfg.csv.feature_columns);
      cfg.csv.target_column = c.value("target_column", cfg.csv.target_column);
      cfg.csv.header = c.value("header", cfg.csv.header);
      cfg.csv.drop_bad_rows = c.value("drop_bad_rows", cfg.csv.drop_bad_rows);
    }
  }
  if (j.contains("precision"))
    cfg.precision =
        j.at("precision").get<std::string>() == "f32" ? Precision::F32 : Precision::F64;
  cfg.sizes = j.value("sizes", cfg.sizes);
  if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver").get<std::string>());
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : j.at("methods"))
      cfg.methods.push_back(parse_method(name.get<std::string>()));
  }
  cfg.m = j.value("m", cfg.m);
  cfg.alphas = j.value("alphas", cfg.alphas);
  cfg.alpha_counts = j.value("alpha_counts", cfg.alpha_counts);
  cfg.rho = j.value("rho", cfg.rho);
  cfg.k = j.value("k", cfg.k);
  cfg.k1 = j.value("k1", cfg.k1);
  cfg.k2 = j.value("k2", cfg.k2);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.histogram_bin_edges = j.value("histogram_bin_edges", cfg.histogram_bin_edges);
  return cfg;
}

inline std::string environment_note() {
  std::string note = "caracore bench";
#if defined(__clang__)
  note += ", clang " + std::to_string(__clang_major__);
#elif defined(__GNUC__)
  note += ", gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__);
#endif
  note += ", eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." +
          std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION);
  return note;
}

namespace detail {

inline double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t h = values.size() / 2;
  return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

inline double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class Scalar>
struct BenchData {
  Matrix<Scalar> A;
  Vector<Scalar> b;
};

// Dataset instance for one sweep point: synthetic data is regenerated with
// the per-trial seed; CSV data is optionally truncated to the requested size.
inline Dataset<double> load_sweep_data(const BenchConfig& cfg, Index size,
                                       std::uint64_t seed) {
  DatasetSpec spec;
  spec.kind = cfg.data_kind;
  spec.csv = cfg.csv;
  spec.synthetic = cfg.synthetic;
  spec.synthetic.seed = seed;
  if (cfg.data_kind == DatasetKind::Synthetic && size > 0) spec.synthetic.n = size;
  Dataset<double> data = load<double>(spec);
  if (cfg.data_kind == DatasetKind::Csv && size > 0 && size < data.A.rows()) {
    data.A = Matrix<double>(data.A.topRows(size));
    data.b = Vector<double>(data.b.head(size));
  }
  return data;
}

template <class Scalar>
CoresetParams bench_coreset_params(const BenchConfig& cfg, Index d) {
  CoresetParams p = default_lms_params(d);
  if (cfg.k > 0) p.k = cfg.k;
  if (cfg.k1 > 0) p.k1 = cfg.k1;
  if (cfg.k2 > 0) p.k2 = cfg.k2;
  return p;
}

template <class Scalar>
RegularizationGrid<Scalar> bench_grid(const BenchConfig& cfg,
                                      const std::vector<double>& alphas) {
  RegularizationGrid<Scalar> grid;
  grid.alphas.reserve(alphas.size());
  for (double a : alphas) grid.alphas.push_back(static_cast<Scalar>(a));
  grid.rho = static_cast<Scalar>(cfg.rho);
  grid.folds = cfg.m;
  return grid;
}

inline void fill_errors(TrialRecord& rec, const VectorD& x, const VectorD& reference) {
  const VectorD diff = x - reference;
  rec.err_max_abs = diff.cwiseAbs().maxCoeff();
  rec.err_l2 = diff.norm();
}

// Runs one method on one dataset instance, timing the whole pipeline (any
// compression plus the solve). Method failures land in the record's note.
template <class Scalar>
TrialRecord run_single(Method method, const BenchData<Scalar>& data,
                       const VectorD& reference, const BenchConfig& cfg,
                       const std::vector<double>& alphas) {
  TrialRecord rec;
  rec.method = method_name(method);
  rec.n = data.A.rows();
  rec.d = data.A.cols();
  rec.alpha_count = cfg.solver == SolverKind::Linear ? 0
                                                     : static_cast<Index>(alphas.size());
  const CoresetParams params = bench_coreset_params<Scalar>(cfg, data.A.cols());

  const double t0 = now_seconds();
  try {
    if (cfg.solver == SolverKind::Linear) {
      Vector<Scalar> x;
      switch (method) {
        case Method::Plain:
          x = solve_linreg(data.A, data.b);
          break;
        case Method::CoresetExact:
        case Method::CoresetPP: {
          const double b0 = now_seconds();
          const FoldedCoreset<Scalar> coreset =
              method == Method::CoresetExact
                  ? lms_coreset(data.A, data.b, cfg.m, params.k)
                  : lms_coreset_pp(data.A, data.b, cfg.m, params.k1, params.k2);
          rec.coreset_build_seconds = now_seconds() - b0;
          rec.coreset_builds = cfg.m;
          x = solve_linreg(coreset.C, coreset.y);
          break;
        }
        case Method::SketchCholesky: {
          const double b0 = now_seconds();
          const auto factor = sketch_cholesky(data.A, data.b);
          rec.coreset_build_seconds = now_seconds() - b0;
          if (!factor) {
            rec.cholesky_failures = 1;
            rec.note = "not-positive-definite";
            rec.wall_time_seconds = now_seconds() - t0;
            return rec;
          }
          const Matrix<Scalar> rows = factor->transpose();
          x = solve_linreg(Matrix<Scalar>(rows.leftCols(rec.d)),
                           Vector<Scalar>(rows.col(rec.d)));
          break;
        }
        case Method::SketchSvd: {
          const double b0 = now_seconds();
          const Matrix<Scalar> rows = sketch_svd(data.A, data.b);
          rec.coreset_build_seconds = now_seconds() - b0;
          x = solve_linreg(Matrix<Scalar>(rows.leftCols(rec.d)),
                           Vector<Scalar>(rows.col(rec.d)));
          break;
        }
        case Method::SketchInverse:
          x = sketch_inverse(data.A, data.b);
          break;
      }
      rec.wall_time_seconds = now_seconds() - t0;
      fill_errors(rec, x.template cast<double>(), reference);
    } else {
      const RegularizationGrid<Scalar> grid = bench_grid<Scalar>(cfg, alphas);
      CvResult<Scalar> result;
      switch (method) {
        case Method::Plain:
          result = unboosted_cv(data.A, data.b, grid, cfg.solver);
          break;
        case Method::CoresetExact:
          result = boosted_cv(data.A, data.b, grid, cfg.solver, CoresetVariant::Exact,
                              params);
          break;
        case Method::CoresetPP:
          result = boosted_cv(data.A, data.b, grid, cfg.solver,
                              CoresetVariant::SparsePlusPlus, params);
          break;
        default:
          throw std::invalid_argument(
              "sketch methods apply to the linear solver only");
      }
      rec.wall_time_seconds = now_seconds() - t0;
      rec.coreset_build_seconds = result.coreset_build_seconds;
      rec.coreset_builds = result.coreset_builds;
      fill_errors(rec, result.coefficients.template cast<double>(), reference);
    }
  } catch (const Error& e) {
    rec.wall_time_seconds = now_seconds() - t0;
    rec.note = e.what();
  }
  return rec;
}

// F64 full-data reference for the configured solver protocol.
inline VectorD reference_solution(const Dataset<double>& data, const BenchConfig& cfg,
                                  const std::vector<double>& alphas) {
  if (cfg.solver == SolverKind::Linear) return solve_linreg(data.A, data.b);
  const RegularizationGrid<double> grid = bench_grid<double>(cfg, alphas);
  return unboosted_cv(data.A, data.b, grid, cfg.solver).coefficients;
}

template <class Scalar>
BenchData<Scalar> cast_data(const Dataset<double>& data) {
  return BenchData<Scalar>{data.A.cast<Scalar>(), data.b.cast<Scalar>()};
}

inline void append_summaries(BenchmarkReport& report) {
  std::map<std::pair<std::string, Index>, std::vector<const TrialRecord*>> groups;
  for (const auto& r : report.records)
    groups[{r.method, r.n}].push_back(&r);
  for (const auto& [key, rs] : groups) {
    SummaryRecord s;
    s.method = key.first;
    s.n = key.second;
    std::vector<double> walls;
    std::vector<double> errs;
    for (const auto* r : rs) {
      walls.push_back(r->wall_time_seconds);
      if (r->err_max_abs) errs.push_back(*r->err_max_abs);
      s.cholesky_failures += r->cholesky_failures;
    }
    s.median_wall_time_seconds = median(walls);
    if (!errs.empty()) s.median_err_max_abs = median(errs);
    s.records = static_cast<Index>(rs.size());
    report.summaries.push_back(s);
  }
}

template <class Scalar>
void sweep_one_size(const BenchConfig& cfg, Index size,
                    const std::vector<double>& alphas, BenchmarkReport& report) {
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
    const Dataset<double> data64 = load_sweep_data(cfg, size, seed);
    const VectorD reference = reference_solution(data64, cfg, alphas);
    const BenchData<Scalar> data = cast_data<Scalar>(data64);
    for (Method method : cfg.methods) {
      TrialRecord rec = run_single<Scalar>(method, data, reference, cfg, alphas);
      rec.trial = trial;
      rec.seed = seed;
      report.records.push_back(std::move(rec));
    }
  }
}

}  // namespace detail

/// Size sweep: every method of the configured solver protocol runs on every
/// requested row count, with per-trial seeds, wall time and solution error
/// against an f64 full-data reference; medians land in the summaries.
inline BenchmarkReport run_size_sweep(const BenchConfig& cfg) {
  if (cfg.methods.empty()) throw std::invalid_argument("run_size_sweep: no methods");
  if (cfg.trials < 1) throw std::invalid_argument("run_size_sweep: trials >= 1");
  if (cfg.solver != SolverKind::Linear)
    for (Method m : cfg.methods)
      if (m == Method::SketchCholesky || m == Method::SketchSvd ||
          m == Method::SketchInverse)
        throw std::invalid_argument(
            "run_size_sweep: sketch methods apply to the linear solver only");

  BenchmarkReport report;
  report.config = to_json(cfg);
  report.config["command"] = "sweep";
  report.environment = environment_note();
  const std::vector<double> alphas = cfg.effective_alphas();

  std::vector<Index> sizes = cfg.sizes;
  if (sizes.empty())
    sizes.push_back(cfg.data_kind == DatasetKind::Synthetic ? cfg.synthetic.n : 0);

  for (Index size : sizes) {
    if (cfg.precision == Precision::F64)
      detail::sweep_one_size<double>(cfg, size, alphas, report);
    else
      detail::sweep_one_size<float>(cfg, size, alphas, report);
  }
  detail::append_summaries(report);
  return report;
}

/// Grid-size sweep: the cross-validated methods run with increasing numbers
/// of regularization candidates at a fixed data size, exposing that the
/// per-fold coreset is built once regardless of the grid size.
inline BenchmarkReport run_cv_sweep(const BenchConfig& cfg) {
  if (cfg.solver == SolverKind::Linear)
    throw std::invalid_argument("run_cv_sweep: needs a cross-validated solver");
  for (Method m : cfg.methods)
    if (m != Method::Plain && m != Method::CoresetExact && m != Method::CoresetPP)
      throw std::invalid_argument("run_cv_sweep: methods must be plain/coreset/coreset-pp");
  if (cfg.alpha_counts.empty())
    throw std::invalid_argument("run_cv_sweep: no alpha counts");

  BenchmarkReport report;
  report.config = to_json(cfg);
  report.config["command"] = "cv-sweep";
  report.environment = environment_note();

  const std::vector<double> master = cfg.effective_alphas();
  const double lo = master.front();
  const double hi = master.back();
  for (Index count : cfg.alpha_counts) {
    if (count < 1) throw std::invalid_argument("run_cv_sweep: alpha counts >= 1");
    std::vector<double> alphas(static_cast<size_t>(count));
    for (Index i = 0; i < count; ++i)
      alphas[static_cast<size_t>(i)] =
          count == 1 ? lo
                     : std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) *
                                                           static_cast<double>(i) /
                                                           static_cast<double>(count - 1));
    BenchConfig sub = cfg;
    sub.alphas = alphas;
    if (cfg.precision == Precision::F64)
      detail::sweep_one_size<double>(sub, 0, alphas, report);
    else
      detail::sweep_one_size<float>(sub, 0, alphas, report);
  }
  detail::append_summaries(report);
  return report;
}

/// Accuracy histogram: repeated trials of linear regression in the configured
/// precision, per-method max-abs error against the f64 reference, binned on
/// the configured log-spaced edges.
inline BenchmarkReport run_accuracy_histogram(const BenchConfig& cfg) {
  if (cfg.methods.empty())
    throw std::invalid_argument("run_accuracy_histogram: no methods");

  BenchConfig sub = cfg;
  sub.solver = SolverKind::Linear;

  BenchmarkReport report;
  report.config = to_json(sub);
  report.config["command"] = "histogram";
  report.environment = environment_note();
  const std::vector<double> alphas = sub.effective_alphas();
  const std::vector<double> edges = sub.effective_bin_edges();
  if (edges.size() < 2)
    throw std::invalid_argument("run_accuracy_histogram: need at least two bin edges");

  if (sub.precision == Precision::F64)
    detail::sweep_one_size<double>(sub, 0, alphas, report);
  else
    detail::sweep_one_size<float>(sub, 0, alphas, report);

  std::map<std::string, std::vector<double>> method_errors;
  for (const auto& r : report.records)
    if (r.err_max_abs) method_errors[r.method].push_back(*r.err_max_abs);

  for (Method m : sub.methods) {
    HistogramRecord h;
    h.method = method_name(m);
    h.bin_edges = edges;
    h.counts.assign(edges.size() - 1, 0);
    for (double err : method_errors[h.method]) {
      size_t bin = 0;
      while (bin + 2 < edges.size() && err >= edges[bin + 1]) ++bin;
      ++h.counts[bin];
    }
    report.histograms.push_back(std::move(h));
  }
  detail::append_summaries(report);

  const auto coreset = method_errors.find(method_name(Method::CoresetExact));
  const auto inverse = method_errors.find(method_name(Method::SketchInverse));
  if (coreset != method_errors.end() && inverse != method_errors.end() &&
      !coreset->second.empty() && !inverse->second.empty()) {
    const double mc = detail::median(coreset->second);
    const double mi = detail::median(inverse->second);
    report.analysis["median_error_coreset"] = mc;
    report.analysis["median_error_sketch_inverse"] = mi;
    report.analysis["median_error_ratio"] = mi > 0 ? mc / mi : 0.0;
  }
  return report;
}

}  // namespace caracore
