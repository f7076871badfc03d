#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "caracore/errors.hpp"
#include "caracore/matrix.hpp"

namespace caracore {

enum class DatasetKind { Synthetic, Csv };

struct SyntheticSpec {
  Index n = 0;
  Index d = 0;
  double low = 0.0;
  double high = 1.0;
  std::uint64_t seed = 0;
};

struct CsvSpec {
  std::string path;
  std::vector<Index> feature_columns;  // 0-based
  Index target_column = 0;
  bool header = false;
  bool drop_bad_rows = false;  // true: count and skip unparsable rows
};

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Synthetic;
  SyntheticSpec synthetic;
  CsvSpec csv;
  Precision precision = Precision::F64;

  void validate() const {
    if (kind == DatasetKind::Synthetic) {
      if (synthetic.n < 1 || synthetic.d < 1)
        throw std::invalid_argument("DatasetSpec: n >= 1 and d >= 1 required");
      if (!(synthetic.low < synthetic.high))
        throw std::invalid_argument("DatasetSpec: low < high required");
    } else {
      if (csv.feature_columns.empty())
        throw std::invalid_argument("DatasetSpec: at least one feature column");
      std::vector<Index> cols = csv.feature_columns;
      std::sort(cols.begin(), cols.end());
      if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
        throw std::invalid_argument("DatasetSpec: feature columns must be distinct");
      if (std::find(cols.begin(), cols.end(), csv.target_column) != cols.end())
        throw std::invalid_argument("DatasetSpec: target column must differ from features");
      for (Index c : cols)
        if (c < 0) throw std::invalid_argument("DatasetSpec: column indices are 0-based");
    }
  }
};

template <class Scalar>
struct Dataset {
  Matrix<Scalar> A;
  Vector<Scalar> b;
  Index dropped_rows = 0;
};

/// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 draw.
/// Fixing the mapping (rather than using a distribution object) keeps
/// generated data identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline bool parse_cell(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline void split_line(const std::string& line, std::vector<std::string_view>& cells) {
  cells.clear();
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.emplace_back(line.data() + start, line.size() - start);
      return;
    }
    cells.emplace_back(line.data() + start, comma - start);
    start = comma + 1;
  }
}

template <class Scalar>
Dataset<Scalar> generate_synthetic(const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const double span = spec.high - spec.low;
  MatrixD a(spec.n, spec.d);
  for (Index i = 0; i < spec.n; ++i)
    for (Index j = 0; j < spec.d; ++j) a(i, j) = spec.low + uniform01(rng) * span;
  VectorD b(spec.n);
  for (Index i = 0; i < spec.n; ++i) b(i) = spec.low + uniform01(rng) * span;
  return Dataset<Scalar>{a.cast<Scalar>(), b.cast<Scalar>(), 0};
}

template <class Scalar>
Dataset<Scalar> load_csv(const CsvSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw Error("load: cannot open " + spec.path);

  Index needed = spec.target_column;
  for (Index c : spec.feature_columns) needed = std::max(needed, c);

  std::vector<double> features;
  std::vector<double> targets;
  Index dropped = 0;
  std::string line;
  std::vector<std::string_view> cells;
  long long lineno = 0;
  bool skip_header = spec.header;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (line.empty()) continue;
    split_line(line, cells);

    // A row that is too short lacks the requested column entirely; a row with
    // an unparsable cell is a parse failure at that cell.
    if (static_cast<Index>(cells.size()) <= needed) {
      if (spec.drop_bad_rows) {
        ++dropped;
        continue;
      }
      throw MissingColumn("load: line " + std::to_string(lineno) + " has " +
                          std::to_string(cells.size()) + " columns, need column " +
                          std::to_string(needed));
    }
    bool ok = true;
    long long bad_column = -1;
    double target = 0;
    std::vector<double> row(spec.feature_columns.size());
    for (size_t f = 0; f < spec.feature_columns.size() && ok; ++f) {
      const Index c = spec.feature_columns[f];
      if (!parse_cell(cells[static_cast<size_t>(c)], row[f])) {
        ok = false;
        bad_column = c;
      }
    }
    if (ok && !parse_cell(cells[static_cast<size_t>(spec.target_column)], target)) {
      ok = false;
      bad_column = spec.target_column;
    }
    if (!ok) {
      if (spec.drop_bad_rows) {
        ++dropped;
        continue;
      }
      throw ParseError("load: unparsable cell at line " + std::to_string(lineno) +
                           ", column " + std::to_string(bad_column),
                       lineno, bad_column);
    }
    features.insert(features.end(), row.begin(), row.end());
    targets.push_back(target);
  }
  const auto rows = static_cast<Index>(targets.size());
  if (rows < 1) throw EmptyInput("load: no usable rows in " + spec.path);

  const auto d = static_cast<Index>(spec.feature_columns.size());
  MatrixD a(rows, d);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = features[static_cast<size_t>(i * d + j)];
  VectorD b = Eigen::Map<const VectorD>(targets.data(), rows);
  return Dataset<Scalar>{a.cast<Scalar>(), b.cast<Scalar>(), dropped};
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Loads the dataset. Synthetic data is generated in double from the seeded
/// generator and then cast to the requested precision; CSV cells are parsed
/// as doubles and cast likewise.
template <class Scalar>
Dataset<Scalar> load(const DatasetSpec& spec) {
  spec.validate();
  if (spec.kind == DatasetKind::Synthetic)
    return detail::generate_synthetic<Scalar>(spec.synthetic);
  return detail::load_csv<Scalar>(spec.csv);
}

/// Writes features-then-target rows with 17 significant digits, so a reload
/// reproduces the doubles bitwise.
template <class Scalar>
void write_csv(const std::string& path, const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  if (a.rows() != b.size()) throw DimensionMismatch("write_csv: rows of A must match b");
  std::ofstream out(path);
  if (!out) throw Error("write_csv: cannot open " + path);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out << detail::format_double(static_cast<double>(a(i, j)));
      out << ',';
    }
    out << detail::format_double(static_cast<double>(b(i))) << '\n';
  }
}

}  // namespace caracore
