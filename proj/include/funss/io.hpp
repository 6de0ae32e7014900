#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "funss/dataset.hpp"

namespace funss {

// Binary dataset layout (all little-endian):
//   magic "FDS1" | version u16 | flags u16 (bit 0: centered) | N u64 | L u64
//   | grid points L x f64 | weights L x f64 | values N*L x f64 row-major.
void write_dataset_binary(const std::string& path, const FunctionalDataset& dataset);
FunctionalDataset read_dataset_binary(const std::string& path);

// CSV twin: header "t_0,...,t_{L-1}", one row of grid points, then N value
// rows. Weights are not stored; the reader rebuilds midpoint-cell weights
// from the points, which reproduces the uniform builder exactly.
void write_dataset_csv(const std::string& path, const FunctionalDataset& dataset);
FunctionalDataset read_dataset_csv(const std::string& path);

/// Dispatch on extension: ".csv" -> CSV, anything else -> binary.
void write_dataset(const std::string& path, const FunctionalDataset& dataset);
FunctionalDataset read_dataset(const std::string& path);

/// Single-column CSV with header "y".
void write_response_csv(const std::string& path, const ResponseVector& y);
ResponseVector read_response_csv(const std::string& path);

struct ResultRow {
  std::string method;
  long c = 0;
  long replicate = 0;
  std::string metric;
  double value = 0.0;
  std::string note;  // failure reason for NaN rows
};

/// Tidy benchmark output: one row per (method, C, replicate, metric), plus a
/// JSON sidecar carrying the run metadata.
struct ResultTable {
  std::vector<ResultRow> rows;
  std::uint64_t seed = 0;
  std::string design;
  std::string timestamp;
  std::string version;

  void append(std::string method, long c, long replicate, std::string metric, double value,
              std::string note = "");
};

/// Writes `path` (CSV) and `path + ".json"` (metadata). Throws DataError when
/// a (method, C, replicate, metric) key repeats.
void write_results(const std::string& path, const ResultTable& table);

/// Gnuplot-friendly companion: whitespace-separated median aggregates, one
/// row per C, one column per (method, metric) pair present in the table.
void write_gnuplot_medians(const std::string& path, const ResultTable& table);

struct PreprocessOptions {
  bool unit_norm = false;
  bool center = false;
};

/// Optional per-row unit-norm scaling followed by optional centering, in that
/// order. A zero row under unit_norm raises DataError naming the row.
FunctionalDataset preprocess_spectra(const FunctionalDataset& dataset, PreprocessOptions options);

}  // namespace funss
