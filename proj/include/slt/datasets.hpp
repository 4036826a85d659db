#pragma once

// Dataset ingestion (UCI Wisconsin format, generic CSV), seeded splitting,
// and the three-pipeline Wisconsin comparison.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slt/model.hpp"
#include "slt/solver.hpp"

namespace slt {

struct WisconsinData {
  Dataset data{9};
  std::size_t raw_records = 0;
  std::size_t dropped_missing = 0;  // rows with a '?' field
};

// Lines "id,f1,...,f9,class": 11 fields, features integers in 1..10, class 2
// (benign, y = -1) or 4 (malignant, y = +1). Rows with '?' are dropped and
// counted. Malformed lines throw ParseError with the line number.
WisconsinData parse_wisconsin(std::istream& in);
WisconsinData load_wisconsin(const std::string& path);

// Header "x1,...,xd,y", then one sample per line.
Dataset read_csv_dataset(std::istream& in);
Dataset load_csv_dataset(const std::string& path);
void write_csv_dataset(std::ostream& out, const Dataset& data);

struct Split {
  Dataset train;
  Dataset test;
  std::size_t discarded = 0;
};

// Seeded uniform shuffle; the first n_train go to train, the next
// min(n_train, remainder) to test, the rest are discarded.
Split split(const Dataset& data, std::size_t n_train, std::uint64_t seed);

struct ExperimentConfig {
  std::string dataset_path;
  std::uint64_t seed = 0;
  std::size_t n_train = 349;
  std::size_t feature_count = 3;
  std::size_t repetitions = 10;
  std::size_t folds = 5;
  int poly_degree = 2;
  SolverConfig solver;
  LossSpec loss = LossSpec::hinge();

  void validate() const;
};

struct TableRun {
  std::uint64_t seed = 0;
  std::vector<std::size_t> selected;  // 0-based feature indices, in choice order
  ConfusionCounts linear_all;
  ConfusionCounts linear_reduced;
  ConfusionCounts poly_reduced;
};

struct TableReport {
  std::vector<TableRun> runs;
  double median_linear_all = 0.0;
  double median_linear_reduced = 0.0;
  double median_poly_reduced = 0.0;
  // err(poly reduced) < err(linear all) < err(linear reduced), on medians.
  bool ordering_holds = false;
  std::size_t raw_records = 0;
  std::size_t dropped_missing = 0;
  std::size_t usable_records = 0;
  std::size_t dim = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t discarded = 0;
};

double median(std::vector<double> values);

// Per repetition r (seed derived from config.seed and r), one shared split
// feeds three pipelines: linear on all features, greedy selection down to
// feature_count followed by linear, and degree poly_degree on the selected
// features.
TableReport reproduce_table(const WisconsinData& data, const ExperimentConfig& config);
TableReport reproduce_table(const ExperimentConfig& config);

// Per-run rows and the medians in the layout
// "Machine  FP  FN  TP  TN  ERR  %ERR", with the reference error rates
// 0.1375 / 0.3239 / 0.0860 alongside.
void print_table(std::ostream& out, const TableReport& report,
                 const ExperimentConfig& config);

}  // namespace slt
