#include "slt/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "slt/error.hpp"
#include "slt/random.hpp"
#include "slt/serialize.hpp"

namespace slt {

namespace {

constexpr double kReferenceRates[3] = {0.1375, 0.3239, 0.0860};

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int parse_int_field(const std::string& text, std::size_t line_no) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ParseError("not an integer: '" + text + "'", line_no);
  }
  if (used != text.size()) throw ParseError("not an integer: '" + text + "'", line_no);
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return in;
}

}  // namespace

WisconsinData parse_wisconsin(std::istream& in) {
  WisconsinData out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    ++out.raw_records;
    auto fields = split_fields(line, ',');
    if (fields.size() != 11) {
      throw ParseError(fmt::format("expected 11 fields, got {}", fields.size()), line_no);
    }
    for (auto& f : fields) f = trim(f);
    if (std::any_of(fields.begin(), fields.end(),
                    [](const std::string& f) { return f == "?"; })) {
      ++out.dropped_missing;
      continue;
    }
    parse_int_field(fields[0], line_no);
    LabeledSample s;
    s.x.reserve(9);
    for (std::size_t j = 1; j <= 9; ++j) {
      const int v = parse_int_field(fields[j], line_no);
      if (v < 1 || v > 10) {
        throw ParseError(fmt::format("feature {} out of range 1..10: {}", j, v), line_no);
      }
      s.x.push_back(v);
    }
    const int code = parse_int_field(fields[10], line_no);
    if (code != 2 && code != 4) {
      throw ParseError(fmt::format("class code must be 2 or 4, got {}", code), line_no);
    }
    s.y = code == 4 ? 1.0 : -1.0;
    out.data.add(std::move(s));
  }
  if (out.data.empty()) throw InvalidInput("no usable records in the input");
  return out;
}

WisconsinData load_wisconsin(const std::string& path) {
  auto in = open_input(path);
  return parse_wisconsin(in);
}

Dataset read_csv_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("missing header", line_no);
  const auto header = split_fields(trim(line), ',');
  if (header.size() < 2 || trim(header.back()) != "y") {
    throw ParseError("header must be x1,...,xd,y", line_no);
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (trim(header[j]) != "x" + std::to_string(j + 1)) {
      throw ParseError("header must be x1,...,xd,y", line_no);
    }
  }
  Dataset data(d);
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != d + 1) {
      throw ParseError(fmt::format("expected {} fields, got {}", d + 1, fields.size()),
                       line_no);
    }
    LabeledSample s;
    try {
      for (std::size_t j = 0; j < d; ++j) s.x.push_back(parse_real(trim(fields[j])));
      s.y = parse_real(trim(fields[d]));
      data.add(std::move(s));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return data;
}

Dataset load_csv_dataset(const std::string& path) {
  auto in = open_input(path);
  return read_csv_dataset(in);
}

void write_csv_dataset(std::ostream& out, const Dataset& data) {
  for (std::size_t j = 0; j < data.dim(); ++j) out << 'x' << j + 1 << ',';
  out << "y\n";
  for (const auto& s : data) {
    for (double v : s.x) out << format_real(v) << ',';
    out << format_real(s.y) << '\n';
  }
}

Split split(const Dataset& data, std::size_t n_train, std::uint64_t seed) {
  if (n_train < 1) throw InvalidInput("training size must be at least 1");
  if (n_train >= data.size()) {
    throw InvalidInput(fmt::format("need more than {} records to split, have {}",
                                   n_train, data.size()));
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(order, rng);
  const std::size_t n_test = std::min(n_train, data.size() - n_train);
  const std::span<const std::size_t> all(order);
  return Split{data.subset(all.subspan(0, n_train)),
               data.subset(all.subspan(n_train, n_test)),
               data.size() - n_train - n_test};
}

void ExperimentConfig::validate() const {
  solver.validate();
  if (n_train < 1) throw InvalidInput("n_train must be at least 1");
  if (feature_count < 1) throw InvalidInput("feature_count must be at least 1");
  if (repetitions < 1) throw InvalidInput("repetitions must be at least 1");
  if (folds < 2) throw InvalidInput("folds must be at least 2");
  if (poly_degree < 1) throw InvalidInput("poly_degree must be at least 1");
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

TableReport reproduce_table(const WisconsinData& wisconsin, const ExperimentConfig& config) {
  config.validate();
  const Dataset& data = wisconsin.data;
  if (config.n_train >= data.size()) {
    throw InvalidInput(fmt::format("n_train {} must be below the {} usable records",
                                   config.n_train, data.size()));
  }
  if (config.feature_count > data.dim()) {
    throw InvalidInput("feature_count exceeds the number of features");
  }
  TableReport report;
  report.raw_records = wisconsin.raw_records;
  report.dropped_missing = wisconsin.dropped_missing;
  report.usable_records = data.size();
  report.dim = data.dim();

  for (std::size_t r = 0; r < config.repetitions; ++r) {
    TableRun run;
    run.seed = derive_seed(config.seed, r);
    const Split parts = split(data, config.n_train, run.seed);
    report.train_size = parts.train.size();
    report.test_size = parts.test.size();
    report.discarded = parts.discarded;

    SolverConfig solver = config.solver;
    solver.seed = run.seed;
    const TrainedModel all = train_linear(parts.train, config.loss, solver);
    run.linear_all = confusion(parts.test, all.separator);

    run.selected = select_features(parts.train, config.feature_count, config.loss,
                                   solver, config.folds);
    const Dataset train_reduced = parts.train.project(run.selected);
    const Dataset test_reduced = parts.test.project(run.selected);
    const TrainedModel lin = train_linear(train_reduced, config.loss, solver);
    run.linear_reduced = confusion(test_reduced, lin.separator);
    const TrainedModel poly =
        train_polynomial(train_reduced, config.poly_degree, config.loss, solver);
    run.poly_reduced = confusion(test_reduced, poly.separator);
    report.runs.push_back(std::move(run));
  }

  auto median_of = [&](ConfusionCounts TableRun::*member) {
    std::vector<double> rates;
    for (const auto& run : report.runs) rates.push_back((run.*member).error_rate());
    return median(rates);
  };
  report.median_linear_all = median_of(&TableRun::linear_all);
  report.median_linear_reduced = median_of(&TableRun::linear_reduced);
  report.median_poly_reduced = median_of(&TableRun::poly_reduced);
  report.ordering_holds = report.median_poly_reduced < report.median_linear_all &&
                          report.median_linear_all < report.median_linear_reduced;
  return report;
}

TableReport reproduce_table(const ExperimentConfig& config) {
  return reproduce_table(load_wisconsin(config.dataset_path), config);
}

void print_table(std::ostream& out, const TableReport& report,
                 const ExperimentConfig& config) {
  out << fmt::format(
      "records: {} raw, {} dropped for missing values, {} usable\n"
      "split: {} train, {} test, {} discarded (reference split: 349 train, 349 test "
      "of 699)\n",
      report.raw_records, report.dropped_missing, report.usable_records,
      report.train_size, report.test_size, report.discarded);

  const std::string names[3] = {
      fmt::format("{}-variable linear", report.dim),
      fmt::format("{}-variable linear", config.feature_count),
      fmt::format("{}-variable degree-{}", config.feature_count, config.poly_degree)};
  const auto row = [&](const std::string& name, const ConfusionCounts& c) {
    out << fmt::format("  {:<24} {:>4} {:>4} {:>4} {:>4} {:>4} {:>8.4f}\n", name, c.fp,
                       c.fn, c.tp, c.tn, c.errors(), c.error_rate());
  };
  for (const auto& run : report.runs) {
    out << fmt::format("run seed={} selected=", run.seed);
    for (std::size_t i = 0; i < run.selected.size(); ++i) {
      out << (i ? "," : "") << run.selected[i] + 1;
    }
    out << fmt::format("\n  {:<24} {:>4} {:>4} {:>4} {:>4} {:>4} {:>8}\n", "Machine", "FP",
                       "FN", "TP", "TN", "ERR", "%ERR");
    row(names[0], run.linear_all);
    row(names[1], run.linear_reduced);
    row(names[2], run.poly_reduced);
  }
  const double medians[3] = {report.median_linear_all, report.median_linear_reduced,
                             report.median_poly_reduced};
  out << fmt::format("medians over {} runs\n  {:<24} {:>8} {:>10}\n", report.runs.size(),
                     "Machine", "%ERR", "reference");
  for (int i = 0; i < 3; ++i) {
    out << fmt::format("  {:<24} {:>8.4f} {:>10.4f}\n", names[i], medians[i],
                       kReferenceRates[i]);
  }
  out << fmt::format("ordering {} < {} < {}: {}\n", names[2], names[0], names[1],
                     report.ordering_holds ? "holds" : "does not hold");
}

}  // namespace slt
