#include "slt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "slt/error.hpp"
#include "slt/serialize.hpp"

namespace slt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd to_square(const std::vector<double>& v, std::size_t d, const char* key) {
  if (v.size() != d * d) {
    throw InvalidDistribution(
        fmt::format("{} needs {} entries for dimension {}, got {}", key, d * d, d, v.size()));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * d + c];
    }
  }
  return m;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (cfg.entries_.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    cfg.entries_[key] = Entry{value, line_no};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  return parse(in);
}

std::vector<std::string> ConfigFile::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void ConfigFile::set(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, 0};
}

std::string ConfigFile::get_string(const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

double ConfigFile::get_real(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  try {
    return parse_real(e->value);
  } catch (const InvalidInput& ex) {
    throw ParseError(key + ": " + ex.what(), e->line);
  }
}

std::uint64_t ConfigFile::get_uint(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!e->value.empty() && e->value[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(e->value, &used);
  } catch (const std::exception&) {
    throw ParseError(key + ": not a non-negative integer: '" + e->value + "'", e->line);
  }
  if (used != e->value.size()) {
    throw ParseError(key + ": not a non-negative integer: '" + e->value + "'", e->line);
  }
  return v;
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(e->value, &used);
  } catch (const std::exception&) {
    throw ParseError(key + ": not an integer: '" + e->value + "'", e->line);
  }
  if (used != e->value.size()) {
    throw ParseError(key + ": not an integer: '" + e->value + "'", e->line);
  }
  return v;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ParseError(key + ": expected true or false", e->line);
}

std::optional<std::vector<double>> ConfigFile::get_reals(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  std::string text = e->value;
  for (char& c : text) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream ss(text);
  std::vector<double> out;
  std::string token;
  while (ss >> token) {
    try {
      out.push_back(parse_real(token));
    } catch (const InvalidInput& ex) {
      throw ParseError(key + ": " + ex.what(), e->line);
    }
  }
  return out;
}

SolverConfig solver_from_config(const ConfigFile& cfg, SolverConfig base) {
  base.max_iterations = cfg.get_uint("solver.max_iterations", base.max_iterations);
  base.step_scale = cfg.get_real("solver.step_scale", base.step_scale);
  if (cfg.has("solver.l1_bound")) base.l1_bound = cfg.get_real("solver.l1_bound", 0.0);
  base.tolerance = cfg.get_real("solver.tolerance", base.tolerance);
  base.stall_checks = cfg.get_uint("solver.stall_checks", base.stall_checks);
  base.check_interval = cfg.get_uint("solver.check_interval", base.check_interval);
  base.dimension_cap = cfg.get_uint("solver.dimension_cap", base.dimension_cap);
  base.seed = cfg.get_uint("seed", base.seed);
  base.validate();
  return base;
}

LossSpec loss_from_config(const ConfigFile& cfg, const LossSpec& fallback) {
  if (!cfg.has("loss")) return fallback;
  const std::string name = cfg.get_string("loss", "");
  if (name == "hinge") return LossSpec::hinge();
  if (name == "squared") return LossSpec::squared();
  throw InvalidInput("loss must be 'hinge' or 'squared', got '" + name + "'");
}

GaussianPair pair_from_config(const ConfigFile& cfg) {
  const auto mean1 = cfg.get_reals("mean1").value_or(std::vector<double>{1.0});
  std::vector<double> mirrored = mean1;
  for (double& v : mirrored) v = -v;
  const auto mean2 = cfg.get_reals("mean2").value_or(mirrored);
  const std::size_t d = mean1.size();
  if (d == 0 || mean2.size() != d) {
    throw InvalidDistribution("mean1 and mean2 must be non-empty and of equal length");
  }
  std::vector<double> identity(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) identity[i * d + i] = 1.0;
  const auto cov1 = cfg.get_reals("cov1").value_or(identity);
  const auto cov2 = cfg.get_reals("cov2").value_or(cov1);
  const double beta1 = cfg.get_real("beta1", 0.5);
  const double pi1 = cfg.get_real("pi1", beta1);
  return GaussianPair(GaussianClass(to_vector(mean1), to_square(cov1, d, "cov1")),
                      GaussianClass(to_vector(mean2), to_square(cov2, d, "cov2")),
                      beta1, pi1);
}

ExperimentConfig experiment_from_config(const ConfigFile& cfg) {
  ExperimentConfig out;
  out.dataset_path = cfg.get_string("dataset", out.dataset_path);
  out.seed = cfg.get_uint("seed", out.seed);
  out.n_train = cfg.get_uint("n_train", out.n_train);
  out.feature_count = cfg.get_uint("feature_count", out.feature_count);
  out.repetitions = cfg.get_uint("repetitions", out.repetitions);
  out.folds = cfg.get_uint("folds", out.folds);
  out.poly_degree = cfg.get_int("degree", out.poly_degree);
  out.solver = solver_from_config(cfg, out.solver);
  out.loss = loss_from_config(cfg, out.loss);
  out.validate();
  return out;
}

}  // namespace slt
