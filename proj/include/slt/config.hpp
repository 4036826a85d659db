#pragma once

// Line-oriented "key = value" configuration with '#' comments, and builders
// that turn it into the library's configuration types.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slt/datasets.hpp"
#include "slt/gaussian.hpp"
#include "slt/model.hpp"
#include "slt/solver.hpp"

namespace slt {

class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma- or space-separated reals; nullopt when the key is absent.
  std::optional<std::vector<double>> get_reals(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };
  const Entry* find(const std::string& key) const;

  std::map<std::string, Entry> entries_;
};

// solver.max_iterations, solver.step_scale, solver.l1_bound, solver.tolerance,
// solver.stall_checks, solver.check_interval, solver.dimension_cap, seed.
SolverConfig solver_from_config(const ConfigFile& cfg, SolverConfig base = {});

// loss = hinge | squared
LossSpec loss_from_config(const ConfigFile& cfg, const LossSpec& fallback);

// mean1, cov1 (row-major), mean2, cov2, beta1, pi1. Defaults: mean1 = 1,
// mean2 = -mean1, identity covariances, cov2 = cov1, equal weights, pi1 = beta1.
GaussianPair pair_from_config(const ConfigFile& cfg);

// dataset, seed, n_train, feature_count, repetitions, folds, degree, loss and
// the solver keys.
ExperimentConfig experiment_from_config(const ConfigFile& cfg);

}  // namespace slt
