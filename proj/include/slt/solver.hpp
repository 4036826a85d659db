#pragma once

// Empirical risk minimization over affine functions, and over polynomials of
// degree k through explicit monomial lifting.
//
// The minimizer is full-batch projected subgradient descent with step
// step_scale / (c * L * sqrt(t)) and uniform iterate averaging, where L is the
// largest eigenvalue of the second-moment matrix of the design and c the loss
// curvature (2 for squared error, 1 for hinge). Unconstrained problems are
// solved in whitened coordinates (centered, decorrelated, unit variance) and
// mapped back, which leaves the hypothesis class unchanged.
// When an l1 bound M is set, iterates are projected onto
// {(w, b) : |w|_1 + |b| <= 2M} in the caller's coordinates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slt/model.hpp"

namespace slt {

struct SolverConfig {
  std::size_t max_iterations = 50'000;
  double step_scale = 1.0;
  // Radius parameter M; unset means the unconstrained class.
  std::optional<double> l1_bound;
  // The descent itself is deterministic and draws no randomness; the seed
  // drives cross-validation splits and is forwarded to derived runs.
  std::uint64_t seed = 0;
  // Relative objective stall threshold for early stopping.
  double tolerance = 1e-8;
  // Checks between which the objective must improve before declaring a stall.
  std::size_t stall_checks = 10;
  std::size_t check_interval = 50;
  std::size_t dimension_cap = 100'000;
  bool record_trace = false;

  void validate() const;
};

struct TrainedModel {
  Separator separator;
  double final_empirical_risk = 0.0;
  std::size_t iterations_used = 0;
  // False when the iteration budget ran out before the objective stalled.
  bool converged = false;
  // True for non-convex losses, where only descent (not optimality) is claimed.
  bool best_effort = false;
  std::vector<double> objective_trace;
};

TrainedModel train_linear(const Dataset& data, const LossSpec& loss,
                          const SolverConfig& config);

TrainedModel train_polynomial(const Dataset& data, int k, const LossSpec& loss,
                              const SolverConfig& config);

// Mean held-out loss of train_linear over a seeded folds-way split.
double cross_validated_risk(const Dataset& data, const LossSpec& loss,
                            const SolverConfig& config, std::size_t folds);

// Greedy forward selection: repeatedly adds the coordinate that minimizes the
// cross-validated risk; returns indices in the order they were chosen.
std::vector<std::size_t> select_features(const Dataset& data,
                                         std::size_t target_count,
                                         const LossSpec& loss,
                                         const SolverConfig& config,
                                         std::size_t folds = 5);

struct RefineConfig {
  std::size_t stages = 10;
  std::size_t steps_per_stage = 40;
  // First bandwidth as a fraction of the root-mean-square margin.
  double initial_bandwidth = 0.2;
  double bandwidth_shrink = 0.7;

  void validate() const;
};

// Local search on the empirical misclassification rate within the class of
// start (affine, or polynomials of start's degree). Descends the smoothed rate
// mean Phi(-y g(x) / h) over directions of g while h shrinks geometrically,
// and returns the visited separator with the fewest training errors (start
// itself included). Used where a surrogate-loss minimizer stands in for the
// best classifier of a class.
Separator refine_misclassification(const Dataset& data, const Separator& start,
                                   const RefineConfig& config = {});

// Euclidean projection onto {v : |v|_1 <= radius}.
void project_l1_ball(std::vector<double>& v, double radius);

// "risk=<v> iters=<n> converged=<bool>"
std::string summary_line(const TrainedModel& model);

}  // namespace slt
