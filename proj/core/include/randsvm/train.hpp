#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "randsvm/bounds.hpp"
#include "randsvm/smo.hpp"

namespace randsvm {

struct TrainConfig {
  SamplePlan plan;
  Task task = Task::classify;
  double epsilon_tube = 0.0;  // regression only
  double C = 1.0;
  KernelSpec kernel;
  double kkt_tol = 1e-3;
  double viol_tol = 1e-3;
  std::size_t max_outer_iters = 200;
  std::uint64_t seed = 0;
  std::size_t scan_parallelism = 1;
};

enum class Termination { no_violators, sv_budget_exceeded, iter_cap, degenerate };

const char* termination_name(Termination t);

struct IterationStat {
  std::size_t working_size = 0;
  std::size_t sv_count = 0;
  std::size_t violator_count = 0;
  double dual_objective = 0.0;
  double wall_millis = 0.0;
};

struct TrainReport {
  std::vector<IterationStat> iterations;
  Termination termination = Termination::iter_cap;
  SvmModel final_model;
  std::vector<std::size_t> final_working;  // working set of the last solve
  std::size_t weight_doublings = 0;        // Algorithm-1 counter
  std::size_t weight_rounds_skipped = 0;   // rounds where w(V) > w(D)/(3*Delta)
  std::size_t final_global_violators = 0;  // full rescan at termination
};

// writes `iter,working,sv,violators,objective,ms` rows
void write_report_csv(const TrainReport& report, const std::string& path);

// Violator-resampling outer loop: sample, solve, rescan, fold violators into
// the working set until none remain or the SV budget k is exceeded.
TrainReport train_violator_resampling(const SparseDataset& ds,
                                      const TrainConfig& cfg);

// Weight-doubling outer loop: sample r = 6*Delta^2 points by weight, solve,
// and double the weights of violators when their total weight is small.
TrainReport train_weighted_resampling(const SparseDataset& ds,
                                      const TrainConfig& cfg);

// Indices i not in `exclude` with violates(model, ds, i, tol), ascending.
std::vector<std::size_t> scan_violators(const SvmModel& model,
                                        const SparseDataset& ds,
                                        const std::vector<std::size_t>& exclude,
                                        double tol, std::size_t parallelism = 1);

}  // namespace randsvm
