#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "randsvm/dataset.hpp"
#include "randsvm/kernels.hpp"

namespace randsvm {

enum class Task { classify, regress };

struct SvmModel {
  Task task = Task::classify;
  double epsilon_tube = 0.0;  // regression only
  KernelSpec kernel;
  double C = 1.0;
  std::vector<std::size_t> sv_indices;  // indices into the training dataset
  std::vector<SparseVector> sv_vectors; // copies, so predict is standalone
  std::vector<double> dual_coef;        // classify: alpha_i*y_i; regress: a+ - a-
  std::vector<double> sv_norm2;         // ||sv||^2, derived, not serialized
  double bias = 0.0;

  std::size_t n_sv() const { return sv_indices.size(); }
};

struct SolveOutcome {
  SvmModel model;
  double dual_objective = 0.0;  // maximization form
  std::size_t iterations = 0;
  bool converged = false;
};

// Thrown when a classification working set contains a single class.
struct DegenerateModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  double kkt_tol = 1e-3;
  std::size_t max_iters = 0;          // 0 -> 10^4 * |working|
  std::size_t cache_rows = 0;         // 0 -> sized from a 256 MB budget
};

SolveOutcome solve_csvc(const SparseDataset& ds,
                        const std::vector<std::size_t>& working,
                        const KernelSpec& kernel, double C,
                        const std::optional<SvmModel>& warm_start,
                        const SolveOptions& opts = {});

SolveOutcome solve_svr(const SparseDataset& ds,
                       const std::vector<std::size_t>& working,
                       const KernelSpec& kernel, double C, double epsilon_tube,
                       const std::optional<SvmModel>& warm_start,
                       const SolveOptions& opts = {});

// f(x) = sum_i dual_coef_i k(sv_i, x) + bias
double predict(const SvmModel& model, const SparseVector& x);

// Repeated-prediction helper: densifies the SVs up front (small dims only)
// so scans avoid per-pair sparse merges. Values equal predict() exactly.
class Predictor {
 public:
  explicit Predictor(const SvmModel& model);
  double operator()(const SparseVector& x) const;

 private:
  const SvmModel& model_;
  std::size_t dim_ = 0;        // 0 -> plain predict fallback
  std::vector<double> dense_;  // n_sv rows of dim_ entries
};

// KKT test for a zero-coefficient point: classification y*f < 1 - tol,
// regression |f - y| > eps + tol.
bool violates(const SvmModel& model, const SparseDataset& ds, std::size_t i,
              double tol);

void save_model(const SvmModel& model, const std::string& path);
SvmModel load_model(const std::string& path);

}  // namespace randsvm
