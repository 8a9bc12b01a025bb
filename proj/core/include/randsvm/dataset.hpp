#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace randsvm {

// 1-based feature index, as in the libsvm text format.
struct Feature {
  int index = 0;
  double value = 0.0;
};

using SparseVector = std::vector<Feature>;

double dot(const SparseVector& a, const SparseVector& b);
double squared_norm(const SparseVector& v);
std::vector<double> to_dense(const SparseVector& v, int dim);
SparseVector from_dense(const std::vector<double>& v);

struct Example {
  SparseVector x;
  double y = 0.0;
};

struct SparseDataset {
  std::vector<Example> examples;
  int dim = 0;                  // max feature index seen
  std::vector<double> weights;  // per-example sampling weights, all > 0

  std::size_t n() const { return examples.size(); }
  double total_weight() const;

  // Checks index ordering, label finiteness and weight positivity;
  // throws std::invalid_argument on violation.
  void validate() const;
};

struct DatasetStats {
  std::size_t n = 0;
  int dim = 0;
  double max_norm = 0.0;                    // L = max_i ||x_i||
  std::map<int, std::size_t> class_counts;  // populated only for +-1 labels
};

SparseDataset load_libsvm(const std::string& path);
void save_libsvm(const SparseDataset& ds, const std::string& path);

// Synthetic dataset generators. Reproducible: same (n, seed) gives an
// identical dataset.
SparseDataset gen_twonorm(std::size_t n, std::uint64_t seed);
SparseDataset gen_ringnorm(std::size_t n, std::uint64_t seed);
SparseDataset gen_checkerboard(std::size_t n, std::uint64_t seed);
SparseDataset gen_friedman_regression(std::size_t n, std::uint64_t seed);

// Linearly separable instance: points inside the unit ball, labeled by a
// random hyperplane through the origin with a guaranteed band of half-width
// `margin` around it. Used by the projection lab and the test harness.
SparseDataset gen_separable(std::size_t n, int dim, double margin,
                            std::uint64_t seed);

DatasetStats stats(const SparseDataset& ds);

// Weighted sampling without replacement via exponential keys
// (key_i = -ln(U_i)/w_i, keep the r smallest). Returns r distinct indices
// in ascending order.
std::vector<std::size_t> weighted_sample(const std::vector<double>& weights,
                                         std::size_t r, std::uint64_t seed);
std::vector<std::size_t> weighted_sample(const SparseDataset& ds,
                                         std::size_t r, std::uint64_t seed);

}  // namespace randsvm
