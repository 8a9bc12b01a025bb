#pragma once

#include <cstddef>
#include <list>
#include <unordered_map>
#include <vector>

#include "randsvm/dataset.hpp"

namespace randsvm {

enum class KernelFamily { linear, gaussian };

struct KernelSpec {
  KernelFamily family = KernelFamily::linear;
  double sigma = 1.0;  // gaussian only, must be > 0

  void validate() const;
};

double k_eval(const KernelSpec& spec, const SparseVector& x,
              const SparseVector& z);

// Same, with precomputed squared norms (sparse-friendly gaussian path:
// ||x-z||^2 = ||x||^2 + ||z||^2 - 2 x.z).
double k_eval(const KernelSpec& spec, const SparseVector& x, double xnorm2,
              const SparseVector& z, double znorm2);

// Kernel value from a precomputed inner product and squared norms.
double k_from_dot(const KernelSpec& spec, double xz, double xnorm2,
                  double znorm2);

// LRU cache of kernel rows against a fixed working index list. Rows are
// keyed by dataset example index; cached values are bitwise identical to a
// fresh computation.
class KernelCache {
 public:
  KernelCache(const SparseDataset& ds, KernelSpec spec,
              std::vector<std::size_t> working, std::size_t capacity_rows);

  // row[j] = k(x_i, x_working[j])
  const std::vector<double>& row(std::size_t i);

  const std::vector<std::size_t>& working() const { return working_; }
  std::size_t size() const { return lru_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  const SparseDataset& ds_;
  KernelSpec spec_;
  std::vector<std::size_t> working_;
  std::vector<double> working_norm2_;
  std::size_t capacity_;
  std::size_t dense_dim_ = 0;   // 0 -> sparse evaluation path
  std::vector<double> dense_;   // row-major |working| x dense_dim_
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
};

std::vector<double> k_row(const KernelSpec& spec, const SparseDataset& ds,
                          std::size_t i, const std::vector<std::size_t>& working,
                          KernelCache& cache);

}  // namespace randsvm
