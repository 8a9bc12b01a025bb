#include "randsvm/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace randsvm {

void KernelSpec::validate() const {
  if (family == KernelFamily::gaussian && !(sigma > 0.0))
    throw std::invalid_argument("kernel: gaussian sigma must be > 0");
}

double k_eval(const KernelSpec& spec, const SparseVector& x,
              const SparseVector& z) {
  return k_eval(spec, x, squared_norm(x), z, squared_norm(z));
}

double k_eval(const KernelSpec& spec, const SparseVector& x, double xnorm2,
              const SparseVector& z, double znorm2) {
  return k_from_dot(spec, dot(x, z), xnorm2, znorm2);
}

double k_from_dot(const KernelSpec& spec, double xz, double xnorm2,
                  double znorm2) {
  double v;
  if (spec.family == KernelFamily::linear) {
    v = xz;
  } else {
    double d2 = xnorm2 + znorm2 - 2.0 * xz;
    if (d2 < 0.0) d2 = 0.0;  // rounding on near-identical points
    v = std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
  }
  if (!std::isfinite(v)) throw std::runtime_error("kernel: nonfinite value");
  return v;
}

KernelCache::KernelCache(const SparseDataset& ds, KernelSpec spec,
                         std::vector<std::size_t> working,
                         std::size_t capacity_rows)
    : ds_(ds),
      spec_(spec),
      working_(std::move(working)),
      capacity_(capacity_rows < 1 ? 1 : capacity_rows) {
  working_norm2_.reserve(working_.size());
  for (std::size_t w : working_)
    working_norm2_.push_back(squared_norm(ds_.examples[w].x));

  // contiguous copies of the working vectors when the dimension is small;
  // dense dots add the same nonzero products in the same order, so the
  // resulting rows are identical to the sparse path
  const std::size_t d = ds_.dim > 0 ? static_cast<std::size_t>(ds_.dim) : 0;
  if (d > 0 && d <= 1024 && working_.size() * d <= (64u << 20) / sizeof(double)) {
    dense_dim_ = d;
    dense_.assign(working_.size() * d, 0.0);
    for (std::size_t j = 0; j < working_.size(); ++j)
      for (const auto& f : ds_.examples[working_[j]].x)
        if (static_cast<std::size_t>(f.index) <= d)
          dense_[j * d + f.index - 1] = f.value;
  }
}

const std::vector<double>& KernelCache::row(std::size_t i) {
  if (i >= ds_.n()) throw std::invalid_argument("KernelCache: index out of range");
  auto it = index_.find(i);
  if (it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
  }
  const auto& xi = ds_.examples[i].x;
  const double ni = squared_norm(xi);
  std::vector<double> r(working_.size());
  if (dense_dim_ > 0) {
    std::vector<double> xd(dense_dim_, 0.0);
    for (const auto& f : xi)
      if (static_cast<std::size_t>(f.index) <= dense_dim_)
        xd[f.index - 1] = f.value;
    for (std::size_t j = 0; j < working_.size(); ++j) {
      const double* row = &dense_[j * dense_dim_];
      double s = 0.0;
      for (std::size_t t = 0; t < dense_dim_; ++t) s += xd[t] * row[t];
      r[j] = k_from_dot(spec_, s, ni, working_norm2_[j]);
    }
  } else {
    for (std::size_t j = 0; j < working_.size(); ++j)
      r[j] = k_eval(spec_, xi, ni, ds_.examples[working_[j]].x,
                    working_norm2_[j]);
  }
  if (lru_.size() >= capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  lru_.emplace_front(i, std::move(r));
  index_[i] = lru_.begin();
  return lru_.front().second;
}

std::vector<double> k_row(const KernelSpec& spec, const SparseDataset& ds,
                          std::size_t i, const std::vector<std::size_t>& working,
                          KernelCache& cache) {
  for (std::size_t w : working)
    if (w >= ds.n()) throw std::invalid_argument("k_row: index out of range");
  (void)spec;
  return cache.row(i);
}

}  // namespace randsvm
