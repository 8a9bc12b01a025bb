#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "randsvm/dataset.hpp"

namespace randsvm {

// Random d x k matrix with i.i.d. N(0,1) entries; projection of u is
// (R'u)/sqrt(k).
struct ProjectionMatrix {
  std::size_t d = 0;
  std::size_t k = 0;
  std::vector<double> entries;  // row-major d x k

  double at(std::size_t i, std::size_t j) const { return entries[i * k + j]; }
};

ProjectionMatrix make_projection(std::size_t d, std::size_t k,
                                 std::uint64_t seed);

std::vector<double> project(const ProjectionMatrix& R,
                            const std::vector<double>& u);

struct TrialSummary {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double bound = 0.0;  // theoretical failure probability
  double empirical_rate() const {
    return trials ? static_cast<double>(failures) / static_cast<double>(trials)
                  : 0.0;
  }
};

// Norm preservation: failures of (1-e)||u||^2 <= ||u'||^2 <= (1+e)||u||^2
// over fresh draws of R; bound = 2 exp(-(e^2 - e^3) k / 4).
TrialSummary check_norm_preservation(std::size_t d, std::size_t k,
                                     double eps_jl, std::size_t trials,
                                     std::uint64_t seed);

// Dot-product preservation: failures of
// |u'.v' - u.v| <= (e/2)(L1^2 + L2^2); bound = 4 exp(-e^2 k / 8).
TrialSummary check_dot_preservation(std::size_t d, std::size_t k, double eps_jl,
                                    std::size_t trials, std::uint64_t seed);

// Margin preservation under projection: solves the input hard-margin
// problem for l*, picks k from the margin formula, and counts trials where
// the projected-space margin falls below l*(1-gamma); bound = delta.
struct MarginCheck {
  TrialSummary summary;
  double l_star = 0.0;
  std::size_t k = 0;
  double min_trial_margin = 0.0;
  double max_trial_margin = 0.0;
};

MarginCheck check_margin_preservation(const SparseDataset& ds, double gamma,
                                      double delta, std::size_t trials,
                                      std::uint64_t seed);

// Zero-pads a k-dimensional separator to d dimensions; bias unchanged.
std::pair<std::vector<double>, double> orthogonal_extension(
    const std::vector<double>& w_p, double bias, std::size_t d);

}  // namespace randsvm
