#pragma once

#include <cstddef>
#include <optional>

#include "randsvm/dataset.hpp"

namespace randsvm {

enum class PlanKind { separable, nonseparable, regression };

struct SamplePlan {
  std::size_t k = 1;        // support-vector bound
  std::size_t r = 1;        // subset size, ceil(c * k), clamped to n
  double c = 2.0;
  std::optional<double> gamma;
  std::optional<double> eps_jl;
  double delta = 0.9;
  double kappa = 0.0;
  std::optional<double> margin_lb;
  double max_norm = 0.0;
  std::size_t n = 0;
  std::optional<double> tube_eps;
  std::optional<double> w_norm;
  bool clamped = false;     // k or r hit n
};

// Theorem 3 / kVal: k = ceil((8/g^2)(1 + (1+L^2)/(2l))^2 ln(4n/delta) + kappa n)
std::size_t estimate_k_margin(double gamma, double delta, std::size_t n,
                              double max_norm, double margin_lb, double kappa);

// eps-only bound: k = ceil((16/eps^2) ln(4n/delta))
std::size_t estimate_k_from_eps(double eps_jl, double delta, std::size_t n);

// non-separable recipe: k = ceil((32/eps^2) ln(4n/delta)), twice the above
std::size_t estimate_k_nonsep(double eps_jl, double delta, std::size_t n);

// regression: k = ceil(2((W^2+L^2)/(g*eps))^2 ln(4n/delta) + kappa n)
std::size_t estimate_k_regression(double gamma, double delta, std::size_t n,
                                  double max_norm, double w_norm,
                                  double tube_eps, double kappa);

struct PlanParams {
  std::optional<double> gamma;
  std::optional<double> eps_jl;
  double delta = 0.9;
  double kappa = 0.0;
  std::optional<double> margin_lb;
  double c_mult = 2.0;
  std::optional<double> w_norm;       // regression; defaults to 1/tube_eps
  std::optional<double> tube_eps;
  std::optional<std::size_t> k_override;
};

SamplePlan make_plan(PlanKind kind, const DatasetStats& st,
                     const PlanParams& params);

}  // namespace randsvm
