#include "randsvm/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace randsvm {

namespace {

void check_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
}

std::size_t ceil_count(double v) {
  if (!(std::isfinite(v)) || v < 0.0)
    throw std::invalid_argument("bound evaluated to a nonfinite value");
  double c = std::ceil(v);
  if (c < 1.0) c = 1.0;
  return static_cast<std::size_t>(c);
}

double log_term(std::size_t n, double delta) {
  return std::log(4.0 * static_cast<double>(n) / delta);
}

}  // namespace

std::size_t estimate_k_margin(double gamma, double delta, std::size_t n,
                              double max_norm, double margin_lb, double kappa) {
  check_unit(gamma, "gamma");
  check_unit(delta, "delta");
  if (!(margin_lb > 0.0)) throw std::invalid_argument("margin_lb must be > 0");
  if (kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
  const double L2 = max_norm * max_norm;
  const double t = 1.0 + (1.0 + L2) / (2.0 * margin_lb);
  return ceil_count(8.0 / (gamma * gamma) * t * t * log_term(n, delta) +
                    kappa * static_cast<double>(n));
}

std::size_t estimate_k_from_eps(double eps_jl, double delta, std::size_t n) {
  check_unit(eps_jl, "eps_jl");
  check_unit(delta, "delta");
  return ceil_count(16.0 / (eps_jl * eps_jl) * log_term(n, delta));
}

std::size_t estimate_k_nonsep(double eps_jl, double delta, std::size_t n) {
  check_unit(eps_jl, "eps_jl");
  check_unit(delta, "delta");
  return ceil_count(32.0 / (eps_jl * eps_jl) * log_term(n, delta));
}

std::size_t estimate_k_regression(double gamma, double delta, std::size_t n,
                                  double max_norm, double w_norm,
                                  double tube_eps, double kappa) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  check_unit(delta, "delta");
  if (!(w_norm > 0.0)) throw std::invalid_argument("w_norm must be > 0");
  if (!(tube_eps > 0.0))
    throw std::invalid_argument("tube_eps must be > 0 (bound diverges at 0)");
  if (kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
  const double t = (w_norm * w_norm + max_norm * max_norm) / (gamma * tube_eps);
  return ceil_count(2.0 * t * t * log_term(n, delta) +
                    kappa * static_cast<double>(n));
}

SamplePlan make_plan(PlanKind kind, const DatasetStats& st,
                     const PlanParams& params) {
  if (!(params.c_mult > 0.0))
    throw std::invalid_argument("make_plan: c multiplier must be > 0");
  SamplePlan plan;
  plan.c = params.c_mult;
  plan.gamma = params.gamma;
  plan.eps_jl = params.eps_jl;
  plan.delta = params.delta;
  plan.kappa = params.kappa;
  plan.margin_lb = params.margin_lb;
  plan.max_norm = st.max_norm;
  plan.n = st.n;
  plan.tube_eps = params.tube_eps;
  plan.w_norm = params.w_norm;

  if (params.k_override) {
    plan.k = *params.k_override;
    if (plan.k < 1) throw std::invalid_argument("make_plan: k override must be >= 1");
  } else {
    switch (kind) {
      case PlanKind::separable:
      case PlanKind::nonseparable:
        if (params.margin_lb) {
          if (!params.gamma)
            throw std::invalid_argument("make_plan: margin bound needs gamma");
          plan.k = estimate_k_margin(*params.gamma, params.delta, st.n,
                                     st.max_norm, *params.margin_lb,
                                     params.kappa);
        } else {
          if (!params.eps_jl)
            throw std::invalid_argument("make_plan: eps-jl is required");
          plan.k = kind == PlanKind::separable
                       ? estimate_k_from_eps(*params.eps_jl, params.delta, st.n)
                       : estimate_k_nonsep(*params.eps_jl, params.delta, st.n);
        }
        break;
      case PlanKind::regression: {
        if (!params.gamma || !params.tube_eps)
          throw std::invalid_argument(
              "make_plan: regression needs gamma and tube_eps");
        const double w =
            params.w_norm ? *params.w_norm : 1.0 / *params.tube_eps;
        plan.w_norm = w;
        plan.k = estimate_k_regression(*params.gamma, params.delta, st.n,
                                       st.max_norm, w, *params.tube_eps,
                                       params.kappa);
        break;
      }
    }
  }

  if (plan.k > st.n) {
    plan.k = st.n;
    plan.clamped = true;
  }
  plan.r = static_cast<std::size_t>(
      std::ceil(plan.c * static_cast<double>(plan.k)));
  if (plan.r < plan.k) plan.r = plan.k;
  if (plan.r > st.n) {
    plan.r = st.n;
    plan.clamped = true;
  }
  return plan;
}

}  // namespace randsvm
