#include "randsvm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace randsvm {

DenseQP build_dual(const SparseDataset& ds,
                   const std::vector<std::size_t>& working,
                   const KernelSpec& kernel, double C, Task task,
                   double epsilon_tube) {
  if (working.size() > 500)
    throw std::invalid_argument("build_dual: dense limit is 500 points");
  kernel.validate();
  const std::size_t m = working.size();
  std::vector<std::vector<double>> K(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = k_eval(kernel, ds.examples[working[i]].x,
                        ds.examples[working[j]].x);
      K[i][j] = K[j][i] = v;
    }

  DenseQP qp;
  if (task == Task::classify) {
    qp.Q.assign(m, std::vector<double>(m));
    qp.linear.assign(m, 1.0);
    qp.box_lo.assign(m, 0.0);
    qp.box_hi.assign(m, C);
    qp.eq_coef.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double yi = ds.examples[working[i]].y;
      qp.eq_coef[i] = yi;
      for (std::size_t j = 0; j < m; ++j)
        qp.Q[i][j] = yi * ds.examples[working[j]].y * K[i][j];
    }
  } else {
    // variables (a+_1..a+_m, a-_1..a-_m)
    const std::size_t nv = 2 * m;
    qp.Q.assign(nv, std::vector<double>(nv));
    qp.linear.resize(nv);
    qp.box_lo.assign(nv, 0.0);
    qp.box_hi.assign(nv, C);
    qp.eq_coef.resize(nv);
    for (std::size_t i = 0; i < m; ++i) {
      const double yi = ds.examples[working[i]].y;
      qp.linear[i] = yi - epsilon_tube;
      qp.linear[i + m] = -yi - epsilon_tube;
      qp.eq_coef[i] = 1.0;
      qp.eq_coef[i + m] = -1.0;
      for (std::size_t j = 0; j < m; ++j) {
        qp.Q[i][j] = K[i][j];
        qp.Q[i + m][j + m] = K[i][j];
        qp.Q[i][j + m] = -K[i][j];
        qp.Q[i + m][j] = -K[i][j];
      }
    }
  }
  return qp;
}

std::vector<double> project_box_hyperplane(const DenseQP& qp,
                                           const std::vector<double>& v) {
  const std::size_t n = qp.size();
  auto eval = [&](double lam, std::vector<double>* out) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::clamp(v[i] + lam * qp.eq_coef[i], qp.box_lo[i],
                            qp.box_hi[i]);
      if (out) (*out)[i] = x;
      s += qp.eq_coef[i] * x;
    }
    return s;
  };
  double lo = -1.0, hi = 1.0;
  for (int g = 0; eval(lo, nullptr) > qp.eq_rhs; ++g) {
    lo *= 2.0;
    if (g > 100) throw std::runtime_error("projection: infeasible hyperplane");
  }
  for (int g = 0; eval(hi, nullptr) < qp.eq_rhs; ++g) {
    hi *= 2.0;
    if (g > 100) throw std::runtime_error("projection: infeasible hyperplane");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (eval(mid, nullptr) < qp.eq_rhs)
      lo = mid;
    else
      hi = mid;
  }
  std::vector<double> out(n);
  eval(0.5 * (lo + hi), &out);
  return out;
}

namespace {

double objective(const DenseQP& qp, const std::vector<double>& a) {
  const std::size_t n = qp.size();
  double obj = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double qa = 0.0;
    for (std::size_t j = 0; j < n; ++j) qa += qp.Q[i][j] * a[j];
    obj += a[i] * (qp.linear[i] - 0.5 * qa);
  }
  return obj;
}

}  // namespace

OracleSolution solve_dense(const DenseQP& qp, double tol) {
  const std::size_t n = qp.size();
  double lip = 0.0;  // row-sum bound on ||Q||_2
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < n; ++j) rs += std::abs(qp.Q[i][j]);
    lip = std::max(lip, rs);
  }
  const double step = 1.0 / std::max(lip, 1e-12);

  std::vector<double> a = project_box_hyperplane(qp, std::vector<double>(n, 0.0));
  std::vector<double> y = a, a_prev = a, grad(n), cand(n);
  double t = 1.0;
  const std::size_t cap = 1000000;
  for (std::size_t iter = 1; iter <= cap; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double qa = 0.0;
      for (std::size_t j = 0; j < n; ++j) qa += qp.Q[i][j] * y[j];
      grad[i] = qp.linear[i] - qa;
    }
    for (std::size_t i = 0; i < n; ++i) cand[i] = y[i] + step * grad[i];
    a_prev = a;
    a = project_box_hyperplane(qp, cand);

    // projected-gradient residual at the new iterate
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double qa = 0.0;
      for (std::size_t j = 0; j < n; ++j) qa += qp.Q[i][j] * a[j];
      cand[i] = a[i] + step * (qp.linear[i] - qa);
    }
    std::vector<double> pa = project_box_hyperplane(qp, cand);
    for (std::size_t i = 0; i < n; ++i) {
      double d = (pa[i] - a[i]) / step;
      res += d * d;
    }
    if (std::sqrt(res) <= tol) {
      OracleSolution sol;
      sol.alphas = a;
      sol.objective = objective(qp, a);
      sol.iterations = iter;
      return sol;
    }

    // FISTA momentum, restarted when the ascent direction reverses
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    double mom = (t - 1.0) / t_next;
    double upswing = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      upswing += (a[i] - a_prev[i]) * grad[i];
    if (upswing < 0.0) {
      mom = 0.0;
      t_next = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
      y[i] = a[i] + mom * (a[i] - a_prev[i]);
    t = t_next;
  }
  throw std::runtime_error("solve_dense: no convergence in 1e6 iterations");
}

}  // namespace randsvm
