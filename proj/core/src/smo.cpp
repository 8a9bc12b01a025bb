#include "randsvm/smo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace randsvm {

namespace {

constexpr double kTau = 1e-12;

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Generic SMO core for min 1/2 a'Qa + p'a, Q_st = y_s y_t K(e_s, e_t),
// subject to sum y_s a_s = 0, 0 <= a_s <= C. Classification uses one
// variable per working point; regression two (alpha+ with sign +1,
// alpha- with sign -1) sharing the point's kernel row.
struct SmoProblem {
  const SparseDataset& ds;
  const std::vector<std::size_t>& working;  // example indices
  KernelSpec kernel;
  double C;
  std::vector<double> sign;    // y_s per variable
  std::vector<double> linear;  // p_s per variable
  std::vector<std::size_t> slot;  // variable -> position in working list
};

struct SmoResult {
  std::vector<double> alpha;
  std::vector<double> grad;
  double bias = 0.0;
  double objective = 0.0;  // maximization form
  std::size_t iterations = 0;
  bool converged = false;
};

SmoResult run_smo(const SmoProblem& prob, std::vector<double> alpha0,
                  const SolveOptions& opts) {
  const std::size_t m = prob.working.size();
  const std::size_t nv = prob.sign.size();
  const double C = prob.C;

  std::size_t cache_rows = opts.cache_rows;
  if (cache_rows == 0) {
    cache_rows = (256u << 20) / (sizeof(double) * std::max<std::size_t>(m, 1));
    cache_rows = std::clamp<std::size_t>(cache_rows, 2, 4096);
  }
  KernelCache cache(prob.ds, prob.kernel, prob.working, cache_rows);

  std::vector<double> diag(m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto& x = prob.ds.examples[prob.working[e]].x;
    diag[e] = k_eval(prob.kernel, x, x);
  }

  SmoResult res;
  res.alpha = std::move(alpha0);
  res.grad = prob.linear;
  // warm-started coefficients contribute to the initial gradient
  for (std::size_t t = 0; t < nv; ++t) {
    if (res.alpha[t] == 0.0) continue;
    const auto& row = cache.row(prob.working[prob.slot[t]]);
    const double c = prob.sign[t] * res.alpha[t];
    for (std::size_t s = 0; s < nv; ++s)
      res.grad[s] += prob.sign[s] * c * row[prob.slot[s]];
  }

  const std::size_t max_iters =
      opts.max_iters ? opts.max_iters : 10000 * std::max<std::size_t>(m, 1);

  double m_up = 0.0, m_low = 0.0;
  for (std::size_t iter = 0;; ++iter) {
    // maximal KKT-violating pair
    std::size_t i = nv, j = nv;
    m_up = -std::numeric_limits<double>::infinity();
    m_low = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < nv; ++s) {
      const double v = -prob.sign[s] * res.grad[s];
      const bool up = (prob.sign[s] > 0) ? (res.alpha[s] < C) : (res.alpha[s] > 0);
      const bool low = (prob.sign[s] > 0) ? (res.alpha[s] > 0) : (res.alpha[s] < C);
      if (up && v > m_up) {
        m_up = v;
        i = s;
      }
      if (low && v < m_low) {
        m_low = v;
        j = s;
      }
    }
    if (i == nv || j == nv || m_up - m_low <= opts.kkt_tol) {
      // an empty candidate set means no feasible ascent direction remains
      res.converged = true;
      res.iterations = iter;
      break;
    }
    if (iter >= max_iters) {
      res.iterations = iter;
      res.converged = false;
      break;
    }

    const auto row_i = cache.row(prob.working[prob.slot[i]]);  // copy: row_j may evict
    const auto& row_j = cache.row(prob.working[prob.slot[j]]);
    const double kij = row_i[prob.slot[j]];
    // curvature along (da_i, da_j) = (y_i, -y_j) l; the sign factors of
    // Q_st = y_s y_t K_st cancel against the direction, leaving kernel terms
    double eta = diag[prob.slot[i]] + diag[prob.slot[j]] - 2.0 * kij;
    if (eta <= kTau) eta = kTau;
    double lambda = (m_up - m_low) / eta;
    // box caps along the feasible direction (a_i += y_i*l, a_j -= y_j*l)
    lambda = std::min(lambda, prob.sign[i] > 0 ? C - res.alpha[i] : res.alpha[i]);
    lambda = std::min(lambda, prob.sign[j] > 0 ? res.alpha[j] : C - res.alpha[j]);
    if (lambda <= 0.0) {  // numerically stuck pair
      res.iterations = iter;
      res.converged = false;
      break;
    }
    res.alpha[i] += prob.sign[i] * lambda;
    res.alpha[j] -= prob.sign[j] * lambda;
    res.alpha[i] = std::clamp(res.alpha[i], 0.0, C);
    res.alpha[j] = std::clamp(res.alpha[j], 0.0, C);
    for (std::size_t s = 0; s < nv; ++s)
      res.grad[s] +=
          lambda * prob.sign[s] * (row_i[prob.slot[s]] - row_j[prob.slot[s]]);
  }

  // b = mean of -y_s g_s over free variables, else KKT-interval midpoint
  double bsum = 0.0;
  std::size_t bfree = 0;
  const double atol = C * 1e-10;
  for (std::size_t s = 0; s < nv; ++s) {
    if (res.alpha[s] > atol && res.alpha[s] < C - atol) {
      bsum += -prob.sign[s] * res.grad[s];
      ++bfree;
    }
  }
  if (bfree > 0)
    res.bias = bsum / static_cast<double>(bfree);
  else if (std::isfinite(m_up) && std::isfinite(m_low))
    res.bias = 0.5 * (m_up + m_low);

  double d = 0.0;  // minimization objective = 1/2 a'(g + p)
  for (std::size_t s = 0; s < nv; ++s)
    d += res.alpha[s] * (res.grad[s] + prob.linear[s]);
  res.objective = -0.5 * d;
  return res;
}

void finalize_model(SvmModel& model, const SparseDataset& ds,
                    const std::vector<std::size_t>& working,
                    const std::vector<double>& coef_per_point) {
  const double atol = model.C * 1e-10;
  for (std::size_t e = 0; e < working.size(); ++e) {
    if (std::abs(coef_per_point[e]) > atol) {
      model.sv_indices.push_back(working[e]);
      model.sv_vectors.push_back(ds.examples[working[e]].x);
      model.sv_norm2.push_back(squared_norm(ds.examples[working[e]].x));
      model.dual_coef.push_back(coef_per_point[e]);
    }
  }
}

}  // namespace

SolveOutcome solve_csvc(const SparseDataset& ds,
                        const std::vector<std::size_t>& working,
                        const KernelSpec& kernel, double C,
                        const std::optional<SvmModel>& warm_start,
                        const SolveOptions& opts) {
  if (working.empty()) throw std::invalid_argument("solve_csvc: empty working set");
  if (!(C > 0.0)) throw std::invalid_argument("solve_csvc: C must be > 0");
  kernel.validate();
  for (std::size_t w : working)
    if (w >= ds.n()) throw std::invalid_argument("solve_csvc: index out of range");

  bool has_pos = false, has_neg = false;
  for (std::size_t w : working) {
    const double y = ds.examples[w].y;
    if (y != 1.0 && y != -1.0)
      throw std::invalid_argument("solve_csvc: labels must be +-1");
    (y > 0 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg)
    throw DegenerateModelError("solve_csvc: single-class working set");

  const std::size_t m = working.size();
  SmoProblem prob{ds, working, kernel, C, {}, {}, {}};
  prob.sign.resize(m);
  prob.linear.assign(m, -1.0);
  prob.slot.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    prob.sign[e] = ds.examples[working[e]].y;
    prob.slot[e] = e;
  }

  std::vector<double> alpha0(m, 0.0);
  if (warm_start) {
    std::unordered_map<std::size_t, double> coef;
    for (std::size_t s = 0; s < warm_start->n_sv(); ++s)
      coef[warm_start->sv_indices[s]] = warm_start->dual_coef[s];
    double resid = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      auto it = coef.find(working[e]);
      if (it == coef.end()) continue;
      alpha0[e] = std::clamp(prob.sign[e] * it->second, 0.0, C);
      resid += prob.sign[e] * alpha0[e];
    }
    // restore the equality constraint if seeding left a residual
    for (std::size_t e = 0; e < m && resid != 0.0; ++e) {
      if (prob.sign[e] * resid > 0.0 && alpha0[e] > 0.0) {
        const double cut = std::min(alpha0[e], std::abs(resid));
        alpha0[e] -= cut;
        resid -= prob.sign[e] > 0 ? cut : -cut;
      }
    }
  }

  SmoResult r = run_smo(prob, std::move(alpha0), opts);

  SolveOutcome out;
  out.model.task = Task::classify;
  out.model.kernel = kernel;
  out.model.C = C;
  out.model.bias = r.bias;
  std::vector<double> coef(m);
  for (std::size_t e = 0; e < m; ++e) coef[e] = prob.sign[e] * r.alpha[e];
  finalize_model(out.model, ds, working, coef);
  out.dual_objective = r.objective;
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

SolveOutcome solve_svr(const SparseDataset& ds,
                       const std::vector<std::size_t>& working,
                       const KernelSpec& kernel, double C, double epsilon_tube,
                       const std::optional<SvmModel>& warm_start,
                       const SolveOptions& opts) {
  if (working.empty()) throw std::invalid_argument("solve_svr: empty working set");
  if (!(C > 0.0)) throw std::invalid_argument("solve_svr: C must be > 0");
  if (epsilon_tube < 0.0)
    throw std::invalid_argument("solve_svr: epsilon must be >= 0");
  kernel.validate();
  for (std::size_t w : working)
    if (w >= ds.n()) throw std::invalid_argument("solve_svr: index out of range");

  const std::size_t m = working.size();
  SmoProblem prob{ds, working, kernel, C, {}, {}, {}};
  prob.sign.resize(2 * m);
  prob.linear.resize(2 * m);
  prob.slot.resize(2 * m);
  for (std::size_t e = 0; e < m; ++e) {
    const double y = ds.examples[working[e]].y;
    prob.sign[e] = 1.0;        // alpha+
    prob.sign[e + m] = -1.0;   // alpha-
    prob.linear[e] = epsilon_tube - y;
    prob.linear[e + m] = epsilon_tube + y;
    prob.slot[e] = e;
    prob.slot[e + m] = e;
  }

  std::vector<double> alpha0(2 * m, 0.0);
  if (warm_start) {
    std::unordered_map<std::size_t, double> coef;
    for (std::size_t s = 0; s < warm_start->n_sv(); ++s)
      coef[warm_start->sv_indices[s]] = warm_start->dual_coef[s];
    double resid = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      auto it = coef.find(working[e]);
      if (it == coef.end()) continue;
      if (it->second > 0.0)
        alpha0[e] = std::min(it->second, C);
      else
        alpha0[e + m] = std::min(-it->second, C);
      resid += alpha0[e] - alpha0[e + m];
    }
    for (std::size_t s = 0; s < 2 * m && resid != 0.0; ++s) {
      if (prob.sign[s] * resid > 0.0 && alpha0[s] > 0.0) {
        const double cut = std::min(alpha0[s], std::abs(resid));
        alpha0[s] -= cut;
        resid -= prob.sign[s] > 0 ? cut : -cut;
      }
    }
  }

  SmoResult r = run_smo(prob, std::move(alpha0), opts);

  SolveOutcome out;
  out.model.task = Task::regress;
  out.model.epsilon_tube = epsilon_tube;
  out.model.kernel = kernel;
  out.model.C = C;
  out.model.bias = r.bias;
  std::vector<double> coef(m);
  for (std::size_t e = 0; e < m; ++e) coef[e] = r.alpha[e] - r.alpha[e + m];
  finalize_model(out.model, ds, working, coef);
  out.dual_objective = r.objective;
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

double predict(const SvmModel& model, const SparseVector& x) {
  double f = model.bias;
  const double xn = squared_norm(x);
  for (std::size_t s = 0; s < model.n_sv(); ++s) {
    const double svn = s < model.sv_norm2.size()
                           ? model.sv_norm2[s]
                           : squared_norm(model.sv_vectors[s]);
    f += model.dual_coef[s] * k_eval(model.kernel, model.sv_vectors[s], svn, x, xn);
  }
  return f;
}

Predictor::Predictor(const SvmModel& model) : model_(model) {
  std::size_t d = 0;
  for (const auto& sv : model.sv_vectors)
    for (const auto& f : sv)
      d = std::max(d, static_cast<std::size_t>(f.index));
  if (d == 0 || d > 1024 ||
      model.n_sv() * d > (64u << 20) / sizeof(double))
    return;  // sparse fallback
  dim_ = d;
  dense_.assign(model.n_sv() * d, 0.0);
  for (std::size_t s = 0; s < model.n_sv(); ++s)
    for (const auto& f : model.sv_vectors[s])
      dense_[s * d + f.index - 1] = f.value;
}

double Predictor::operator()(const SparseVector& x) const {
  if (dim_ == 0) return predict(model_, x);
  // features of x beyond dim_ meet only zero SV coordinates, so truncating
  // the dense product is exact; the full norm still enters the gaussian term
  std::vector<double> xd(dim_, 0.0);
  double xn = 0.0;
  for (const auto& f : x) {
    xn += f.value * f.value;
    if (static_cast<std::size_t>(f.index) <= dim_)
      xd[f.index - 1] = f.value;
  }
  double out = model_.bias;
  for (std::size_t s = 0; s < model_.n_sv(); ++s) {
    const double* row = &dense_[s * dim_];
    double dp = 0.0;
    for (std::size_t t = 0; t < dim_; ++t) dp += xd[t] * row[t];
    out += model_.dual_coef[s] *
           k_from_dot(model_.kernel, dp, model_.sv_norm2[s], xn);
  }
  return out;
}

bool violates(const SvmModel& model, const SparseDataset& ds, std::size_t i,
              double tol) {
  if (i >= ds.n()) throw std::invalid_argument("violates: index out of range");
  const double f = predict(model, ds.examples[i].x);
  if (model.task == Task::classify)
    return ds.examples[i].y * f < 1.0 - tol;
  return std::abs(f - ds.examples[i].y) > model.epsilon_tube + tol;
}

void save_model(const SvmModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open model file for write: " + path);
  out << "randsvm-model v1 ";
  if (model.task == Task::classify)
    out << "classify";
  else
    out << "regress:" << fmt_real(model.epsilon_tube);
  if (model.kernel.family == KernelFamily::linear)
    out << " linear";
  else
    out << " gaussian:" << fmt_real(model.kernel.sigma);
  out << ' ' << fmt_real(model.C) << ' ' << fmt_real(model.bias) << ' '
      << model.n_sv() << '\n';
  for (std::size_t s = 0; s < model.n_sv(); ++s) {
    out << model.sv_indices[s] << ' ' << fmt_real(model.dual_coef[s]);
    for (const auto& f : model.sv_vectors[s])
      out << ' ' << f.index << ':' << fmt_real(f.value);
    out << '\n';
  }
  if (!out) throw std::runtime_error("model write failed: " + path);
}

SvmModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string magic, ver, task, kern;
  SvmModel model;
  std::size_t nsv = 0;
  in >> magic >> ver >> task >> kern >> model.C >> model.bias >> nsv;
  if (!in || magic != "randsvm-model" || ver != "v1")
    throw std::runtime_error("bad model header: " + path);
  if (task == "classify") {
    model.task = Task::classify;
  } else if (task.rfind("regress:", 0) == 0) {
    model.task = Task::regress;
    model.epsilon_tube = std::stod(task.substr(8));
  } else {
    throw std::runtime_error("bad model task: " + task);
  }
  if (kern == "linear") {
    model.kernel.family = KernelFamily::linear;
  } else if (kern.rfind("gaussian:", 0) == 0) {
    model.kernel.family = KernelFamily::gaussian;
    model.kernel.sigma = std::stod(kern.substr(9));
  } else {
    throw std::runtime_error("bad model kernel: " + kern);
  }
  std::string rest;
  std::getline(in, rest);
  for (std::size_t s = 0; s < nsv; ++s) {
    std::string line;
    if (!std::getline(in, line))
      throw std::runtime_error("truncated model file: " + path);
    std::istringstream ls(line);
    std::size_t idx;
    double coef;
    if (!(ls >> idx >> coef))
      throw std::runtime_error("bad SV line in model file: " + path);
    SparseVector x;
    std::string tok;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("bad SV feature in model file: " + path);
      x.push_back({std::stoi(tok.substr(0, colon)),
                   std::stod(tok.substr(colon + 1))});
    }
    model.sv_indices.push_back(idx);
    model.dual_coef.push_back(coef);
    model.sv_norm2.push_back(squared_norm(x));
    model.sv_vectors.push_back(std::move(x));
  }
  return model;
}

}  // namespace randsvm
