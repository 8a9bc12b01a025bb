#include "randsvm/projection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "randsvm/smo.hpp"

namespace randsvm {

namespace {

// splitmix64; decorrelates per-trial streams derived from (seed, trial)
std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> random_unit(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::vector<double> u(d);
  double s = 0.0;
  for (auto& x : u) {
    x = norm(rng);
    s += x * x;
  }
  s = std::sqrt(s);
  for (auto& x : u) x /= s;
  return u;
}

std::size_t run_trials(std::size_t trials, std::size_t parallelism,
                       const std::function<bool(std::size_t)>& fail) {
  const std::size_t p = std::clamp<std::size_t>(parallelism, 1, 64);
  if (p == 1) {
    std::size_t failures = 0;
    for (std::size_t t = 0; t < trials; ++t)
      if (fail(t)) ++failures;
    return failures;
  }
  std::atomic<std::size_t> failures{0};
  std::vector<std::thread> threads;
  const std::size_t chunk = (trials + p - 1) / p;
  for (std::size_t w = 0; w < p; ++w) {
    threads.emplace_back([&, w] {
      std::size_t local = 0;
      const std::size_t lo = w * chunk, hi = std::min(trials, lo + chunk);
      for (std::size_t t = lo; t < hi; ++t)
        if (fail(t)) ++local;
      failures += local;
    });
  }
  for (auto& th : threads) th.join();
  return failures.load();
}

std::size_t default_parallelism() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 4;
}

}  // namespace

ProjectionMatrix make_projection(std::size_t d, std::size_t k,
                                 std::uint64_t seed) {
  ProjectionMatrix R;
  R.d = d;
  R.k = k;
  R.entries.resize(d * k);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  for (auto& e : R.entries) e = norm(rng);
  return R;
}

std::vector<double> project(const ProjectionMatrix& R,
                            const std::vector<double>& u) {
  if (u.size() != R.d)
    throw std::invalid_argument("project: dimension mismatch");
  std::vector<double> out(R.k, 0.0);
  for (std::size_t i = 0; i < R.d; ++i) {
    const double ui = u[i];
    if (ui == 0.0) continue;
    const double* row = &R.entries[i * R.k];
    for (std::size_t j = 0; j < R.k; ++j) out[j] += row[j] * ui;
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(R.k));
  for (auto& x : out) x *= s;
  return out;
}

TrialSummary check_norm_preservation(std::size_t d, std::size_t k,
                                     double eps_jl, std::size_t trials,
                                     std::uint64_t seed) {
  if (!(eps_jl > 0.0 && eps_jl < 1.0))
    throw std::invalid_argument("eps_jl must lie in (0,1)");
  if (d == 0 || k == 0)
    throw std::invalid_argument("d and k must be >= 1");
  TrialSummary s;
  s.trials = trials;
  s.bound = 2.0 * std::exp(-(eps_jl * eps_jl - eps_jl * eps_jl * eps_jl) *
                           static_cast<double>(k) / 4.0);
  // for unit u and iid gaussian R, the entries of R'u are iid N(0,1);
  // sampling them directly is exact and avoids materializing R
  s.failures = run_trials(trials, default_parallelism(), [&](std::size_t t) {
    std::mt19937_64 rng(mix(seed, t));
    std::normal_distribution<double> norm(0.0, 1.0);
    double nsq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double acc = norm(rng);
      nsq += acc * acc;
    }
    nsq /= static_cast<double>(k);
    return nsq < 1.0 - eps_jl || nsq > 1.0 + eps_jl;
  });
  return s;
}

TrialSummary check_dot_preservation(std::size_t d, std::size_t k, double eps_jl,
                                    std::size_t trials, std::uint64_t seed) {
  if (!(eps_jl > 0.0 && eps_jl < 1.0))
    throw std::invalid_argument("eps_jl must lie in (0,1)");
  if (d == 0 || k == 0)
    throw std::invalid_argument("d and k must be >= 1");
  const auto u = random_unit(d, mix(seed, 0xbeef));
  const auto v = random_unit(d, mix(seed, 0xcafe));
  double uv = 0.0;
  for (std::size_t i = 0; i < d; ++i) uv += u[i] * v[i];
  const double slack = 0.5 * eps_jl * 2.0;  // (e/2)(L1^2 + L2^2), unit norms
  TrialSummary s;
  s.trials = trials;
  s.bound = 4.0 * std::exp(-eps_jl * eps_jl * static_cast<double>(k) / 8.0);
  // (r.u, r.v) for a gaussian row r is bivariate normal with unit variances
  // and correlation u.v; sample the pair directly instead of materializing r
  const double ortho = std::sqrt(std::max(0.0, 1.0 - uv * uv));
  s.failures = run_trials(trials, default_parallelism(), [&](std::size_t t) {
    std::mt19937_64 rng(mix(seed, t));
    std::normal_distribution<double> norm(0.0, 1.0);
    double dp = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double au = norm(rng);
      const double av = uv * au + ortho * norm(rng);
      dp += au * av;
    }
    dp /= static_cast<double>(k);
    return std::abs(dp - uv) > slack;
  });
  return s;
}

namespace {

// explicit primal normal for a linear-kernel model
std::vector<double> linear_weight(const SvmModel& model, std::size_t dim) {
  std::vector<double> w(dim, 0.0);
  for (std::size_t s = 0; s < model.n_sv(); ++s)
    for (const auto& f : model.sv_vectors[s])
      w[static_cast<std::size_t>(f.index - 1)] += model.dual_coef[s] * f.value;
  return w;
}

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

constexpr double kHardMarginC = 1e6;

}  // namespace

MarginCheck check_margin_preservation(const SparseDataset& ds, double gamma,
                                      double delta, std::size_t trials,
                                      std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  if (ds.n() > 500)
    throw std::invalid_argument("margin check needs n <= 500 (exact solves)");

  const auto st = stats(ds);
  std::vector<std::size_t> all(ds.n());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  KernelSpec linear{KernelFamily::linear, 1.0};
  auto full = solve_csvc(ds, all, linear, kHardMarginC, std::nullopt, {});
  for (std::size_t i = 0; i < ds.n(); ++i) {
    if (ds.examples[i].y * predict(full.model, ds.examples[i].x) < 1.0 - 1e-3)
      throw std::invalid_argument("margin check: dataset is not separable");
  }
  const auto w_star = linear_weight(full.model, static_cast<std::size_t>(ds.dim));
  const double l_star = 1.0 / vec_norm(w_star);
  const double L2 = st.max_norm * st.max_norm;
  const double t = 1.0 + (1.0 + L2) / (2.0 * l_star);
  const std::size_t k = static_cast<std::size_t>(
      std::ceil(8.0 / (gamma * gamma) * t * t *
                std::log(4.0 * static_cast<double>(ds.n()) / delta)));

  std::vector<std::vector<double>> dense(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i)
    dense[i] = to_dense(ds.examples[i].x, ds.dim);

  std::vector<double> margins(trials, 0.0);
  const double threshold = l_star * (1.0 - gamma);
  const std::size_t failures =
      run_trials(trials, default_parallelism(), [&](std::size_t tr) {
        auto R = make_projection(static_cast<std::size_t>(ds.dim), k,
                                 mix(seed, tr));
        SparseDataset proj;
        proj.dim = static_cast<int>(k);
        proj.examples.resize(ds.n());
        for (std::size_t i = 0; i < ds.n(); ++i) {
          proj.examples[i].x = from_dense(project(R, dense[i]));
          proj.examples[i].y = ds.examples[i].y;
        }
        proj.weights.assign(ds.n(), 1.0);
        std::vector<std::size_t> widx(ds.n());
        for (std::size_t i = 0; i < widx.size(); ++i) widx[i] = i;
        auto sol = solve_csvc(proj, widx, linear, kHardMarginC, std::nullopt, {});
        const auto wp = linear_weight(sol.model, static_cast<std::size_t>(k));
        const double l_p = 1.0 / vec_norm(wp);
        margins[tr] = l_p;
        return l_p < threshold;
      });

  MarginCheck mc;
  mc.summary.trials = trials;
  mc.summary.failures = failures;
  mc.summary.bound = delta;
  mc.l_star = l_star;
  mc.k = k;
  mc.min_trial_margin = *std::min_element(margins.begin(), margins.end());
  mc.max_trial_margin = *std::max_element(margins.begin(), margins.end());
  return mc;
}

std::pair<std::vector<double>, double> orthogonal_extension(
    const std::vector<double>& w_p, double bias, std::size_t d) {
  if (w_p.size() > d)
    throw std::invalid_argument("orthogonal_extension: k exceeds d");
  std::vector<double> w(d, 0.0);
  std::copy(w_p.begin(), w_p.end(), w.begin());
  return {std::move(w), bias};
}

}  // namespace randsvm
