#include "randsvm/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace randsvm {

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<std::size_t> sample_uniform(std::size_t n, std::size_t r,
                                        std::mt19937_64& rng) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> out;
  out.reserve(r);
  std::sample(all.begin(), all.end(), std::back_inserter(out), r, rng);
  return out;
}

SolveOutcome solve_working(const SparseDataset& ds, const TrainConfig& cfg,
                           const std::vector<std::size_t>& working,
                           const std::optional<SvmModel>& warm) {
  SolveOptions opts;
  opts.kkt_tol = cfg.kkt_tol;
  if (cfg.task == Task::classify)
    return solve_csvc(ds, working, cfg.kernel, cfg.C, warm, opts);
  return solve_svr(ds, working, cfg.kernel, cfg.C, cfg.epsilon_tube, warm, opts);
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::no_violators: return "noViolators";
    case Termination::sv_budget_exceeded: return "svBudgetExceeded";
    case Termination::iter_cap: return "iterCap";
    case Termination::degenerate: return "degenerate";
  }
  return "?";
}

void write_report_csv(const TrainReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open report file: " + path);
  out << "iter,working,sv,violators,objective,ms\n";
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    const auto& it = report.iterations[i];
    out << (i + 1) << ',' << it.working_size << ',' << it.sv_count << ','
        << it.violator_count << ',' << it.dual_objective << ','
        << it.wall_millis << '\n';
  }
}

std::vector<std::size_t> scan_violators(const SvmModel& model,
                                        const SparseDataset& ds,
                                        const std::vector<std::size_t>& exclude,
                                        double tol, std::size_t parallelism) {
  const std::size_t n = ds.n();
  std::vector<char> skip(n, 0);
  for (std::size_t e : exclude)
    if (e < n) skip[e] = 1;

  const Predictor fx(model);
  auto violator = [&](std::size_t i) {
    const double f = fx(ds.examples[i].x);
    if (model.task == Task::classify) return ds.examples[i].y * f < 1.0 - tol;
    return std::abs(f - ds.examples[i].y) > model.epsilon_tube + tol;
  };

  const std::size_t p = std::clamp<std::size_t>(parallelism, 1, 64);
  if (p == 1 || n < 2048) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
      if (!skip[i] && violator(i)) out.push_back(i);
    return out;
  }

  std::vector<std::vector<std::size_t>> parts(p);
  std::vector<std::thread> threads;
  const std::size_t chunk = (n + p - 1) / p;
  for (std::size_t t = 0; t < p; ++t) {
    threads.emplace_back([&, t] {
      const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i)
        if (!skip[i] && violator(i)) parts[t].push_back(i);
    });
  }
  for (auto& th : threads) th.join();
  std::vector<std::size_t> out;
  for (auto& part : parts)
    out.insert(out.end(), part.begin(), part.end());
  return out;
}

TrainReport train_violator_resampling(const SparseDataset& ds,
                                      const TrainConfig& cfg) {
  if (ds.examples.empty())
    throw std::invalid_argument("train: empty dataset");
  if (cfg.plan.r > ds.n())
    throw std::invalid_argument("train: plan.r exceeds n");
  if (cfg.max_outer_iters < 1)
    throw std::invalid_argument("train: max_outer_iters must be >= 1");

  const std::size_t n = ds.n();
  const std::size_t r = cfg.plan.r;
  const std::size_t k = cfg.plan.k;
  std::mt19937_64 rng(cfg.seed);
  TrainReport report;

  // initial sample, with retries when it lands on a single class
  std::vector<std::size_t> working;
  std::optional<SolveOutcome> outcome;
  for (int attempt = 0; attempt < 5; ++attempt) {
    working = sample_uniform(n, r, rng);
    try {
      auto t0 = Clock::now();
      SolveOutcome oc = solve_working(ds, cfg, working, std::nullopt);
      oc.model.C = cfg.C;
      outcome = std::move(oc);
      auto violators = scan_violators(outcome->model, ds, working, cfg.viol_tol,
                                      cfg.scan_parallelism);
      report.iterations.push_back({working.size(), outcome->model.n_sv(),
                                   violators.size(), outcome->dual_objective,
                                   millis_since(t0)});
      report.final_model = outcome->model;
      report.final_working = working;
      std::vector<std::size_t> V = std::move(violators);

      std::size_t outer = 1;
      while (!V.empty() && outcome->model.n_sv() < k) {
        if (outer >= cfg.max_outer_iters) {
          report.termination = Termination::iter_cap;
          return report;
        }
        ++outer;
        auto t1 = Clock::now();
        const std::vector<std::size_t>& sv = outcome->model.sv_indices;
        const std::size_t need = r > sv.size() ? r - sv.size() : 1;
        std::vector<std::size_t> R;
        if (V.size() <= need) {
          R = V;
        } else {
          std::sample(V.begin(), V.end(), std::back_inserter(R), need, rng);
        }
        std::vector<std::size_t> next = sv;
        next.insert(next.end(), R.begin(), R.end());
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        SolveOutcome oc2 = solve_working(ds, cfg, next, outcome->model);
        outcome = std::move(oc2);
        working = std::move(next);
        V = scan_violators(outcome->model, ds, working, cfg.viol_tol,
                           cfg.scan_parallelism);
        report.iterations.push_back({working.size(), outcome->model.n_sv(),
                                     V.size(), outcome->dual_objective,
                                     millis_since(t1)});
        report.final_model = outcome->model;
        report.final_working = working;
      }
      report.termination = V.empty() ? Termination::no_violators
                                     : Termination::sv_budget_exceeded;
      report.final_global_violators =
          scan_violators(report.final_model, ds, report.final_model.sv_indices,
                         cfg.viol_tol, cfg.scan_parallelism)
              .size();
      return report;
    } catch (const DegenerateModelError&) {
      continue;  // resample
    }
  }
  report.termination = Termination::degenerate;
  return report;
}

TrainReport train_weighted_resampling(const SparseDataset& ds,
                                      const TrainConfig& cfg) {
  if (ds.examples.empty())
    throw std::invalid_argument("train: empty dataset");
  if (cfg.max_outer_iters < 1)
    throw std::invalid_argument("train: max_outer_iters must be >= 1");

  const std::size_t n = ds.n();
  const std::size_t delta = std::max<std::size_t>(cfg.plan.k, 1);
  std::size_t r = 6 * delta * delta;
  if (r > n) r = n;  // clamp; degrades toward a full solve
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> weights(n, 1.0);
  TrainReport report;

  for (std::size_t round = 0; round < cfg.max_outer_iters; ++round) {
    auto t0 = Clock::now();
    std::vector<std::size_t> working;
    std::optional<SolveOutcome> outcome;
    for (int attempt = 0; attempt < 5 && !outcome; ++attempt) {
      working = weighted_sample(weights, r, rng());
      try {
        outcome = solve_working(ds, cfg, working, std::nullopt);
      } catch (const DegenerateModelError&) {
      }
    }
    if (!outcome) {
      report.termination = Termination::degenerate;
      return report;
    }
    auto V = scan_violators(outcome->model, ds, working, cfg.viol_tol,
                            cfg.scan_parallelism);
    report.iterations.push_back({working.size(), outcome->model.n_sv(),
                                 V.size(), outcome->dual_objective,
                                 millis_since(t0)});
    report.final_model = outcome->model;
    report.final_working = working;
    if (V.empty()) {
      report.termination = Termination::no_violators;
      report.final_global_violators =
          scan_violators(report.final_model, ds, report.final_model.sv_indices,
                         cfg.viol_tol, cfg.scan_parallelism)
              .size();
      return report;
    }
    double w_v = 0.0;
    for (std::size_t i : V) w_v += weights[i];
    const double w_d = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (w_v <= w_d / (3.0 * static_cast<double>(delta))) {
      for (std::size_t i : V) weights[i] *= 2.0;
      ++report.weight_doublings;
    } else {
      ++report.weight_rounds_skipped;
    }
  }
  report.termination = Termination::iter_cap;
  return report;
}

}  // namespace randsvm
