#include "randsvm/bench.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace randsvm {

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  return z ^ (z >> 31);
}

}  // namespace

BenchConfig default_bench_config(const std::string& dataset) {
  BenchConfig cfg;
  cfg.dataset = dataset;
  cfg.plan.delta = 0.9;
  cfg.plan.eps_jl = 0.2;
  if (dataset == "twonorm") {
    cfg.task = Task::classify;
    cfg.kernel = {KernelFamily::gaussian, 5.0};
    cfg.C = 1.0;
    cfg.plan_kind = PlanKind::nonseparable;
    cfg.plan.k_override = 1000;
    cfg.train_n = 20000;
    cfg.test_n = 2000;
  } else if (dataset == "ringnorm") {
    cfg.task = Task::classify;
    cfg.kernel = {KernelFamily::gaussian, 3.0};
    cfg.C = 1.0;
    cfg.plan_kind = PlanKind::nonseparable;
    cfg.plan.k_override = 2000;
    cfg.train_n = 20000;
    cfg.test_n = 2000;
  } else if (dataset == "checkerboard") {
    cfg.task = Task::classify;
    cfg.kernel = {KernelFamily::gaussian, 0.3};
    cfg.C = 10.0;
    cfg.plan_kind = PlanKind::nonseparable;
    cfg.plan.k_override = 2500;
    cfg.train_n = 20000;
    cfg.test_n = 2000;
  } else if (dataset == "friedman") {
    cfg.task = Task::regress;
    cfg.kernel = {KernelFamily::gaussian, 1.5};
    cfg.C = 10.0;
    cfg.epsilon_tube = 1.0;
    cfg.plan_kind = PlanKind::regression;
    cfg.plan.gamma = 0.5;
    cfg.plan.delta = 0.1;
    cfg.plan.tube_eps = 1.0;
    cfg.plan.k_override = 1500;
    cfg.train_n = 10000;
    cfg.test_n = 2000;
  } else if (dataset == "file") {
    // caller fills paths and parameters
  } else {
    throw std::invalid_argument("unknown bench dataset: " + dataset);
  }
  return cfg;
}

SparseDataset make_bench_dataset(const BenchConfig& cfg, std::size_t n,
                                 std::uint64_t seed) {
  if (cfg.dataset == "twonorm") return gen_twonorm(n, seed);
  if (cfg.dataset == "ringnorm") return gen_ringnorm(n, seed);
  if (cfg.dataset == "checkerboard") return gen_checkerboard(n, seed);
  if (cfg.dataset == "friedman") return gen_friedman_regression(n, seed);
  throw std::invalid_argument("no generator for dataset: " + cfg.dataset);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("pearson: mismatched inputs");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;  // degenerate variance convention
  return sab / std::sqrt(saa * sbb);
}

BenchRow run_bench_once(const BenchConfig& cfg, const std::string& algo,
                        std::uint64_t seed) {
  SparseDataset train, test;
  if (cfg.dataset == "file") {
    train = load_libsvm(cfg.train_path);
    test = load_libsvm(cfg.test_path.empty() ? cfg.train_path : cfg.test_path);
  } else {
    train = make_bench_dataset(cfg, cfg.train_n, seed);
    test = make_bench_dataset(cfg, cfg.test_n, mix_seed(seed, 0x7e57));
  }

  const std::size_t parallelism =
      cfg.scan_parallelism ? cfg.scan_parallelism
                           : std::max(1u, std::thread::hardware_concurrency());

  BenchRow row;
  row.dataset = cfg.dataset;
  row.algo = algo;
  row.seed = seed;
  row.train_n = train.n();

  SvmModel model;
  const auto t0 = std::chrono::steady_clock::now();
  if (algo == "full") {
    std::vector<std::size_t> all(train.n());
    std::iota(all.begin(), all.end(), std::size_t{0});
    SolveOptions opts;
    opts.kkt_tol = cfg.kkt_tol;
    auto outcome =
        cfg.task == Task::classify
            ? solve_csvc(train, all, cfg.kernel, cfg.C, std::nullopt, opts)
            : solve_svr(train, all, cfg.kernel, cfg.C, cfg.epsilon_tube,
                        std::nullopt, opts);
    model = std::move(outcome.model);
    row.termination = outcome.converged ? "converged" : "iterCap";
  } else if (algo == "violator" || algo == "weighted") {
    TrainConfig tc;
    tc.plan = make_plan(cfg.plan_kind, stats(train), cfg.plan);
    tc.task = cfg.task;
    tc.epsilon_tube = cfg.epsilon_tube;
    tc.C = cfg.C;
    tc.kernel = cfg.kernel;
    tc.kkt_tol = cfg.kkt_tol;
    tc.viol_tol = cfg.viol_tol;
    tc.max_outer_iters = cfg.max_outer_iters;
    tc.seed = seed;
    tc.scan_parallelism = parallelism;
    auto report = algo == "violator" ? train_violator_resampling(train, tc)
                                     : train_weighted_resampling(train, tc);
    model = std::move(report.final_model);
    row.termination = termination_name(report.termination);
  } else {
    throw std::invalid_argument("unknown algorithm: " + algo);
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();

  const Predictor fx(model);
  if (cfg.task == Task::classify) {
    std::size_t correct = 0;
    for (const auto& ex : test.examples) {
      const double f = fx(ex.x);
      if ((f >= 0 ? 1.0 : -1.0) == ex.y) ++correct;
    }
    row.metric = static_cast<double>(correct) / static_cast<double>(test.n());
  } else {
    std::vector<double> preds, labels;
    preds.reserve(test.n());
    labels.reserve(test.n());
    double mse = 0.0;
    for (const auto& ex : test.examples) {
      const double f = fx(ex.x);
      preds.push_back(f);
      labels.push_back(ex.y);
      mse += (f - ex.y) * (f - ex.y);
    }
    row.metric = mse / static_cast<double>(test.n());
    row.rho = pearson(preds, labels);
  }
  return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg,
                                const std::vector<std::string>& algos,
                                const std::vector<std::uint64_t>& seeds) {
  std::vector<BenchRow> rows;
  for (std::uint64_t seed : seeds)
    for (const auto& algo : algos) rows.push_back(run_bench_once(cfg, algo, seed));
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "dataset,algo,seed,trainN,seconds,accuracy_or_mse,rho\n";
  std::map<std::string, std::vector<const BenchRow*>> by_algo;
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.algo << ',' << r.seed << ',' << r.train_n
        << ',' << r.seconds << ',' << r.metric << ',' << r.rho << '\n';
    by_algo[r.dataset + "/" + r.algo].push_back(&r);
  }
  for (const auto& [key, group] : by_algo) {
    const double n = static_cast<double>(group.size());
    double ms = 0.0, mm = 0.0;
    for (const auto* r : group) {
      ms += r->seconds;
      mm += r->metric;
    }
    ms /= n;
    mm /= n;
    double vs = 0.0, vm = 0.0;
    for (const auto* r : group) {
      vs += (r->seconds - ms) * (r->seconds - ms);
      vm += (r->metric - mm) * (r->metric - mm);
    }
    out << "# " << key << " mean_seconds=" << ms << " std_seconds="
        << std::sqrt(vs / n) << " mean_metric=" << mm << " std_metric="
        << std::sqrt(vm / n) << '\n';
  }
  return out.str();
}

}  // namespace randsvm
