// randsvm command line: gen / train / predict / bench / lab.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randsvm/bench.hpp"
#include "randsvm/bounds.hpp"
#include "randsvm/projection.hpp"
#include "randsvm/train.hpp"

namespace {

using randsvm::BenchConfig;
using randsvm::KernelFamily;
using randsvm::SparseDataset;
using randsvm::Task;

struct CommonTrainArgs {
  std::string data_path;
  std::string gen_name;
  std::size_t gen_n = 20000;
  std::string task = "classify";
  double epsilon = 0.1;
  std::string kernel = "linear";
  std::optional<double> sigma;
  double C = 1.0;
  std::string algo = "violator";
  std::string plan_kind = "nonseparable";
  double eps_jl = 0.2;
  std::optional<double> gamma;
  double delta = 0.9;
  double kappa = 0.0;
  std::optional<double> margin_lb;
  double c_mult = 2.0;
  std::optional<std::size_t> k_override;
  double kkt_tol = 1e-3;
  double viol_tol = 1e-3;
  std::size_t max_iters = 200;
  std::uint64_t seed = 0;
  std::string model_out;
  std::string report_out;
};

SparseDataset generate(const std::string& name, std::size_t n,
                       std::uint64_t seed) {
  if (name == "twonorm") return randsvm::gen_twonorm(n, seed);
  if (name == "ringnorm") return randsvm::gen_ringnorm(n, seed);
  if (name == "checkerboard") return randsvm::gen_checkerboard(n, seed);
  if (name == "friedman") return randsvm::gen_friedman_regression(n, seed);
  throw CLI::ValidationError("--gen", "unknown generator: " + name);
}

randsvm::KernelSpec parse_kernel(const std::string& kernel,
                                 const std::optional<double>& sigma) {
  randsvm::KernelSpec spec;
  if (kernel == "linear") {
    spec.family = KernelFamily::linear;
  } else if (kernel == "gaussian") {
    spec.family = KernelFamily::gaussian;
    if (!sigma)
      throw CLI::RequiredError("--sigma (required with --kernel gaussian)");
    spec.sigma = *sigma;
  } else {
    throw CLI::ValidationError("--kernel", "must be linear or gaussian");
  }
  return spec;
}

int cmd_train(const CommonTrainArgs& a) {
  SparseDataset train = a.data_path.empty()
                            ? generate(a.gen_name, a.gen_n, a.seed)
                            : randsvm::load_libsvm(a.data_path);
  const Task task = a.task == "regress" ? Task::regress : Task::classify;
  const auto kernel = parse_kernel(a.kernel, a.sigma);

  randsvm::PlanParams pp;
  pp.eps_jl = a.eps_jl;
  pp.gamma = a.gamma;
  pp.delta = a.delta;
  pp.kappa = a.kappa;
  pp.margin_lb = a.margin_lb;
  pp.c_mult = a.c_mult;
  pp.k_override = a.k_override;
  randsvm::PlanKind kind;
  if (a.plan_kind == "separable")
    kind = randsvm::PlanKind::separable;
  else if (a.plan_kind == "nonseparable")
    kind = randsvm::PlanKind::nonseparable;
  else if (a.plan_kind == "regression")
    kind = randsvm::PlanKind::regression;
  else
    throw CLI::ValidationError("--plan", "must be separable|nonseparable|regression");
  if (kind == randsvm::PlanKind::regression) {
    pp.tube_eps = a.epsilon;
    if (!pp.gamma) pp.gamma = 0.5;
  }
  if (task == Task::regress && kind != randsvm::PlanKind::regression &&
      !a.k_override)
    throw CLI::ValidationError("--plan", "regression task needs --plan regression");

  randsvm::TrainConfig tc;
  tc.plan = randsvm::make_plan(kind, randsvm::stats(train), pp);
  tc.task = task;
  tc.epsilon_tube = a.epsilon;
  tc.C = a.C;
  tc.kernel = kernel;
  tc.kkt_tol = a.kkt_tol;
  tc.viol_tol = a.viol_tol;
  tc.max_outer_iters = a.max_iters;
  tc.seed = a.seed;
  tc.scan_parallelism = 0;  // filled below

  randsvm::TrainReport report;
  if (a.algo == "violator") {
    tc.scan_parallelism = 8;
    report = randsvm::train_violator_resampling(train, tc);
  } else if (a.algo == "weighted") {
    tc.scan_parallelism = 8;
    report = randsvm::train_weighted_resampling(train, tc);
  } else if (a.algo == "full") {
    std::vector<std::size_t> all(train.n());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    randsvm::SolveOptions opts;
    opts.kkt_tol = a.kkt_tol;
    auto outcome = task == Task::classify
                       ? randsvm::solve_csvc(train, all, kernel, a.C,
                                             std::nullopt, opts)
                       : randsvm::solve_svr(train, all, kernel, a.C, a.epsilon,
                                            std::nullopt, opts);
    report.final_model = std::move(outcome.model);
    report.termination = randsvm::Termination::no_violators;
    report.iterations.push_back({train.n(), report.final_model.n_sv(), 0,
                                 outcome.dual_objective, 0.0});
  } else {
    throw CLI::ValidationError("--algo", "must be violator|weighted|full");
  }

  if (report.termination == randsvm::Termination::degenerate) {
    std::cerr << "training degenerate: could not draw a two-class sample\n";
    return 1;
  }
  if (!a.model_out.empty()) randsvm::save_model(report.final_model, a.model_out);
  if (!a.report_out.empty()) randsvm::write_report_csv(report, a.report_out);
  std::cout << "termination=" << randsvm::termination_name(report.termination)
            << " outer_iters=" << report.iterations.size()
            << " sv=" << report.final_model.n_sv() << " plan_k=" << tc.plan.k
            << " plan_r=" << tc.plan.r << '\n';
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
  const auto model = randsvm::load_model(model_path);
  const auto data = randsvm::load_libsvm(data_path);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "cannot open output file: " << out_path << '\n';
      return 1;
    }
    out = &file;
  }
  std::vector<double> preds, labels;
  for (const auto& ex : data.examples) {
    const double f = randsvm::predict(model, ex.x);
    if (model.task == Task::classify)
      *out << (f >= 0 ? "+1" : "-1") << '\n';
    else
      *out << f << '\n';
    preds.push_back(f);
    labels.push_back(ex.y);
  }
  if (!data.examples.empty()) {
    if (model.task == Task::classify) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < preds.size(); ++i)
        if ((preds[i] >= 0 ? 1.0 : -1.0) == labels[i]) ++correct;
      std::cerr << "accuracy=" << static_cast<double>(correct) / preds.size()
                << '\n';
    } else {
      double mse = 0.0;
      for (std::size_t i = 0; i < preds.size(); ++i)
        mse += (preds[i] - labels[i]) * (preds[i] - labels[i]);
      mse /= static_cast<double>(preds.size());
      const double rho = randsvm::pearson(preds, labels);
      double pv = 0.0, pm = 0.0;
      for (double p : preds) pm += p;
      pm /= static_cast<double>(preds.size());
      for (double p : preds) pv += (p - pm) * (p - pm);
      if (pv == 0.0)
        std::cerr << "warning: constant predictions, rho reported as 0\n";
      std::cerr << "mse=" << mse << " rho=" << rho << '\n';
    }
  }
  return 0;
}

void apply_bench_config_file(BenchConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open bench config: " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains(cfg.dataset)) return;
  const auto& d = j[cfg.dataset];
  if (d.contains("kernel"))
    cfg.kernel.family = d["kernel"] == "gaussian" ? KernelFamily::gaussian
                                                  : KernelFamily::linear;
  if (d.contains("sigma")) cfg.kernel.sigma = d["sigma"];
  if (d.contains("C")) cfg.C = d["C"];
  if (d.contains("epsilon")) cfg.epsilon_tube = d["epsilon"];
  if (d.contains("k")) cfg.plan.k_override = d["k"].get<std::size_t>();
  if (d.contains("c_mult")) cfg.plan.c_mult = d["c_mult"];
  if (d.contains("train_n")) cfg.train_n = d["train_n"].get<std::size_t>();
  if (d.contains("test_n")) cfg.test_n = d["test_n"].get<std::size_t>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized SVM training toolkit"};
  app.require_subcommand(1);
  std::uint64_t global_seed = 0;
  bool quiet = false;
  app.add_option("--seed", global_seed, "Global RNG seed");
  app.add_flag("--quiet", quiet, "Suppress informational output");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  std::string gen_name = "twonorm", gen_out;
  std::size_t gen_n = 1000;
  gen->add_option("--name", gen_name,
                  "twonorm|ringnorm|checkerboard|friedman")->required();
  gen->add_option("--n", gen_n, "Number of examples")->required();
  gen->add_option("--out", gen_out, "Output libsvm file")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a model");
  CommonTrainArgs ta;
  train->add_option("--data", ta.data_path, "Training data (libsvm format)");
  train->add_option("--gen", ta.gen_name, "Generate training data instead");
  train->add_option("--n", ta.gen_n, "Generated training size");
  train->add_option("--task", ta.task, "classify|regress");
  train->add_option("--epsilon", ta.epsilon, "Regression tube half-width");
  train->add_option("--kernel", ta.kernel, "linear|gaussian");
  train->add_option("--sigma", ta.sigma, "Gaussian kernel width");
  train->add_option("--C", ta.C, "Soft-margin penalty");
  train->add_option("--algo", ta.algo, "violator|weighted|full");
  train->add_option("--plan", ta.plan_kind, "separable|nonseparable|regression");
  train->add_option("--eps-jl", ta.eps_jl, "Projection distortion epsilon");
  train->add_option("--gamma", ta.gamma, "Margin distortion gamma");
  train->add_option("--delta", ta.delta, "Confidence delta");
  train->add_option("--kappa", ta.kappa, "Almost-separability fraction");
  train->add_option("--margin-lb", ta.margin_lb, "Lower bound on the margin");
  train->add_option("--c-mult", ta.c_mult, "Sample size multiplier r = c*k");
  train->add_option("--k-override", ta.k_override, "Manual k, bypasses estimators");
  train->add_option("--kkt-tol", ta.kkt_tol, "Inner solver KKT tolerance");
  train->add_option("--viol-tol", ta.viol_tol, "Violator scan tolerance");
  train->add_option("--max-iters", ta.max_iters, "Outer iteration cap");
  train->add_option("--out", ta.model_out, "Model output path");
  train->add_option("--report", ta.report_out, "Per-iteration report CSV");

  // predict
  auto* predict = app.add_subcommand("predict", "Predict with a saved model");
  std::string p_model, p_data, p_out;
  predict->add_option("--model", p_model, "Model file")->required();
  predict->add_option("--data", p_data, "Data file (libsvm)")->required();
  predict->add_option("--out", p_out, "Predictions output (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Timing/accuracy comparison runs");
  std::string b_dataset = "twonorm", b_algos = "violator,full", b_seeds = "1,2,3";
  std::string b_out, b_config;
  std::optional<std::size_t> b_train_n, b_test_n, b_k;
  std::optional<double> b_sigma, b_C;
  bench->add_option("--dataset", b_dataset,
                    "twonorm|ringnorm|checkerboard|friedman");
  bench->add_option("--algos", b_algos, "Comma list of violator|weighted|full");
  bench->add_option("--seeds", b_seeds, "Comma list of seeds");
  bench->add_option("--train-n", b_train_n, "Training set size");
  bench->add_option("--test-n", b_test_n, "Test set size");
  bench->add_option("--sigma", b_sigma, "Override kernel sigma");
  bench->add_option("--C", b_C, "Override C");
  bench->add_option("--k-override", b_k, "Override plan k");
  bench->add_option("--config", b_config, "Bench defaults JSON");
  bench->add_option("--out", b_out, "CSV output path (default stdout)");

  // lab
  auto* lab = app.add_subcommand("lab", "Random-projection property checks");
  std::string l_check = "norm";
  std::size_t l_d = 1000, l_k = 200, l_trials = 10000, l_n = 300;
  double l_eps = 0.3, l_gamma = 0.5, l_delta = 0.5, l_margin = 0.35;
  lab->add_option("--check", l_check, "norm|dot|margin")->required();
  lab->add_option("--d", l_d, "Source dimension");
  lab->add_option("--k", l_k, "Target dimension");
  lab->add_option("--eps", l_eps, "Distortion epsilon");
  lab->add_option("--gamma", l_gamma, "Margin distortion (margin check)");
  lab->add_option("--delta", l_delta, "Confidence (margin check)");
  lab->add_option("--trials", l_trials, "Trial count");
  lab->add_option("--n", l_n, "Instance size (margin check)");
  lab->add_option("--margin", l_margin, "Instance margin (margin check)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      randsvm::save_libsvm(generate(gen_name, gen_n, global_seed), gen_out);
      if (!quiet) std::cout << "wrote " << gen_n << " examples to " << gen_out << '\n';
      return 0;
    }
    if (train->parsed()) {
      ta.seed = global_seed;
      if (ta.gen_name == "friedman" && ta.task == "classify" &&
          !train->count("--task")) {
        ta.task = "regress";
        ta.plan_kind = "regression";
        ta.epsilon = 1.0;
      }
      return cmd_train(ta);
    }
    if (predict->parsed()) return cmd_predict(p_model, p_data, p_out);
    if (bench->parsed()) {
      BenchConfig cfg = randsvm::default_bench_config(b_dataset);
      if (!b_config.empty()) apply_bench_config_file(cfg, b_config);
      if (b_train_n) cfg.train_n = *b_train_n;
      if (b_test_n) cfg.test_n = *b_test_n;
      if (b_sigma) cfg.kernel.sigma = *b_sigma;
      if (b_C) cfg.C = *b_C;
      if (b_k) cfg.plan.k_override = *b_k;
      std::vector<std::string> algos;
      std::vector<std::uint64_t> seeds;
      std::stringstream sa(b_algos), ss(b_seeds);
      std::string tok;
      while (std::getline(sa, tok, ',')) algos.push_back(tok);
      while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
      const auto rows = randsvm::run_bench(cfg, algos, seeds);
      const std::string csv = randsvm::bench_csv(rows);
      if (b_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(b_out);
        out << csv;
      }
      return 0;
    }
    if (lab->parsed()) {
      randsvm::TrialSummary s;
      if (l_check == "norm") {
        s = randsvm::check_norm_preservation(l_d, l_k, l_eps, l_trials,
                                             global_seed);
      } else if (l_check == "dot") {
        s = randsvm::check_dot_preservation(l_d, l_k, l_eps, l_trials,
                                            global_seed);
      } else if (l_check == "margin") {
        auto ds = randsvm::gen_separable(l_n, static_cast<int>(l_d), l_margin,
                                         global_seed);
        auto mc = randsvm::check_margin_preservation(ds, l_gamma, l_delta,
                                                     l_trials, global_seed);
        s = mc.summary;
      } else {
        std::cerr << "unknown check: " << l_check << '\n';
        return 2;
      }
      std::cout << "check,trials,failures,rate,bound\n"
                << l_check << ',' << s.trials << ',' << s.failures << ','
                << s.empirical_rate() << ',' << s.bound << '\n';
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
