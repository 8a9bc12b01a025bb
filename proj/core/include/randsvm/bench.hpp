#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randsvm/bounds.hpp"
#include "randsvm/train.hpp"

namespace randsvm {

// One bench scenario: dataset source, solver parameters, sampling plan.
struct BenchConfig {
  std::string dataset = "twonorm";  // twonorm|ringnorm|checkerboard|friedman|file
  std::string train_path;           // dataset == "file"
  std::string test_path;
  std::size_t train_n = 20000;
  std::size_t test_n = 2000;
  Task task = Task::classify;
  KernelSpec kernel;
  double C = 1.0;
  double epsilon_tube = 0.0;
  PlanKind plan_kind = PlanKind::nonseparable;
  PlanParams plan;
  double kkt_tol = 1e-3;
  double viol_tol = 1e-3;
  std::size_t max_outer_iters = 200;
  std::size_t scan_parallelism = 0;  // 0 -> hardware concurrency
};

// Tuned desk-scale defaults per synthetic dataset (kernel, C, plan size).
BenchConfig default_bench_config(const std::string& dataset);

struct BenchRow {
  std::string dataset;
  std::string algo;  // violator|weighted|full
  std::uint64_t seed = 0;
  std::size_t train_n = 0;
  double seconds = 0.0;     // training call only
  double metric = 0.0;      // accuracy (classify) or MSE (regress)
  double rho = 0.0;         // Pearson correlation, regression only
  std::string termination;  // sampling algorithms only
};

BenchRow run_bench_once(const BenchConfig& cfg, const std::string& algo,
                        std::uint64_t seed);

std::vector<BenchRow> run_bench(const BenchConfig& cfg,
                                const std::vector<std::string>& algos,
                                const std::vector<std::uint64_t>& seeds);

// `dataset,algo,seed,trainN,seconds,accuracy_or_mse,rho` plus mean/std rows
std::string bench_csv(const std::vector<BenchRow>& rows);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

SparseDataset make_bench_dataset(const BenchConfig& cfg, std::size_t n,
                                 std::uint64_t seed);

}  // namespace randsvm
