#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "randsvm/train.hpp"
#include "test_support.hpp"

using namespace randsvm;

namespace {

TrainConfig linear_config(std::size_t k, std::size_t r, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.plan.k = k;
  cfg.plan.r = r;
  cfg.kernel = {KernelFamily::linear, 1.0};
  cfg.C = 10.0;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("termination names") {
  CHECK(std::string(termination_name(Termination::no_violators)) ==
        "noViolators");
  CHECK(std::string(termination_name(Termination::sv_budget_exceeded)) ==
        "svBudgetExceeded");
  CHECK(std::string(termination_name(Termination::iter_cap)) == "iterCap");
  CHECK(std::string(termination_name(Termination::degenerate)) == "degenerate");
}

TEST_CASE("violator resampling clears a separable instance") {
  auto ds = gen_separable(600, 8, 0.15, 5);
  auto cfg = linear_config(200, 60, 11);
  cfg.C = 1000.0;  // effectively hard margin so the data is fully cleared
  auto report = train_violator_resampling(ds, cfg);
  CHECK(report.termination == Termination::no_violators);
  CHECK(report.final_global_violators == 0);
  CHECK(report.iterations.size() >= 1);
  CHECK(report.final_model.n_sv() >= 1);

  // the returned model classifies the whole dataset within the margin rule
  std::size_t correct = 0;
  for (const auto& ex : ds.examples)
    if (ex.y * predict(report.final_model, ex.x) > 0) ++correct;
  CHECK(correct == ds.n());
}

TEST_CASE("working sets stay sorted, unique, and within range") {
  auto ds = gen_separable(400, 6, 0.1, 9);
  auto cfg = linear_config(150, 50, 3);
  auto report = train_violator_resampling(ds, cfg);
  CHECK(std::is_sorted(report.final_working.begin(),
                       report.final_working.end()));
  CHECK(std::adjacent_find(report.final_working.begin(),
                           report.final_working.end()) ==
        report.final_working.end());
  for (std::size_t i : report.final_working) CHECK(i < ds.n());
}

TEST_CASE("tiny SV budget trips svBudgetExceeded on noisy data") {
  auto ds = testsup::flip_fraction(gen_separable(500, 6, 0.05, 21), 0.15, 77);
  auto cfg = linear_config(3, 40, 13);
  cfg.C = 1.0;
  auto report = train_violator_resampling(ds, cfg);
  CHECK(report.termination == Termination::sv_budget_exceeded);
  CHECK(report.final_model.n_sv() >= 3);
}

TEST_CASE("outer iteration cap is honored") {
  auto ds = testsup::flip_fraction(gen_separable(500, 6, 0.05, 22), 0.15, 78);
  auto cfg = linear_config(400, 30, 17);
  cfg.C = 1.0;
  cfg.max_outer_iters = 1;
  auto report = train_violator_resampling(ds, cfg);
  CHECK(report.termination == Termination::iter_cap);
  CHECK(report.iterations.size() == 1);
}

TEST_CASE("violator resampling validates its inputs") {
  SparseDataset empty;
  auto cfg = linear_config(10, 5, 1);
  CHECK_THROWS_AS(train_violator_resampling(empty, cfg),
                  std::invalid_argument);

  auto ds = gen_separable(50, 4, 0.2, 1);
  auto big = linear_config(10, 51, 1);
  CHECK_THROWS_AS(train_violator_resampling(ds, big), std::invalid_argument);

  cfg.max_outer_iters = 0;
  CHECK_THROWS_AS(train_violator_resampling(ds, cfg), std::invalid_argument);
}

TEST_CASE("training is deterministic for a fixed seed") {
  auto ds = gen_separable(400, 6, 0.12, 33);
  auto cfg = linear_config(150, 50, 101);
  auto a = train_violator_resampling(ds, cfg);
  auto b = train_violator_resampling(ds, cfg);
  CHECK(a.termination == b.termination);
  CHECK(a.iterations.size() == b.iterations.size());
  CHECK(a.final_working == b.final_working);
  CHECK(a.final_model.bias == b.final_model.bias);
  for (std::size_t i = 0; i < a.iterations.size(); ++i)
    CHECK(a.iterations[i].dual_objective == b.iterations[i].dual_objective);
}

TEST_CASE("scan_violators matches the brute-force definition") {
  auto ds = gen_twonorm(3000, 55);
  KernelSpec lin{KernelFamily::linear, 1.0};
  std::vector<std::size_t> sub;  // stride past the class blocks
  for (std::size_t i = 0; i < 3000; i += 30) sub.push_back(i);
  auto out = solve_csvc(ds, sub, lin, 1.0, std::nullopt);

  std::vector<std::size_t> exclude = {5, 10, 2999};
  for (std::size_t p : {std::size_t{1}, std::size_t{4}}) {
    auto scanned = scan_violators(out.model, ds, exclude, 1e-3, p);
    std::vector<std::size_t> brute;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      if (i == 5 || i == 10 || i == 2999) continue;
      if (violates(out.model, ds, i, 1e-3)) brute.push_back(i);
    }
    CHECK(scanned == brute);
    CHECK(std::is_sorted(scanned.begin(), scanned.end()));
  }
}

TEST_CASE("report CSV has a header and one row per iteration") {
  auto ds = gen_separable(300, 5, 0.15, 8);
  auto cfg = linear_config(120, 40, 19);
  auto report = train_violator_resampling(ds, cfg);
  const std::string path = "train_report.csv";
  write_report_csv(report, path);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "iter,working,sv,violators,objective,ms");
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == report.iterations.size());
  std::remove(path.c_str());
}

TEST_CASE("weighted resampling clears a separable instance") {
  auto ds = gen_separable(300, 6, 0.2, 44);
  auto cfg = linear_config(5, 0, 23);  // Delta = 5 -> r = min(150, n)
  cfg.C = 1000.0;
  cfg.max_outer_iters = 100;
  auto report = train_weighted_resampling(ds, cfg);
  CHECK(report.termination == Termination::no_violators);
  CHECK(report.final_global_violators == 0);
  // every non-terminal round either doubled or skipped
  CHECK(report.weight_doublings + report.weight_rounds_skipped ==
        report.iterations.size() - 1);
}

TEST_CASE("weighted resampling caps its rounds") {
  auto ds = testsup::flip_fraction(gen_separable(300, 6, 0.05, 45), 0.2, 9);
  auto cfg = linear_config(2, 0, 29);  // r = 24, noise keeps violators alive
  cfg.C = 1.0;
  cfg.max_outer_iters = 3;
  auto report = train_weighted_resampling(ds, cfg);
  CHECK(report.termination == Termination::iter_cap);
  CHECK(report.iterations.size() == 3);
}

TEST_CASE("regression training runs end to end") {
  auto ds = gen_friedman_regression(400, 61);
  TrainConfig cfg;
  cfg.task = Task::regress;
  cfg.epsilon_tube = 3.0;
  cfg.kernel = {KernelFamily::gaussian, 1.5};
  cfg.C = 10.0;
  cfg.plan.k = 350;
  cfg.plan.r = 120;
  cfg.seed = 31;
  auto report = train_violator_resampling(ds, cfg);
  CHECK(report.termination != Termination::degenerate);
  CHECK(report.final_model.task == Task::regress);
  CHECK(report.final_model.n_sv() >= 1);
  if (report.termination == Termination::no_violators)
    CHECK(report.final_global_violators == 0);
}
