#include <cmath>
#include <cstdio>

#include <doctest.h>

#include "randsvm/smo.hpp"
#include "test_support.hpp"

using namespace randsvm;

namespace {

SparseDataset two_point_classify() {
  SparseDataset ds;
  ds.dim = 1;
  ds.examples.push_back({{{1, -1.0}}, -1.0});
  ds.examples.push_back({{{1, 1.0}}, 1.0});
  ds.weights = {1.0, 1.0};
  return ds;
}

SparseDataset two_point_regress() {
  SparseDataset ds;
  ds.dim = 1;
  ds.examples.push_back({{}, 0.0});  // (0, 0)
  ds.examples.push_back({{{1, 1.0}}, 1.0});
  ds.weights = {1.0, 1.0};
  return ds;
}

}  // namespace

TEST_CASE("two-point C-SVC: analytic solution at C=10") {
  auto ds = two_point_classify();
  KernelSpec lin{KernelFamily::linear, 1.0};
  auto out = solve_csvc(ds, {0, 1}, lin, 10.0, std::nullopt);
  CHECK(out.converged);
  CHECK(out.dual_objective == doctest::Approx(0.5).epsilon(1e-6));
  REQUIRE(out.model.n_sv() == 2);
  // alpha = 0.5 each, dual_coef = alpha * y
  for (std::size_t i = 0; i < 2; ++i) {
    const double y = ds.examples[out.model.sv_indices[i]].y;
    CHECK(out.model.dual_coef[i] == doctest::Approx(0.5 * y).epsilon(1e-5));
  }
  CHECK(out.model.bias == doctest::Approx(0.0).scale(1.0).epsilon(1e-5));
  // w = 1: f(x) = x
  CHECK(predict(out.model, {{1, 1.0}}) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(predict(out.model, {{1, -0.3}}) ==
        doctest::Approx(-0.3).epsilon(1e-4));
}

TEST_CASE("two-point C-SVC: box-clipped solution at C=0.1") {
  auto ds = two_point_classify();
  KernelSpec lin{KernelFamily::linear, 1.0};
  auto out = solve_csvc(ds, {0, 1}, lin, 0.1, std::nullopt);
  CHECK(out.dual_objective == doctest::Approx(0.18).epsilon(1e-6));
  for (double coef : out.model.dual_coef) CHECK(std::abs(coef) <= 0.1 + 1e-12);
}

TEST_CASE("two-point SVR: analytic tube solution") {
  auto ds = two_point_regress();
  KernelSpec lin{KernelFamily::linear, 1.0};
  auto out = solve_svr(ds, {0, 1}, lin, 100.0, 0.1, std::nullopt);
  CHECK(out.converged);
  CHECK(out.dual_objective == doctest::Approx(0.32).epsilon(1e-6));
  CHECK(out.model.bias == doctest::Approx(0.1).epsilon(1e-4));
  // w = 0.8: predictions sit on the tube edges
  CHECK(predict(out.model, {}) == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(predict(out.model, {{1, 1.0}}) == doctest::Approx(0.9).epsilon(1e-4));
}

TEST_CASE("single-class working set throws DegenerateModelError") {
  SparseDataset ds;
  ds.dim = 1;
  ds.examples.push_back({{{1, 1.0}}, 1.0});
  ds.examples.push_back({{{1, 2.0}}, 1.0});
  ds.weights = {1.0, 1.0};
  KernelSpec lin{KernelFamily::linear, 1.0};
  CHECK_THROWS_AS(solve_csvc(ds, {0, 1}, lin, 1.0, std::nullopt),
                  DegenerateModelError);
}

TEST_CASE("solution satisfies box and equality constraints") {
  auto ds = testsup::random_instance(60, 4, Task::classify, 11);
  KernelSpec g{KernelFamily::gaussian, 1.0};
  const double C = 2.0;
  auto out = solve_csvc(ds, testsup::all_indices(60), g, C, std::nullopt);
  CHECK(out.converged);
  double eq = 0.0;
  for (std::size_t i = 0; i < out.model.n_sv(); ++i) {
    const double y = ds.examples[out.model.sv_indices[i]].y;
    const double alpha = out.model.dual_coef[i] * y;  // recover alpha >= 0
    CHECK(alpha >= -1e-9);
    CHECK(alpha <= C + 1e-9);
    eq += out.model.dual_coef[i];
  }
  CHECK(eq == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("KKT conditions hold at the reported tolerance") {
  auto ds = testsup::random_instance(50, 3, Task::classify, 13);
  KernelSpec lin{KernelFamily::linear, 1.0};
  const double C = 1.0;
  SolveOptions opts;
  opts.kkt_tol = 1e-4;
  auto out = solve_csvc(ds, testsup::all_indices(50), lin, C, std::nullopt,
                        opts);
  CHECK(out.converged);
  // free SVs must sit on the margin within tolerance
  for (std::size_t i = 0; i < out.model.n_sv(); ++i) {
    const std::size_t idx = out.model.sv_indices[i];
    const double y = ds.examples[idx].y;
    const double alpha = out.model.dual_coef[i] * y;
    if (alpha > 1e-6 && alpha < C - 1e-6) {
      const double yf = y * predict(out.model, ds.examples[idx].x);
      CHECK(yf == doctest::Approx(1.0).epsilon(5e-3));
    }
  }
}

TEST_CASE("gaussian C-SVC fits a small twonorm sample") {
  auto ds = gen_twonorm(300, 17);
  KernelSpec g{KernelFamily::gaussian, 3.0};
  auto out = solve_csvc(ds, testsup::all_indices(300), g, 1.0, std::nullopt);
  CHECK(out.converged);
  std::size_t correct = 0;
  for (const auto& ex : ds.examples)
    if (ex.y * predict(out.model, ex.x) > 0) ++correct;
  CHECK(static_cast<double>(correct) / 300.0 > 0.95);
}

TEST_CASE("warm start reaches the same objective as a cold solve") {
  auto ds = gen_twonorm(200, 23);
  KernelSpec lin{KernelFamily::linear, 1.0};
  auto working = testsup::all_indices(200);

  std::vector<std::size_t> half;  // even indices: both classes represented
  for (std::size_t i = 0; i < 200; i += 2) half.push_back(i);
  auto partial = solve_csvc(ds, half, lin, 1.0, std::nullopt);

  auto warm = solve_csvc(ds, working, lin, 1.0, partial.model);
  auto cold = solve_csvc(ds, working, lin, 1.0, std::nullopt);
  CHECK(warm.converged);
  CHECK(warm.dual_objective ==
        doctest::Approx(cold.dual_objective).epsilon(1e-4));
  CHECK(warm.iterations > 0);
}

TEST_CASE("violates flags margin violations only") {
  auto ds = two_point_classify();
  KernelSpec lin{KernelFamily::linear, 1.0};
  auto out = solve_csvc(ds, {0, 1}, lin, 10.0, std::nullopt);

  SparseDataset probe;
  probe.dim = 1;
  probe.examples.push_back({{{1, 2.0}}, 1.0});   // y*f = 2, fine
  probe.examples.push_back({{{1, 0.5}}, 1.0});   // y*f = 0.5, violator
  probe.examples.push_back({{{1, 0.5}}, -1.0});  // y*f = -0.5, violator
  probe.weights = {1.0, 1.0, 1.0};
  CHECK_FALSE(violates(out.model, probe, 0, 1e-3));
  CHECK(violates(out.model, probe, 1, 1e-3));
  CHECK(violates(out.model, probe, 2, 1e-3));
}

TEST_CASE("violates uses the epsilon tube for regression") {
  auto ds = two_point_regress();
  KernelSpec lin{KernelFamily::linear, 1.0};
  auto out = solve_svr(ds, {0, 1}, lin, 100.0, 0.1, std::nullopt);
  SparseDataset probe;
  probe.dim = 1;
  probe.examples.push_back({{{1, 0.5}}, 0.5});  // f = 0.5, inside tube
  probe.examples.push_back({{{1, 0.5}}, 1.5});  // residual 1.0 > 0.1
  probe.weights = {1.0, 1.0};
  CHECK_FALSE(violates(out.model, probe, 0, 1e-3));
  CHECK(violates(out.model, probe, 1, 1e-3));
}

TEST_CASE("model files round-trip through save/load") {
  auto ds = gen_twonorm(120, 29);
  KernelSpec g{KernelFamily::gaussian, 3.0};
  auto out = solve_csvc(ds, testsup::all_indices(120), g, 1.5, std::nullopt);

  const std::string path = "smo_roundtrip.model";
  save_model(out.model, path);
  auto back = load_model(path);
  std::remove(path.c_str());

  CHECK(back.task == out.model.task);
  CHECK(back.C == out.model.C);
  CHECK(back.kernel.sigma == out.model.kernel.sigma);
  REQUIRE(back.n_sv() == out.model.n_sv());
  for (const auto& ex : ds.examples) {
    const double a = predict(out.model, ex.x);
    const double b = predict(back, ex.x);
    CHECK(b == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("regression model round-trips including the tube width") {
  auto ds = gen_friedman_regression(80, 31);
  KernelSpec g{KernelFamily::gaussian, 1.5};
  auto out = solve_svr(ds, testsup::all_indices(80), g, 10.0, 1.0,
                       std::nullopt);
  const std::string path = "svr_roundtrip.model";
  save_model(out.model, path);
  auto back = load_model(path);
  std::remove(path.c_str());
  CHECK(back.task == Task::regress);
  CHECK(back.epsilon_tube == doctest::Approx(1.0));
  CHECK(predict(back, ds.examples[0].x) ==
        doctest::Approx(predict(out.model, ds.examples[0].x)).epsilon(1e-12));
}

TEST_CASE("load_model rejects garbage") {
  const std::string path = "bogus.model";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("not-a-model v9\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_model(path), std::runtime_error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_model("does_not_exist.model"), std::runtime_error);
}
