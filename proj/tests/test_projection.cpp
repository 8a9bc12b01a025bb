#include <cmath>
#include <numeric>

#include <doctest.h>

#include "randsvm/projection.hpp"
#include "test_support.hpp"

using namespace randsvm;

TEST_CASE("make_projection shape and reproducibility") {
  auto R = make_projection(30, 7, 123);
  CHECK(R.d == 30);
  CHECK(R.k == 7);
  REQUIRE(R.entries.size() == 210);
  auto R2 = make_projection(30, 7, 123);
  CHECK(R.entries == R2.entries);
  auto R3 = make_projection(30, 7, 124);
  CHECK(R.entries != R3.entries);

  // entries look standard normal in aggregate
  auto big = make_projection(200, 200, 5);
  double mean = std::accumulate(big.entries.begin(), big.entries.end(), 0.0) /
                static_cast<double>(big.entries.size());
  double var = 0.0;
  for (double e : big.entries) var += (e - mean) * (e - mean);
  var /= static_cast<double>(big.entries.size());
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("project applies (R'u)/sqrt(k)") {
  ProjectionMatrix R;
  R.d = 2;
  R.k = 2;
  R.entries = {1.0, 2.0, 3.0, 4.0};  // rows (1,2) and (3,4)
  auto p = project(R, {1.0, 1.0});
  const double s = std::sqrt(2.0);
  CHECK(p[0] == doctest::Approx(4.0 / s));
  CHECK(p[1] == doctest::Approx(6.0 / s));

  CHECK_THROWS_AS(project(R, {1.0}), std::invalid_argument);
}

TEST_CASE("projection preserves norms on average") {
  auto R = make_projection(100, 400, 9);
  std::vector<double> u(100, 0.0);
  u[3] = 1.0;
  u[17] = -2.0;
  const double n2 = 5.0;
  auto p = project(R, u);
  double pn2 = 0.0;
  for (double v : p) pn2 += v * v;
  // k = 400 concentrates ||u'||^2 within ~15% whp
  CHECK(pn2 / n2 > 0.7);
  CHECK(pn2 / n2 < 1.3);
}

TEST_CASE("norm-preservation failure rate stays under the bound") {
  const double eps = 0.4;
  const std::size_t k = 120;
  auto s = check_norm_preservation(50, k, eps, 2000, 77);
  CHECK(s.trials == 2000);
  const double expect = 2.0 * std::exp(-(eps * eps - eps * eps * eps) * k / 4.0);
  CHECK(s.bound == doctest::Approx(expect).epsilon(1e-12));
  CHECK(s.empirical_rate() <= s.bound);
}

TEST_CASE("dot-preservation failure rate stays under the bound") {
  const double eps = 0.5;
  const std::size_t k = 150;
  auto s = check_dot_preservation(60, k, eps, 2000, 99);
  CHECK(s.bound == doctest::Approx(4.0 * std::exp(-eps * eps * k / 8.0)));
  CHECK(s.empirical_rate() <= s.bound);
}

TEST_CASE("projection checks are deterministic and thread-count independent") {
  auto a = check_norm_preservation(40, 60, 0.5, 500, 13);
  auto b = check_norm_preservation(40, 60, 0.5, 500, 13);
  CHECK(a.failures == b.failures);
}

TEST_CASE("projection checks validate parameters") {
  CHECK_THROWS_AS(check_norm_preservation(10, 5, 0.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_norm_preservation(10, 5, 1.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_norm_preservation(0, 5, 0.5, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_norm_preservation(10, 0, 0.5, 100, 1),
                  std::invalid_argument);
}

TEST_CASE("orthogonal_extension zero-pads and keeps the bias") {
  auto [w, b] = orthogonal_extension({1.0, -2.0}, 0.3, 5);
  REQUIRE(w.size() == 5);
  CHECK(w[0] == 1.0);
  CHECK(w[1] == -2.0);
  CHECK(w[2] == 0.0);
  CHECK(w[4] == 0.0);
  CHECK(b == 0.3);
  CHECK_THROWS_AS(orthogonal_extension({1.0, 2.0, 3.0}, 0.0, 2),
                  std::invalid_argument);
}

TEST_CASE("margin preservation holds on a separable instance") {
  auto ds = gen_separable(120, 12, 0.3, 7);
  auto check = check_margin_preservation(ds, 0.5, 0.5, 8, 11);
  CHECK(check.l_star > 0.0);
  CHECK(check.k >= 1);
  CHECK(check.summary.trials == 8);
  CHECK(check.summary.bound == doctest::Approx(0.5));
  CHECK(check.min_trial_margin > 0.0);
  CHECK(check.max_trial_margin >= check.min_trial_margin);
  // delta = 0.5 over 8 trials: all trials passing is the expected outcome
  CHECK(check.summary.failures <= 4);
}

TEST_CASE("margin preservation rejects inseparable input") {
  auto ds = testsup::flip_fraction(gen_separable(100, 8, 0.2, 3), 0.2, 4);
  CHECK_THROWS_AS(check_margin_preservation(ds, 0.5, 0.5, 2, 1),
                  std::invalid_argument);
}

TEST_CASE("margin preservation refuses oversized datasets") {
  auto ds = gen_separable(501, 5, 0.2, 2);
  CHECK_THROWS_AS(check_margin_preservation(ds, 0.5, 0.5, 2, 1),
                  std::invalid_argument);
}
