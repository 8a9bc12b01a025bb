#include "randsvm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace randsvm {

double dot(const SparseVector& a, const SparseVector& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].index == b[j].index) {
      s += a[i].value * b[j].value;
      ++i;
      ++j;
    } else if (a[i].index < b[j].index) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

double squared_norm(const SparseVector& v) {
  double s = 0.0;
  for (const auto& f : v) s += f.value * f.value;
  return s;
}

std::vector<double> to_dense(const SparseVector& v, int dim) {
  std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
  for (const auto& f : v) out[static_cast<std::size_t>(f.index - 1)] = f.value;
  return out;
}

SparseVector from_dense(const std::vector<double>& v) {
  SparseVector out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) out.push_back({static_cast<int>(i + 1), v[i]});
  return out;
}

double SparseDataset::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void SparseDataset::validate() const {
  if (weights.size() != examples.size())
    throw std::invalid_argument("dataset: weight count != example count");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    int prev = 0;
    for (const auto& f : ex.x) {
      if (f.index < 1 || f.index > dim)
        throw std::invalid_argument("dataset: feature index out of range");
      if (f.index <= prev)
        throw std::invalid_argument("dataset: nonincreasing feature index");
      prev = f.index;
    }
    if (!std::isfinite(ex.y))
      throw std::invalid_argument("dataset: nonfinite label");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("dataset: nonpositive weight");
  }
}

SparseDataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  SparseDataset ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#')
      throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                               ": comments are not allowed");
    std::istringstream ls(line);
    Example ex;
    if (!(ls >> ex.y))
      throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                               ": bad label");
    std::string tok;
    int prev = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("parse error at line " +
                                 std::to_string(lineno) + ": expected idx:val");
      int idx = 0;
      double val = 0.0;
      try {
        std::size_t used = 0;
        idx = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("trailing");
        val = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("parse error at line " +
                                 std::to_string(lineno) + ": bad idx:val '" +
                                 tok + "'");
      }
      if (idx < 1)
        throw std::runtime_error("format error at line " +
                                 std::to_string(lineno) + ": index < 1");
      if (idx <= prev)
        throw std::runtime_error("format error at line " +
                                 std::to_string(lineno) +
                                 ": nonincreasing index");
      prev = idx;
      ex.x.push_back({idx, val});
      ds.dim = std::max(ds.dim, idx);
    }
    ds.examples.push_back(std::move(ex));
  }
  ds.weights.assign(ds.n(), 1.0);
  return ds;
}

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool all_pm1(const SparseDataset& ds) {
  for (const auto& ex : ds.examples)
    if (ex.y != 1.0 && ex.y != -1.0) return false;
  return !ds.examples.empty();
}

}  // namespace

void save_libsvm(const SparseDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  const bool classification = all_pm1(ds);
  for (const auto& ex : ds.examples) {
    if (classification)
      out << (ex.y > 0 ? "+1" : "-1");
    else
      out << fmt_real(ex.y);
    for (const auto& f : ex.x) out << ' ' << f.index << ':' << fmt_real(f.value);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

constexpr int kNormDim = 20;

SparseDataset make_two_gaussians(std::size_t n, std::uint64_t seed,
                                 const std::vector<double>& mean_pos,
                                 double sd_pos,
                                 const std::vector<double>& mean_neg,
                                 double sd_neg) {
  SparseDataset ds;
  ds.dim = kNormDim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  const std::size_t npos = (n + 1) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i < npos;
    Example ex;
    ex.y = pos ? 1.0 : -1.0;
    ex.x.reserve(kNormDim);
    for (int j = 0; j < kNormDim; ++j) {
      double v = (pos ? mean_pos[j] + sd_pos * norm(rng)
                      : mean_neg[j] + sd_neg * norm(rng));
      ex.x.push_back({j + 1, v});
    }
    ds.examples.push_back(std::move(ex));
  }
  ds.weights.assign(n, 1.0);
  return ds;
}

}  // namespace

SparseDataset gen_twonorm(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_twonorm: n must be >= 2");
  const double a = 2.0 / std::sqrt(20.0);
  std::vector<double> mp(kNormDim, a), mn(kNormDim, -a);
  return make_two_gaussians(n, seed, mp, 1.0, mn, 1.0);
}

SparseDataset gen_ringnorm(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_ringnorm: n must be >= 2");
  const double a = 2.0 / std::sqrt(20.0);
  // class +1: mean 1, covariance 4I; class -1: mean a, unit covariance
  std::vector<double> mp(kNormDim, 1.0), mn(kNormDim, a);
  return make_two_gaussians(n, seed, mp, 2.0, mn, 1.0);
}

SparseDataset gen_checkerboard(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_checkerboard: n must be >= 1");
  SparseDataset ds;
  ds.dim = 2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 4.0);
  for (std::size_t i = 0; i < n; ++i) {
    double x1 = unif(rng), x2 = unif(rng);
    int p1 = static_cast<int>(std::floor(x1)) % 2;
    int p2 = static_cast<int>(std::floor(x2)) % 2;
    Example ex;
    ex.y = (p1 == p2) ? -1.0 : 1.0;
    ex.x = {{1, x1}, {2, x2}};
    ds.examples.push_back(std::move(ex));
  }
  ds.weights.assign(n, 1.0);
  return ds;
}

SparseDataset gen_friedman_regression(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_friedman: n must be >= 1");
  SparseDataset ds;
  ds.dim = 10;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  constexpr double kPi = 3.14159265358979323846;
  for (std::size_t i = 0; i < n; ++i) {
    Example ex;
    ex.x.reserve(10);
    double x[10];
    for (int j = 0; j < 10; ++j) {
      x[j] = unif(rng);
      ex.x.push_back({j + 1, x[j]});
    }
    ex.y = 10.0 * std::sin(kPi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) +
           10.0 * x[3] + 5.0 * x[4] + noise(rng);
    ds.examples.push_back(std::move(ex));
  }
  ds.weights.assign(n, 1.0);
  return ds;
}

SparseDataset gen_separable(std::size_t n, int dim, double margin,
                            std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_separable: n must be >= 2");
  if (dim < 1) throw std::invalid_argument("gen_separable: dim must be >= 1");
  if (!(margin > 0.0) || margin >= 1.0)
    throw std::invalid_argument("gen_separable: margin must lie in (0,1)");
  SparseDataset ds;
  ds.dim = dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> w(static_cast<std::size_t>(dim));
  double wn = 0.0;
  for (auto& x : w) {
    x = norm(rng);
    wn += x * x;
  }
  wn = std::sqrt(wn);
  for (auto& x : w) x /= wn;

  while (ds.examples.size() < n) {
    // uniform direction, radius for uniform-in-ball
    std::vector<double> p(static_cast<std::size_t>(dim));
    double pn = 0.0;
    for (auto& x : p) {
      x = norm(rng);
      pn += x * x;
    }
    pn = std::sqrt(pn);
    const double radius =
        std::pow(unif(rng), 1.0 / static_cast<double>(dim));
    for (auto& x : p) x = x / pn * radius;
    double side = 0.0;
    for (int j = 0; j < dim; ++j) side += w[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(j)];
    if (std::abs(side) < margin) continue;  // reject points inside the band
    Example ex;
    ex.y = side > 0 ? 1.0 : -1.0;
    ex.x.reserve(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j)
      ex.x.push_back({j + 1, p[static_cast<std::size_t>(j)]});
    ds.examples.push_back(std::move(ex));
  }
  // force both classes so downstream solves never see one class
  if (ds.examples.front().y == ds.examples.back().y) {
    bool both = false;
    for (const auto& ex : ds.examples)
      if (ex.y != ds.examples.front().y) both = true;
    if (!both) {
      auto& ex = ds.examples.back();
      ex.y = -ex.y;
      for (auto& f : ex.x) f.value = -f.value;
    }
  }
  ds.weights.assign(n, 1.0);
  return ds;
}

DatasetStats stats(const SparseDataset& ds) {
  if (ds.examples.empty()) throw std::invalid_argument("stats: empty dataset");
  DatasetStats st;
  st.n = ds.n();
  st.dim = ds.dim;
  bool classification = true;
  for (const auto& ex : ds.examples) {
    st.max_norm = std::max(st.max_norm, std::sqrt(squared_norm(ex.x)));
    if (ex.y != 1.0 && ex.y != -1.0) classification = false;
  }
  if (classification)
    for (const auto& ex : ds.examples)
      ++st.class_counts[static_cast<int>(ex.y)];
  return st;
}

std::vector<std::size_t> weighted_sample(const std::vector<double>& weights,
                                         std::size_t r, std::uint64_t seed) {
  const std::size_t n = weights.size();
  if (r < 1 || r > n)
    throw std::invalid_argument("weighted_sample: need 1 <= r <= n");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(
      std::numeric_limits<double>::min(), 1.0);
  std::vector<std::pair<double, std::size_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i)
    keys[i] = {-std::log(unif(rng)) / weights[i], i};
  std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(r) - 1,
                   keys.end());
  std::vector<std::size_t> out(r);
  for (std::size_t i = 0; i < r; ++i) out[i] = keys[i].second;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> weighted_sample(const SparseDataset& ds, std::size_t r,
                                         std::uint64_t seed) {
  return weighted_sample(ds.weights, r, seed);
}

}  // namespace randsvm
