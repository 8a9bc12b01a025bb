#pragma once

#include <cstddef>
#include <vector>

#include "randsvm/kernels.hpp"
#include "randsvm/smo.hpp"

namespace randsvm {

// Dense form of the SVM duals, in the maximization convention:
//   maximize linear'a - 1/2 a'Qa  s.t.  lo <= a <= hi, eq'a = rhs
struct DenseQP {
  std::vector<std::vector<double>> Q;
  std::vector<double> linear;
  std::vector<double> box_lo, box_hi;
  std::vector<double> eq_coef;
  double eq_rhs = 0.0;

  std::size_t size() const { return linear.size(); }
};

DenseQP build_dual(const SparseDataset& ds,
                   const std::vector<std::size_t>& working,
                   const KernelSpec& kernel, double C, Task task,
                   double epsilon_tube = 0.0);

// Exact Euclidean projection onto {lo <= x <= hi, eq'x = rhs}, by bisection
// on the hyperplane multiplier.
std::vector<double> project_box_hyperplane(const DenseQP& qp,
                                           const std::vector<double>& v);

struct OracleSolution {
  std::vector<double> alphas;
  double objective = 0.0;
  std::size_t iterations = 0;
};

// Accelerated projected-gradient ascent; independent of the SMO code path.
OracleSolution solve_dense(const DenseQP& qp, double tol);

}  // namespace randsvm
