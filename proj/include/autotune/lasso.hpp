#pragma once

#include "autotune/model.hpp"

#include <span>
#include <vector>

namespace autotune {

// sign(a) * max(|a| - lambda, 0)
inline double soft_threshold(double a, double lambda) noexcept {
  if (a > lambda) return a - lambda;
  if (a < -lambda) return a + lambda;
  return 0.0;
}

// max_j |<Y, X_j>| / n: the smallest penalty with an all-zero solution on a
// standardized design. Throws InputError for an empty design.
double lambda_max(const Dataset& data);

// Strictly decreasing, log-equispaced penalties starting at lambda_max.
struct LambdaGrid {
  std::vector<double> values;
  double ratio = 0.0;  // last / first

  Index count() const noexcept { return static_cast<Index>(values.size()); }

  static LambdaGrid log_spaced(double lambda_max, double ratio, int count);
  // 100 values; ratio 0.01 when p >= n, 1e-4 otherwise.
  static LambdaGrid standard(const Dataset& data);
};

// (1/2n)||Y - X beta||^2 + lambda ||beta||_1
double lasso_objective(const Dataset& data, const Eigen::VectorXd& beta, double lambda);

// ||beta - old||_1 / ||old||_1, with 0/0 = 0 and x/0 = inf.
double relative_l1_change(const Eigen::VectorXd& beta, const Eigen::VectorXd& old);

// One pass of coordinate updates over `order`, keeping r = Y - X beta in sync.
void cd_sweep(const Dataset& data, double lambda, std::span<const Index> order,
              Eigen::VectorXd& beta, Eigen::VectorXd& r);

struct KktReport {
  bool pass = false;
  double max_violation = 0.0;
};

// Active j: | |<X_j, r>/n| - lambda | ; inactive j: |<X_j, r>/n| - lambda.
KktReport kkt_check(const Dataset& data, const Eigen::VectorXd& beta, double lambda, double tol);

/**
 * Coordinate descent at a fixed penalty over the coordinates in `order`.
 *
 * Alternates full sweeps in `order` with runs of sweeps over the current
 * nonzeros (each run ends once the relative l1 change falls below
 * 0.01 * tol). Stops after a full sweep whose relative l1 change is below
 * tol when every coordinate in `order` meets its KKT condition to within
 * tol * lambda plus a rounding floor proportional to the RMS of Y.
 * Coordinates outside `order` are left as given. max_sweeps bounds the full
 * sweeps and, separately, each restricted run; running out returns the last
 * iterate with converged = false. `sweeps` counts both kinds.
 */
LassoFit cd_converge(const Dataset& data, double lambda, Eigen::VectorXd beta, std::span<const Index> order,
                     double tol, int max_sweeps);

// cd_converge over every predictor; `order` must be a permutation of 0..p-1.
LassoFit cd_fixed_lambda(const Dataset& data, double lambda, const Eigen::VectorXd& beta_init,
                         std::span<const Index> order, double tol, int max_sweeps);

// Convenience overload: natural order, zero start.
LassoFit cd_fixed_lambda(const Dataset& data, double lambda, double tol = 1e-7,
                         int max_sweeps = 1000);

// Warm-started cd_fixed_lambda fits along the grid, largest penalty first.
std::vector<LassoFit> lasso_path(const Dataset& data, const LambdaGrid& grid, double tol = 1e-7,
                                 int max_sweeps = 1000);

}  // namespace autotune
