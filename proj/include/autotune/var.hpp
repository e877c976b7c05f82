#pragma once

#include "autotune/model.hpp"

#include <vector>

namespace autotune {

// Multivariate series, one row per time point (ascending), one column per component.
struct SeriesData {
  Eigen::MatrixXd values;  // T x p
  Index lags = 1;          // VAR order d
};

// Lagged regression design: row k of x holds observations d+k-1, ..., k
// (newest lag first) and row k of y holds observation d+k.
struct VarDesign {
  Eigen::MatrixXd y;  // n x p
  Eigen::MatrixXd x;  // n x (d p)
};

struct VarFit {
  Eigen::MatrixXd phi;  // (d p) x p, stacked A_1^T ... A_d^T
  Eigen::VectorXd intercepts;
  Eigen::VectorXd sigma2;
  Eigen::VectorXd lambdas;
  std::vector<AutotuneFit> per_column;
  Index lags = 1;
};

// Throws InputError when T < d + 2 or the series holds non-finite values.
VarDesign build_var_design(const SeriesData& series);

// One autotune regression per component, fitted on up to `jobs` threads.
// The result does not depend on `jobs`. Constant components are rejected.
VarFit var_autotune_fit(const SeriesData& series, const FitConfig& cfg, int jobs = 1);

// `recent` holds the last d observations, newest first (d x p).
Eigen::VectorXd forecast_one_step(const VarFit& fit, const Eigen::MatrixXd& recent);

}  // namespace autotune
