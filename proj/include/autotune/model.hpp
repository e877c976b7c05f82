#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace autotune {

using Index = Eigen::Index;

/**
 * Response vector plus design matrix.
 *
 * Immutable after construction. The constructor checks n >= 2, p >= 1,
 * matching row counts and finite entries, and caches the per-column
 * ||X_j||^2 / n used by the coordinate updates.
 */
class Dataset {
 public:
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y);

  const Eigen::MatrixXd& x() const noexcept { return x_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }
  Index n() const noexcept { return x_.rows(); }
  Index p() const noexcept { return x_.cols(); }

  // ||X_j||^2 / n for every column; exactly 1 (up to rounding) after standardize().
  const Eigen::VectorXd& column_scale() const noexcept { return col_scale_; }

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  Eigen::VectorXd col_scale_;
};

// Centering and scaling applied by standardize(). Columns with zero variance
// are degenerate: they are dropped from the fitting design and get a zero
// coefficient on output.
struct Standardization {
  Eigen::VectorXd column_means;   // length p (original)
  Eigen::VectorXd column_scales;  // length p; 0 for degenerate columns
  std::vector<Index> retained;    // original indices of fitted columns, ascending
  double response_mean = 0.0;

  Index original_p() const noexcept { return column_means.size(); }
  bool is_degenerate(Index j) const noexcept { return column_scales[j] == 0.0; }
};

struct StandardizedData {
  Dataset data;
  Standardization transform;
};

// Centers every column and the response, scales columns to ||X_j||^2 = n.
// Throws InputError when every column is degenerate.
StandardizedData standardize(const Dataset& data);

// The no-op transform used when standardization is switched off.
Standardization identity_standardization(Index p);

struct OriginalScaleCoefficients {
  Eigen::VectorXd beta;  // length original_p(), zeros at degenerate columns
  double intercept = 0.0;
};

// Maps fitting-space coefficients (one per retained column) back to the raw
// design. Throws InputError on a length mismatch.
OriginalScaleCoefficients destandardize(const Eigen::VectorXd& beta_std,
                                        const Standardization& st);

// Sample variance with divisor n - 1. Used wherever Var(Y) appears.
double sample_variance(const Eigen::VectorXd& v);

enum class RankingNorm { kDispersionL2, kDispersionL1 };

struct FitConfig {
  double alpha = 0.01;
  RankingNorm ranking_norm = RankingNorm::kDispersionL2;
  double tol = 1e-3;
  int max_sweeps = 1000;
  bool standardize = true;
  bool active_set = false;
  std::optional<Index> max_support;  // defaults to min(p, n - 2)

  // Throws InputError if the configuration is unusable for an n x p problem.
  void validate(Index n, Index p) const;
  Index effective_max_support(Index n, Index p) const;
};

struct LassoFit {
  Eigen::VectorXd beta;
  double lambda = 0.0;
  Eigen::VectorXd residuals;
  int sweeps = 0;
  bool converged = true;
};

struct R2Curve {
  std::vector<double> cumulative;
  std::vector<double> adjusted;
};

struct AutotuneFit {
  Eigen::VectorXd beta;  // original scale
  double intercept = 0.0;
  double sigma2 = 0.0;
  double lambda = 0.0;
  double lambda0 = 0.0;
  std::vector<Index> support_set;  // original column indices, in F-test order
  std::vector<Index> ranking;      // permutation of original column indices
  std::vector<double> lambda_trace;
  R2Curve r2_curve;
  int sweeps = 0;
  bool converged = true;
  bool saturated = false;

  // Fitting-space view: coefficients and residuals on the standardized
  // design, plus the transform that produced it.
  Eigen::VectorXd beta_fit;
  Eigen::VectorXd residuals_fit;
  Standardization transform;
  // Predictors removed by active-set screening.
  std::vector<Index> screened_out;
};

}  // namespace autotune
