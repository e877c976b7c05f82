#pragma once

#include "autotune/model.hpp"

#include <span>
#include <utility>
#include <vector>

namespace autotune {

struct PartialResidualSummary {
  Eigen::VectorXd dispersion;  // one entry per predictor
  std::vector<Index> ranking;  // predictors by dispersion, largest first
};

struct SigmaEstimate {
  double sigma2 = 0.0;
  std::vector<Index> support_set;  // accepted prefix of the ranking, in order
  Index k0 = 1;                    // 1 + |support_set|
  std::vector<double> rss_seq;     // RSS of M_0 .. M_|support|
  std::vector<double> f_stats;     // statistic of every test performed
  std::vector<double> cutoffs;     // matching F_{alpha; 1, n - i}
  R2Curve r2;
  bool saturated = false;
};

// r + x_j * beta_j
Eigen::VectorXd partial_residual(const Eigen::VectorXd& r, const Eigen::VectorXd& x_j, double beta_j);

/**
 * Ranks predictors by the dispersion of their partial residuals.
 *
 * kDispersionL2 uses the sample standard deviation (divisor n - 1) of
 * r + X_j beta_j; kDispersionL1 uses the uncentered mean absolute value.
 * Ties are broken by ascending column index. Predictors with beta_j = 0 all
 * share the dispersion of r itself.
 */
PartialResidualSummary rank_predictors(const Dataset& data, const Eigen::VectorXd& r,
                                       const Eigen::VectorXd& beta, RankingNorm norm);

/**
 * Nested least-squares fits along `ranking` with sequential F-tests.
 *
 * Each ranked column is orthogonalized against the accepted ones, the
 * deflated response is regressed on it and the F statistic is compared with
 * F_{alpha; 1, n - i}. Stops at the first non-rejection or after max_support
 * acceptances; sigma2 = ||Y_temp||^2 / (n - |support|).
 * Columns that are numerically collinear with the accepted set are skipped.
 */
SigmaEstimate sequential_gs_ftest(const Dataset& data, std::span<const Index> ranking, double alpha,
                                  Index max_support);

// Cumulative R^2_k = 1 - RSS_k / TSS and adjusted R^2_k = 1 - (1 - R^2_k)(n - 1)/(n - k - 1),
// with k = 0, 1, ...; truncated where n - k - 1 <= 0.
R2Curve r2_curves(std::span<const double> rss_seq, double y_total_ss, Index n);

// Nested RSS along the first `max_rank` ranked predictors without any test,
// for sparsity diagnostics. Collinear columns repeat the previous RSS.
std::vector<double> nested_rss_profile(const Dataset& data, std::span<const Index> ranking, Index max_rank);

}  // namespace autotune
