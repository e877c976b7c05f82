#pragma once

#include "autotune/model.hpp"

#include <span>
#include <vector>

namespace autotune {

/**
 * Autotune Lasso: alternates one coordinate-descent sweep at
 * lambda = lambda0 * sigma2 with a sigma update (partial-residual ranking +
 * sequential F-tests), until the F-test support stops growing. From then on
 * lambda is frozen and sweeps continue until the relative l1 change of beta
 * falls below cfg.tol; the result is finally polished to KKT precision at
 * the frozen lambda.
 *
 * Standardizes the data first when cfg.standardize is set. Throws
 * InputError for unusable input (constant response, bad config).
 */
AutotuneFit autotune_fit(const Dataset& data, const FitConfig& cfg);

// Same loop, but once the sigma updates stop the predictor set is screened
// with active_set_select; later sweeps visit only the retained predictors.
// Predictors violating KKT at the end are re-admitted before returning.
AutotuneFit autotune_fit_active(const Dataset& data, const FitConfig& cfg);

// The autotune loop on data that is already in fitting space (no
// standardization, all indices refer to data's columns).
AutotuneFit autotune_fit_prepared(const Dataset& data, const FitConfig& cfg, bool active);

// Re-expresses a fitting-space result in the original columns: coefficients
// and intercept on the raw scale, indices mapped through st.retained and
// degenerate columns appended to the ranking.
AutotuneFit map_to_original(AutotuneFit core, const Standardization& st);

struct ScreeningResult {
  Eigen::VectorXd r;
  Eigen::VectorXd beta;
  std::vector<Index> ranking;    // support first, then kept predictors in prior order
  std::vector<Index> discarded;  // in the order they were dropped
};

// Keeps predictor j iff it is in the support or |<X_j, r>/n| >= lambda; the
// coefficient of every dropped predictor is zeroed and folded back into r.
ScreeningResult active_set_select(const Dataset& data, Eigen::VectorXd r, Eigen::VectorXd beta,
                                  std::span<const Index> ranking, std::span<const Index> support,
                                  double lambda);

}  // namespace autotune
