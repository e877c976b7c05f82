#pragma once

#include "autotune/lasso.hpp"
#include "autotune/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace autotune {

enum class CvRule { kMin, kOneSe };
enum class InfoCriterion { kAic, kBic };

// A Lasso fit whose penalty was picked from a grid by some tuning rule.
struct TunedLasso {
  LassoFit fit;           // refit on the full standardized data
  Eigen::VectorXd beta;   // original scale
  double intercept = 0.0;
  double lambda = 0.0;
  Index lambda_index = 0;
  LambdaGrid grid;
  std::vector<double> score;     // CV error or information criterion per grid value
  std::vector<double> score_se;  // CV standard error across folds (CV only)
  double sigma2_residual = 0.0;  // RSS / (n - df) at the chosen penalty
};

// Random fold labels: a seeded permutation dealt into K near-equal folds.
std::vector<std::vector<Index>> assign_folds(Index n, int folds, std::uint64_t seed);

struct TimeSplit {
  std::vector<Index> train;
  std::vector<Index> test;
};

// Rolling-origin splits: rows cut into 2K contiguous folds; split j tests on
// fold K + j and trains on every earlier fold.
std::vector<TimeSplit> tscv_splits(Index n, int folds);

// K-fold CV over the grid (standard grid when none is given). Each fold
// standardizes its own training rows. CV(1se) takes the largest penalty whose
// mean error is within one across-fold standard error of the minimum.
TunedLasso cv_lasso(const Dataset& data, int folds, CvRule rule, std::uint64_t seed,
                    const std::optional<LambdaGrid>& grid = std::nullopt);

// n log(RSS) + k df along the path, k = 2 (AIC) or log n (BIC), df = nonzeros.
TunedLasso ic_lasso(const Dataset& data, InfoCriterion criterion,
                    const std::optional<LambdaGrid>& grid = std::nullopt);

// Time-series CV with rolling training windows; needs n >= 4K.
TunedLasso tscv_lasso(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int folds,
                      const std::optional<LambdaGrid>& grid = std::nullopt);

}  // namespace autotune
