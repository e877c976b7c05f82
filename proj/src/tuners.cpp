#include "autotune/tuners.hpp"

#include "autotune/errors.hpp"
#include "autotune/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace autotune {

namespace {

// Relative l1 change at which path fits stop. Objective values agree with a
// 1e-7 run to about 1e-8 along the whole standard grid.
constexpr double kPathTol = 1e-4;
constexpr int kPathMaxSweeps = 1000;

Dataset subset_rows(const Dataset& data, const std::vector<Index>& rows) {
  return Dataset(data.x()(rows, Eigen::all), data.y()(rows));
}

// Out-of-sample mean squared error of every path fit on `test`.
std::vector<double> path_test_mse(const Dataset& train, const Dataset& test, const LambdaGrid& grid) {
  const StandardizedData sd = standardize(train);
  const std::vector<LassoFit> path = lasso_path(sd.data, grid, kPathTol, kPathMaxSweeps);
  std::vector<double> mse;
  mse.reserve(path.size());
  for (const LassoFit& f : path) {
    const OriginalScaleCoefficients c = destandardize(f.beta, sd.transform);
    const Eigen::VectorXd pred = (test.x() * c.beta).array() + c.intercept;
    mse.push_back((test.y() - pred).squaredNorm() / static_cast<double>(test.n()));
  }
  return mse;
}

// Refit on the full data at grid[index] (path up to that point for warm starts).
void refit(const Dataset& data, TunedLasso& out) {
  const StandardizedData sd = standardize(data);
  LambdaGrid prefix;
  prefix.values.assign(out.grid.values.begin(), out.grid.values.begin() + out.lambda_index + 1);
  prefix.ratio = prefix.values.back() / prefix.values.front();
  std::vector<LassoFit> path = lasso_path(sd.data, prefix, kPathTol, kPathMaxSweeps);
  out.fit = std::move(path.back());
  out.lambda = out.fit.lambda;
  const OriginalScaleCoefficients c = destandardize(out.fit.beta, sd.transform);
  out.beta = c.beta;
  out.intercept = c.intercept;
  const auto df = static_cast<double>((out.fit.beta.array() != 0.0).count());
  const double dof = static_cast<double>(data.n()) - df;
  out.sigma2_residual =
      dof > 0.0 ? out.fit.residuals.squaredNorm() / dof : std::numeric_limits<double>::quiet_NaN();
}

LambdaGrid grid_or_standard(const Dataset& data, const std::optional<LambdaGrid>& grid) {
  if (grid) return *grid;
  return LambdaGrid::standard(standardize(data).data);
}

Index argmin(const std::vector<double>& v) {
  return static_cast<Index>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::vector<std::vector<Index>> assign_folds(Index n, int folds, std::uint64_t seed) {
  if (folds < 2) throw InputError("cross-validation needs at least 2 folds");
  if (n < folds) throw InputError("cross-validation needs at least one row per fold");
  Rng rng(seed);
  const std::vector<Index> perm = rng.permutation(n);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < perm.size(); ++i) out[i % out.size()].push_back(perm[i]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

std::vector<TimeSplit> tscv_splits(Index n, int folds) {
  if (folds < 1) throw InputError("time-series CV needs K >= 1");
  if (n < 4 * static_cast<Index>(folds)) throw InputError("time-series CV needs at least 4K rows");
  const Index parts = 2 * static_cast<Index>(folds);
  const auto boundary = [&](Index f) { return f * n / parts; };
  std::vector<TimeSplit> out;
  for (Index j = 1; j <= folds; ++j) {
    TimeSplit split;
    for (Index i = 0; i < boundary(folds + j - 1); ++i) split.train.push_back(i);
    for (Index i = boundary(folds + j - 1); i < boundary(folds + j); ++i) split.test.push_back(i);
    out.push_back(std::move(split));
  }
  return out;
}

TunedLasso cv_lasso(const Dataset& data, int folds, CvRule rule, std::uint64_t seed,
                    const std::optional<LambdaGrid>& grid) {
  const auto fold_rows = assign_folds(data.n(), folds, seed);
  TunedLasso out;
  out.grid = grid_or_standard(data, grid);
  const std::size_t m = out.grid.values.size();

  std::vector<std::vector<double>> fold_mse;
  for (std::size_t f = 0; f < fold_rows.size(); ++f) {
    std::vector<Index> train;
    for (std::size_t g = 0; g < fold_rows.size(); ++g) {
      if (g != f) train.insert(train.end(), fold_rows[g].begin(), fold_rows[g].end());
    }
    std::sort(train.begin(), train.end());
    if (train.size() < 2) throw InputError("cross-validation fold leaves fewer than 2 training rows");
    fold_mse.push_back(path_test_mse(subset_rows(data, train), subset_rows(data, fold_rows[f]), out.grid));
  }

  const double k = static_cast<double>(folds);
  out.score.assign(m, 0.0);
  out.score_se.assign(m, 0.0);
  for (std::size_t l = 0; l < m; ++l) {
    double mean = 0.0;
    for (const auto& f : fold_mse) mean += f[l];
    mean /= k;
    double ss = 0.0;
    for (const auto& f : fold_mse) ss += (f[l] - mean) * (f[l] - mean);
    out.score[l] = mean;
    out.score_se[l] = std::sqrt(ss / (k - 1.0) / k);
  }

  Index best = argmin(out.score);
  if (rule == CvRule::kOneSe) {
    const double threshold = out.score[static_cast<std::size_t>(best)] + out.score_se[static_cast<std::size_t>(best)];
    for (Index l = 0; l <= best; ++l) {
      if (out.score[static_cast<std::size_t>(l)] <= threshold) {
        best = l;
        break;
      }
    }
  }
  out.lambda_index = best;
  refit(data, out);
  return out;
}

TunedLasso ic_lasso(const Dataset& data, InfoCriterion criterion, const std::optional<LambdaGrid>& grid) {
  TunedLasso out;
  out.grid = grid_or_standard(data, grid);
  const StandardizedData sd = standardize(data);
  const std::vector<LassoFit> path = lasso_path(sd.data, out.grid, kPathTol, kPathMaxSweeps);
  const double n = static_cast<double>(data.n());
  const double k = criterion == InfoCriterion::kAic ? 2.0 : std::log(n);
  for (const LassoFit& f : path) {
    const double rss = f.residuals.squaredNorm();
    const auto df = static_cast<double>((f.beta.array() != 0.0).count());
    out.score.push_back(rss > 0.0 ? n * std::log(rss) + k * df : -std::numeric_limits<double>::infinity());
  }
  out.lambda_index = argmin(out.score);
  refit(data, out);
  return out;
}

TunedLasso tscv_lasso(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, int folds,
                      const std::optional<LambdaGrid>& grid) {
  const Dataset data(x, y);
  const std::vector<TimeSplit> splits = tscv_splits(data.n(), folds);
  TunedLasso out;
  out.grid = grid_or_standard(data, grid);
  out.score.assign(out.grid.values.size(), 0.0);
  for (const TimeSplit& split : splits) {
    const std::vector<double> mse = path_test_mse(subset_rows(data, split.train), subset_rows(data, split.test), out.grid);
    for (std::size_t l = 0; l < mse.size(); ++l) out.score[l] += mse[l] / static_cast<double>(splits.size());
  }
  out.lambda_index = argmin(out.score);
  refit(data, out);
  return out;
}

}  // namespace autotune
