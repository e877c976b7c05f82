#include "autotune/autotune.hpp"

#include "autotune/errors.hpp"
#include "autotune/lasso.hpp"
#include "autotune/sigma_update.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace autotune {

namespace {

// Relative l1 tolerance of the final polish at the frozen lambda; the KKT
// slack is this times lambda.
constexpr double kPolishTol = 1e-9;

bool is_subset(std::vector<Index> inner, std::vector<Index> outer) {
  std::sort(inner.begin(), inner.end());
  std::sort(outer.begin(), outer.end());
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

double kkt_violation(const Dataset& data, const Eigen::VectorXd& beta, const Eigen::VectorXd& r,
                     double lambda, std::span<const Index> over) {
  const double inv_n = 1.0 / static_cast<double>(data.n());
  double worst = 0.0;
  for (const Index j : over) {
    const double g = std::abs(data.x().col(j).dot(r)) * inv_n;
    worst = std::max(worst, beta[j] != 0.0 ? std::abs(g - lambda) : g - lambda);
  }
  return worst;
}

struct ConvergeResult {
  int sweeps = 0;
  bool converged = false;
};

ConvergeResult converge_on(const Dataset& data, double lambda, std::span<const Index> order, double tol,
                           int max_sweeps, Eigen::VectorXd& beta, Eigen::VectorXd& r) {
  LassoFit fit = cd_converge(data, lambda, std::move(beta), order, tol, max_sweeps);
  beta = std::move(fit.beta);
  r = std::move(fit.residuals);
  return {fit.sweeps, fit.converged};
}

std::vector<Index> iota_indices(Index p) {
  std::vector<Index> v(static_cast<std::size_t>(p));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

AutotuneFit fit_with_transform(const Dataset& data, const FitConfig& cfg, bool active) {
  if (cfg.standardize) {
    const StandardizedData sd = standardize(data);
    return map_to_original(autotune_fit_prepared(sd.data, cfg, active), sd.transform);
  }
  return map_to_original(autotune_fit_prepared(data, cfg, active), identity_standardization(data.p()));
}

}  // namespace

AutotuneFit autotune_fit_prepared(const Dataset& data, const FitConfig& cfg, bool active) {
  const Index n = data.n();
  const Index p = data.p();
  cfg.validate(n, p);
  const Index max_support = cfg.effective_max_support(n, p);

  const double var_y = sample_variance(data.y());
  if (!(var_y > 0.0)) throw InputError("response has zero variance");

  AutotuneFit fit;
  fit.lambda0 = lambda_max(data) / (2.0 * var_y);
  double sigma2 = var_y;
  fit.lambda_trace.push_back(fit.lambda0 * sigma2);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd r = data.y();
  std::vector<Index> ranking = iota_indices(p);
  std::vector<Index> support;
  bool sigma_update = true;
  bool loop_converged = false;
  SigmaEstimate last_estimate;

  Eigen::VectorXd beta_old(p);
  while (fit.sweeps < cfg.max_sweeps) {
    const double lambda = fit.lambda0 * sigma2;
    const std::vector<Index> support_old = support;
    beta_old = beta;
    cd_sweep(data, lambda, ranking, beta, r);
    ++fit.sweeps;

    if (sigma_update) {
      PartialResidualSummary summary = rank_predictors(data, r, beta, cfg.ranking_norm);
      SigmaEstimate est = sequential_gs_ftest(data, summary.ranking, cfg.alpha, max_support);
      ranking = std::move(summary.ranking);
      support = est.support_set;
      if (est.saturated || !(est.sigma2 > 0.0)) {
        // Keep the last positive sigma2 so lambda never collapses to zero.
        fit.saturated = true;
        sigma_update = false;
      } else {
        if (std::abs(est.sigma2 - sigma2) > 1e-12 * sigma2) {
          fit.lambda_trace.push_back(fit.lambda0 * est.sigma2);
        }
        sigma2 = est.sigma2;
        if (is_subset(support, support_old)) sigma_update = false;
      }
      last_estimate = std::move(est);

      if (!sigma_update && active) {
        ScreeningResult screened =
            active_set_select(data, std::move(r), std::move(beta), ranking, support, fit.lambda0 * sigma2);
        r = std::move(screened.r);
        beta = std::move(screened.beta);
        ranking = std::move(screened.ranking);
        fit.screened_out = std::move(screened.discarded);
      }
    }

    if (relative_l1_change(beta, beta_old) < cfg.tol) {
      loop_converged = true;
      break;
    }
  }

  fit.sigma2 = sigma2;
  fit.lambda = fit.lambda0 * sigma2;

  ConvergeResult polish = converge_on(data, fit.lambda, ranking, kPolishTol, cfg.max_sweeps, beta, r);
  fit.sweeps += polish.sweeps;
  if (active) {
    // Re-admit screened predictors that violate KKT on the full set.
    const std::vector<Index> all = iota_indices(p);
    const double floor = 1e-12 * data.y().norm() / std::sqrt(static_cast<double>(n));
    while (polish.converged && kkt_violation(data, beta, r, fit.lambda, all) > kPolishTol * fit.lambda + floor) {
      const double inv_n = 1.0 / static_cast<double>(n);
      std::vector<bool> listed(static_cast<std::size_t>(p), false);
      for (const Index j : ranking) listed[static_cast<std::size_t>(j)] = true;
      for (Index j = 0; j < p; ++j) {
        if (!listed[static_cast<std::size_t>(j)] &&
            std::abs(data.x().col(j).dot(r)) * inv_n > fit.lambda) {
          ranking.push_back(j);
        }
      }
      polish = converge_on(data, fit.lambda, ranking, kPolishTol, cfg.max_sweeps, beta, r);
      fit.sweeps += polish.sweeps;
    }
    // Report a full permutation: active predictors first, then the rest by index.
    std::vector<bool> listed(static_cast<std::size_t>(p), false);
    for (const Index j : ranking) listed[static_cast<std::size_t>(j)] = true;
    for (Index j = 0; j < p; ++j) {
      if (!listed[static_cast<std::size_t>(j)]) ranking.push_back(j);
    }
  }

  fit.converged = loop_converged && polish.converged;
  fit.beta_fit = beta;
  fit.residuals_fit = r;
  fit.beta = beta;
  fit.support_set = last_estimate.support_set;
  fit.ranking = std::move(ranking);
  fit.r2_curve = last_estimate.r2;
  fit.transform = identity_standardization(p);
  return fit;
}

AutotuneFit map_to_original(AutotuneFit core, const Standardization& st) {
  const auto coefs = destandardize(core.beta_fit, st);
  const auto map = [&](const std::vector<Index>& idx) {
    std::vector<Index> out;
    out.reserve(idx.size());
    for (const Index k : idx) out.push_back(st.retained[static_cast<std::size_t>(k)]);
    return out;
  };
  core.beta = coefs.beta;
  core.intercept = coefs.intercept;
  core.support_set = map(core.support_set);
  core.ranking = map(core.ranking);
  core.screened_out = map(core.screened_out);
  for (Index j = 0; j < st.original_p(); ++j) {
    if (st.is_degenerate(j)) core.ranking.push_back(j);
  }
  core.transform = st;
  return core;
}

AutotuneFit autotune_fit(const Dataset& data, const FitConfig& cfg) {
  return fit_with_transform(data, cfg, cfg.active_set);
}

AutotuneFit autotune_fit_active(const Dataset& data, const FitConfig& cfg) {
  return fit_with_transform(data, cfg, true);
}

ScreeningResult active_set_select(const Dataset& data, Eigen::VectorXd r, Eigen::VectorXd beta,
                                  std::span<const Index> ranking, std::span<const Index> support,
                                  double lambda) {
  const Index p = data.p();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  std::vector<bool> in_support(static_cast<std::size_t>(p), false);
  for (const Index j : support) in_support[static_cast<std::size_t>(j)] = true;

  ScreeningResult out;
  out.ranking.assign(support.begin(), support.end());
  for (const Index j : ranking) {
    if (in_support[static_cast<std::size_t>(j)]) continue;
    if (std::abs(data.x().col(j).dot(r)) * inv_n >= lambda) {
      out.ranking.push_back(j);
    } else {
      if (beta[j] != 0.0) {
        r.noalias() += data.x().col(j) * beta[j];
        beta[j] = 0.0;
      }
      out.discarded.push_back(j);
    }
  }
  out.r = std::move(r);
  out.beta = std::move(beta);
  return out;
}

}  // namespace autotune
