#include "autotune/diagnostics.hpp"

#include "autotune/autotune.hpp"
#include "autotune/errors.hpp"
#include "autotune/sigma_update.hpp"

#include <algorithm>
#include <limits>

namespace autotune {

Diagnostics diagnose(const Dataset& data, const FitConfig& cfg, Index max_rank) {
  const StandardizedData sd =
      cfg.standardize ? standardize(data) : StandardizedData{data, identity_standardization(data.p())};
  const Dataset& fit_data = sd.data;
  const Standardization& st = sd.transform;

  AutotuneFit core = autotune_fit_prepared(fit_data, cfg, cfg.active_set);
  const PartialResidualSummary summary =
      rank_predictors(fit_data, core.residuals_fit, core.beta_fit, cfg.ranking_norm);

  const Index cap = std::min(fit_data.p(), fit_data.n() - 2);
  max_rank = max_rank < 0 ? cap : std::min(max_rank, cap);
  const std::vector<double> rss = nested_rss_profile(fit_data, summary.ranking, max_rank);
  const R2Curve r2 = r2_curves(rss, fit_data.y().squaredNorm(), fit_data.n());

  Diagnostics out;
  std::vector<bool> in_support(static_cast<std::size_t>(fit_data.p()), false);
  for (const Index j : core.support_set) in_support[static_cast<std::size_t>(j)] = true;
  for (std::size_t k = 1; k < r2.cumulative.size(); ++k) {
    const Index j = summary.ranking[k - 1];
    DiagnosticRow row;
    row.rank = static_cast<Index>(k);
    row.predictor = st.retained[static_cast<std::size_t>(j)];
    row.dispersion = summary.dispersion[j];
    row.in_support = in_support[static_cast<std::size_t>(j)];
    row.cumulative_r2 = r2.cumulative[k];
    row.adjusted_r2 = r2.adjusted[k];
    out.rows.push_back(row);
  }

  out.fit = map_to_original(std::move(core), st);
  return out;
}

double elbow_slope_ratio(const std::vector<double>& cumulative, Index k, Index window) {
  if (k < 1 || window < 1 || static_cast<std::size_t>(k + window) >= cumulative.size()) {
    throw InputError("R^2 curve too short for the requested elbow window");
  }
  const double before = (cumulative[static_cast<std::size_t>(k)] - cumulative[0]) / static_cast<double>(k);
  const double after =
      (cumulative[static_cast<std::size_t>(k + window)] - cumulative[static_cast<std::size_t>(k)]) /
      static_cast<double>(window);
  if (after <= 0.0) return std::numeric_limits<double>::infinity();
  return before / after;
}

}  // namespace autotune
