#include "autotune/var.hpp"

#include "autotune/autotune.hpp"
#include "autotune/errors.hpp"
#include "autotune/parallel.hpp"

#include <string>

namespace autotune {

VarDesign build_var_design(const SeriesData& series) {
  const Index t_len = series.values.rows();
  const Index p = series.values.cols();
  const Index d = series.lags;
  if (d < 1) throw InputError("lag order must be at least 1");
  if (p < 1) throw InputError("series has no components");
  if (t_len < d + 2) {
    throw InputError("series of length " + std::to_string(t_len) + " is too short for " +
                     std::to_string(d) + " lags");
  }
  if (!series.values.allFinite()) throw InputError("series contains non-finite entries");

  const Index n = t_len - d;
  VarDesign design;
  design.y = series.values.bottomRows(n);
  design.x.resize(n, d * p);
  for (Index lag = 1; lag <= d; ++lag) {
    design.x.middleCols((lag - 1) * p, p) = series.values.middleRows(d - lag, n);
  }
  return design;
}

VarFit var_autotune_fit(const SeriesData& series, const FitConfig& cfg, int jobs) {
  const VarDesign design = build_var_design(series);
  const Index p = series.values.cols();
  for (Index j = 0; j < p; ++j) {
    const auto col = series.values.col(j);
    if ((col.array() == col[0]).all()) {
      throw InputError("series component " + std::to_string(j + 1) + " is constant");
    }
  }

  VarFit fit;
  fit.lags = series.lags;
  fit.per_column.resize(static_cast<std::size_t>(p));
  parallel_for(static_cast<std::size_t>(p), jobs, [&](std::size_t i) {
    const Dataset column(design.x, design.y.col(static_cast<Index>(i)));
    fit.per_column[i] = autotune_fit(column, cfg);
  });

  fit.phi.resize(design.x.cols(), p);
  fit.intercepts.resize(p);
  fit.sigma2.resize(p);
  fit.lambdas.resize(p);
  for (Index i = 0; i < p; ++i) {
    const AutotuneFit& col = fit.per_column[static_cast<std::size_t>(i)];
    fit.phi.col(i) = col.beta;
    fit.intercepts[i] = col.intercept;
    fit.sigma2[i] = col.sigma2;
    fit.lambdas[i] = col.lambda;
  }
  return fit;
}

Eigen::VectorXd forecast_one_step(const VarFit& fit, const Eigen::MatrixXd& recent) {
  const Index p = fit.phi.cols();
  if (recent.rows() != fit.lags || recent.cols() != p) {
    throw InputError("forecast needs the last " + std::to_string(fit.lags) + " observations of " +
                     std::to_string(p) + " components");
  }
  Eigen::VectorXd lagged(fit.lags * p);
  for (Index lag = 0; lag < fit.lags; ++lag) lagged.segment(lag * p, p) = recent.row(lag).transpose();
  return fit.phi.transpose() * lagged + fit.intercepts;
}

}  // namespace autotune
