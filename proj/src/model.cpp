#include "autotune/model.hpp"

#include "autotune/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace autotune {

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.size()) {
    throw InputError("design has " + std::to_string(x_.rows()) + " rows but response has " +
                     std::to_string(y_.size()) + " entries");
  }
  if (x_.rows() < 2) throw InputError("need at least 2 observations");
  if (x_.cols() < 1) throw InputError("need at least 1 predictor");
  if (!x_.allFinite() || !y_.allFinite()) throw InputError("data contains non-finite entries");
  col_scale_ = x_.colwise().squaredNorm().transpose() / static_cast<double>(x_.rows());
}

StandardizedData standardize(const Dataset& data) {
  const Index n = data.n();
  const Index p = data.p();
  const double dn = static_cast<double>(n);

  Standardization st;
  st.column_means = data.x().colwise().mean().transpose();
  st.column_scales = Eigen::VectorXd::Zero(p);
  st.response_mean = data.y().mean();

  for (Index j = 0; j < p; ++j) {
    const auto col = data.x().col(j);
    const double scale = std::sqrt((col.array() - st.column_means[j]).square().sum() / dn);
    const double max_abs = col.cwiseAbs().maxCoeff();
    // Zero variance up to rounding relative to the column's magnitude.
    if (scale > 1e-12 * max_abs) {
      st.column_scales[j] = scale;
      st.retained.push_back(j);
    }
  }
  if (st.retained.empty()) throw InputError("every predictor column has zero variance");

  const Index q = static_cast<Index>(st.retained.size());
  Eigen::MatrixXd xs(n, q);
  for (Index k = 0; k < q; ++k) {
    const Index j = st.retained[static_cast<std::size_t>(k)];
    xs.col(k) = (data.x().col(j).array() - st.column_means[j]) / st.column_scales[j];
  }
  Eigen::VectorXd ys = data.y().array() - st.response_mean;
  return {Dataset(std::move(xs), std::move(ys)), std::move(st)};
}

Standardization identity_standardization(Index p) {
  Standardization st;
  st.column_means = Eigen::VectorXd::Zero(p);
  st.column_scales = Eigen::VectorXd::Ones(p);
  st.retained.resize(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) st.retained[static_cast<std::size_t>(j)] = j;
  st.response_mean = 0.0;
  return st;
}

OriginalScaleCoefficients destandardize(const Eigen::VectorXd& beta_std, const Standardization& st) {
  if (beta_std.size() != static_cast<Index>(st.retained.size())) {
    throw InputError("coefficient vector has length " + std::to_string(beta_std.size()) +
                     ", expected " + std::to_string(st.retained.size()));
  }
  OriginalScaleCoefficients out;
  out.beta = Eigen::VectorXd::Zero(st.original_p());
  for (std::size_t k = 0; k < st.retained.size(); ++k) {
    const Index j = st.retained[k];
    out.beta[j] = beta_std[static_cast<Index>(k)] / st.column_scales[j];
  }
  out.intercept = st.response_mean - out.beta.dot(st.column_means);
  return out;
}

double sample_variance(const Eigen::VectorXd& v) {
  if (v.size() < 2) throw InputError("sample variance needs at least 2 values");
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

void FitConfig::validate(Index n, Index p) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  if (max_sweeps < 1) throw InputError("max_sweeps must be positive");
  if (n < 3) throw InputError("the sequential F-test needs at least 3 observations");
  if (max_support) {
    if (*max_support < 0) throw InputError("max_support must be non-negative");
    if (*max_support > n - 2) throw InputError("max_support must not exceed n - 2");
  }
  (void)p;
}

Index FitConfig::effective_max_support(Index n, Index p) const {
  const Index cap = std::min(p, n - 2);
  return max_support ? std::min(*max_support, cap) : cap;
}

}  // namespace autotune
