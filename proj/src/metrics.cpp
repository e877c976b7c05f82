#include "autotune/metrics.hpp"

#include "autotune/errors.hpp"
#include "autotune/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace autotune {

double rmse(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta) {
  if (beta_hat.size() != beta.size()) throw InputError("rmse: length mismatch");
  const double denom = beta.squaredNorm();
  if (denom == 0.0) throw InputError("rmse is undefined for a zero true coefficient vector");
  return (beta_hat - beta).squaredNorm() / denom;
}

double rte(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta, double rho, double sigma2) {
  if (beta_hat.size() != beta.size()) throw InputError("rte: length mismatch");
  if (!(sigma2 > 0.0)) throw InputError("rte needs a positive noise variance");
  return (ar1_quadratic_form(beta_hat - beta, rho) + sigma2) / sigma2;
}

double pve(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta, double rho, double sigma2) {
  if (beta_hat.size() != beta.size()) throw InputError("pve: length mismatch");
  const double err = ar1_quadratic_form(beta_hat - beta, rho);
  return 1.0 - (err + sigma2) / (ar1_quadratic_form(beta, rho) + sigma2);
}

double auroc(std::span<const double> scores, std::span<const bool> truth) {
  if (scores.size() != truth.size()) throw InputError("auroc: length mismatch");
  const std::size_t m = scores.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j < m && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (truth[order[k]]) {
        rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = m - positives;
  if (positives == 0 || negatives == 0) throw InputError("auroc needs both classes present");
  const double pos = static_cast<double>(positives);
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * static_cast<double>(negatives));
}

double mcc(std::span<const Index> est_support, std::span<const Index> true_support, Index p) {
  std::vector<bool> est(static_cast<std::size_t>(p), false);
  std::vector<bool> truth(static_cast<std::size_t>(p), false);
  for (const Index j : est_support) est.at(static_cast<std::size_t>(j)) = true;
  for (const Index j : true_support) truth.at(static_cast<std::size_t>(j)) = true;
  double tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t j = 0; j < est.size(); ++j) {
    if (est[j] && truth[j]) ++tp;
    else if (!est[j] && !truth[j]) ++tn;
    else if (est[j]) ++fp;
    else ++fn;
  }
  const double denom = (tp + fp) * (tp + fn) * (tn + fn) * (tn + fp);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

std::vector<Index> support_of(const Eigen::VectorXd& v) {
  std::vector<Index> out;
  for (Index j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) out.push_back(j);
  }
  return out;
}

}  // namespace autotune
