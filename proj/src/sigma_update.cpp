#include "autotune/sigma_update.hpp"

#include "autotune/errors.hpp"
#include "autotune/fdist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace autotune {

namespace {

double sample_sd(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

double dispersion(const Eigen::VectorXd& v, RankingNorm norm) {
  if (norm == RankingNorm::kDispersionL2) return sample_sd(v);
  return v.lpNorm<1>() / static_cast<double>(v.size());
}

double cached_cutoff(double alpha, Index df2) {
  thread_local std::map<std::pair<double, Index>, double> cache;
  const auto key = std::make_pair(alpha, df2);
  if (const auto it = cache.find(key); it != cache.end()) return it->second;
  const double q = f_quantile(alpha, {1.0, static_cast<double>(df2)});
  cache.emplace(key, q);
  return q;
}

// Incrementally grown orthogonal basis of accepted columns.
class GramSchmidtBasis {
 public:
  explicit GramSchmidtBasis(Index n) : n_(n) {}

  // Orthogonalizes x against the basis (two passes of modified Gram-Schmidt).
  Eigen::VectorXd orthogonalize(const Eigen::VectorXd& x) const {
    Eigen::VectorXd u = x;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < basis_.size(); ++k) {
        u.noalias() -= (basis_[k].dot(u) / sq_norms_[k]) * basis_[k];
      }
    }
    return u;
  }

  bool degenerate(const Eigen::VectorXd& u) const {
    return u.squaredNorm() < 1e-10 * static_cast<double>(n_);
  }

  void push(Eigen::VectorXd u) {
    sq_norms_.push_back(u.squaredNorm());
    basis_.push_back(std::move(u));
  }

 private:
  Index n_;
  std::vector<Eigen::VectorXd> basis_;
  std::vector<double> sq_norms_;
};

}  // namespace

Eigen::VectorXd partial_residual(const Eigen::VectorXd& r, const Eigen::VectorXd& x_j, double beta_j) {
  if (r.size() != x_j.size()) throw InputError("partial residual: length mismatch");
  return r + x_j * beta_j;
}

PartialResidualSummary rank_predictors(const Dataset& data, const Eigen::VectorXd& r,
                                       const Eigen::VectorXd& beta, RankingNorm norm) {
  const Index p = data.p();
  if (beta.size() != p || r.size() != data.n()) throw InputError("rank_predictors: shape mismatch");

  PartialResidualSummary out;
  out.dispersion.resize(p);
  const double base = dispersion(r, norm);
  for (Index j = 0; j < p; ++j) {
    out.dispersion[j] = beta[j] == 0.0 ? base : dispersion(r + data.x().col(j) * beta[j], norm);
  }
  out.ranking.resize(static_cast<std::size_t>(p));
  std::iota(out.ranking.begin(), out.ranking.end(), Index{0});
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](Index a, Index b) { return out.dispersion[a] > out.dispersion[b]; });
  return out;
}

SigmaEstimate sequential_gs_ftest(const Dataset& data, std::span<const Index> ranking, double alpha,
                                  Index max_support) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  const Index n = data.n();
  max_support = std::min(max_support, n - 2);

  SigmaEstimate est;
  Eigen::VectorXd y_temp = data.y();
  double y_temp_ss = y_temp.squaredNorm();
  const double total_ss = y_temp_ss;
  est.rss_seq.push_back(y_temp_ss);

  GramSchmidtBasis basis(n);
  for (const Index j : ranking) {
    if (static_cast<Index>(est.support_set.size()) >= max_support) break;
    Eigen::VectorXd u = basis.orthogonalize(data.x().col(j));
    if (basis.degenerate(u)) continue;

    const Index model_size = static_cast<Index>(est.support_set.size()) + 1;
    const double uu = u.squaredNorm();
    const double coef = y_temp.dot(u) / uu;
    Eigen::VectorXd deflated = y_temp - coef * u;
    const double rss = deflated.squaredNorm();
    const double df2 = static_cast<double>(n - model_size);

    if (rss < 1e-12 * total_ss) {
      est.saturated = true;
      est.support_set.push_back(j);
      est.rss_seq.push_back(rss);
      est.f_stats.push_back(std::numeric_limits<double>::infinity());
      est.cutoffs.push_back(cached_cutoff(alpha, n - model_size));
      est.sigma2 = rss / df2;
      est.k0 = static_cast<Index>(est.support_set.size()) + 1;
      est.r2 = r2_curves(est.rss_seq, total_ss, n);
      return est;
    }

    const double f_stat = (y_temp_ss - rss) / (rss / df2);
    const double cutoff = cached_cutoff(alpha, n - model_size);
    est.f_stats.push_back(f_stat);
    est.cutoffs.push_back(cutoff);
    if (f_stat <= cutoff) break;

    est.support_set.push_back(j);
    est.rss_seq.push_back(rss);
    y_temp = std::move(deflated);
    y_temp_ss = rss;
    basis.push(std::move(u));
  }

  est.k0 = static_cast<Index>(est.support_set.size()) + 1;
  est.sigma2 = y_temp_ss / static_cast<double>(n - static_cast<Index>(est.support_set.size()));
  est.r2 = r2_curves(est.rss_seq, total_ss, n);
  return est;
}

R2Curve r2_curves(std::span<const double> rss_seq, double y_total_ss, Index n) {
  R2Curve out;
  for (std::size_t k = 0; k < rss_seq.size(); ++k) {
    const Index dof = n - static_cast<Index>(k) - 1;
    if (dof <= 0) break;
    const double r2 = y_total_ss > 0.0 ? 1.0 - rss_seq[k] / y_total_ss : 0.0;
    out.cumulative.push_back(r2);
    out.adjusted.push_back(1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(dof));
  }
  return out;
}

std::vector<double> nested_rss_profile(const Dataset& data, std::span<const Index> ranking, Index max_rank) {
  const Index n = data.n();
  std::vector<double> rss{data.y().squaredNorm()};
  Eigen::VectorXd y_temp = data.y();
  GramSchmidtBasis basis(n);
  for (const Index j : ranking) {
    if (static_cast<Index>(rss.size()) > max_rank) break;
    Eigen::VectorXd u = basis.orthogonalize(data.x().col(j));
    if (basis.degenerate(u)) {
      rss.push_back(rss.back());
      continue;
    }
    y_temp.noalias() -= (y_temp.dot(u) / u.squaredNorm()) * u;
    rss.push_back(y_temp.squaredNorm());
    basis.push(std::move(u));
  }
  return rss;
}

}  // namespace autotune
