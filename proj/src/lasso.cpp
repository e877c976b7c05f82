#include "autotune/lasso.hpp"

#include "autotune/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace autotune {

namespace {

// Absolute KKT slack that survives rounding in <X_j, r>/n.
double kkt_floor(const Dataset& data) {
  return 1e-12 * data.y().norm() / std::sqrt(static_cast<double>(data.n()));
}

}  // namespace

double lambda_max(const Dataset& data) {
  if (data.p() == 0) throw InputError("empty design");
  return (data.x().transpose() * data.y()).cwiseAbs().maxCoeff() / static_cast<double>(data.n());
}

LambdaGrid LambdaGrid::log_spaced(double lambda_max, double ratio, int count) {
  if (count < 1) throw InputError("grid needs at least one value");
  if (!(lambda_max > 0.0)) throw InputError("grid needs a positive lambda_max");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InputError("grid ratio must lie in (0, 1]");
  if (count > 1 && ratio == 1.0) throw InputError("grid ratio 1 gives repeated values");
  LambdaGrid grid;
  grid.ratio = count == 1 ? 1.0 : ratio;
  grid.values.resize(static_cast<std::size_t>(count));
  const double log_hi = std::log(lambda_max);
  const double step = count == 1 ? 0.0 : std::log(ratio) / (count - 1);
  for (int k = 0; k < count; ++k) grid.values[static_cast<std::size_t>(k)] = std::exp(log_hi + step * k);
  grid.values.front() = lambda_max;
  return grid;
}

LambdaGrid LambdaGrid::standard(const Dataset& data) {
  const double ratio = data.p() >= data.n() ? 0.01 : 1e-4;
  return log_spaced(lambda_max(data), ratio, 100);
}

double lasso_objective(const Dataset& data, const Eigen::VectorXd& beta, double lambda) {
  const double rss = (data.y() - data.x() * beta).squaredNorm();
  return rss / (2.0 * static_cast<double>(data.n())) + lambda * beta.lpNorm<1>();
}

double relative_l1_change(const Eigen::VectorXd& beta, const Eigen::VectorXd& old) {
  const double denom = old.lpNorm<1>();
  const double num = (beta - old).lpNorm<1>();
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

void cd_sweep(const Dataset& data, double lambda, std::span<const Index> order,
              Eigen::VectorXd& beta, Eigen::VectorXd& r) {
  const auto& x = data.x();
  const auto& scale = data.column_scale();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  for (const Index j : order) {
    const double c = scale[j];
    if (c == 0.0) continue;
    const double old = beta[j];
    const double z = x.col(j).dot(r) * inv_n + c * old;
    const double updated = soft_threshold(z, lambda) / c;
    if (updated != old) {
      r.noalias() -= (updated - old) * x.col(j);
      beta[j] = updated;
    }
  }
}

KktReport kkt_check(const Dataset& data, const Eigen::VectorXd& beta, double lambda, double tol) {
  const Eigen::VectorXd r = data.y() - data.x() * beta;
  const Eigen::VectorXd grad = data.x().transpose() * r / static_cast<double>(data.n());
  double worst = 0.0;
  for (Index j = 0; j < data.p(); ++j) {
    const double g = std::abs(grad[j]);
    const double v = beta[j] != 0.0 ? std::abs(g - lambda) : g - lambda;
    worst = std::max(worst, v);
  }
  return {worst <= tol, worst};
}

LassoFit cd_converge(const Dataset& data, double lambda, Eigen::VectorXd beta, std::span<const Index> order,
                     double tol, int max_sweeps) {
  LassoFit fit;
  fit.lambda = lambda;
  fit.converged = false;
  Eigen::VectorXd r = data.y() - data.x() * beta;
  const double kkt_tol = tol * lambda + kkt_floor(data);
  const double inv_n = 1.0 / static_cast<double>(data.n());
  const auto kkt_holds = [&] {
    for (const Index j : order) {
      const double g = std::abs(data.x().col(j).dot(r)) * inv_n;
      if ((beta[j] != 0.0 ? std::abs(g - lambda) : g - lambda) > kkt_tol) return false;
    }
    return true;
  };

  Eigen::VectorXd old(data.p());
  std::vector<Index> active;
  for (int full = 0; full < max_sweeps; ++full) {
    old = beta;
    cd_sweep(data, lambda, order, beta, r);
    ++fit.sweeps;
    if (relative_l1_change(beta, old) < tol) {
      r = data.y() - data.x() * beta;
      if (kkt_holds()) {
        fit.converged = true;
        break;
      }
    }
    active.clear();
    for (const Index j : order) {
      if (beta[j] != 0.0) active.push_back(j);
    }
    for (int inner = 0; inner < max_sweeps; ++inner) {
      old = beta;
      cd_sweep(data, lambda, active, beta, r);
      ++fit.sweeps;
      if (relative_l1_change(beta, old) < 0.01 * tol) break;
    }
  }
  fit.beta = std::move(beta);
  fit.residuals = data.y() - data.x() * fit.beta;
  return fit;
}

LassoFit cd_fixed_lambda(const Dataset& data, double lambda, const Eigen::VectorXd& beta_init,
                         std::span<const Index> order, double tol, int max_sweeps) {
  if (lambda < 0.0) throw InputError("lambda must be non-negative");
  if (beta_init.size() != data.p()) throw InputError("beta_init length does not match design");
  if (static_cast<Index>(order.size()) != data.p()) throw InputError("order must list every predictor");
  return cd_converge(data, lambda, beta_init, order, tol, max_sweeps);
}

LassoFit cd_fixed_lambda(const Dataset& data, double lambda, double tol, int max_sweeps) {
  std::vector<Index> order(static_cast<std::size_t>(data.p()));
  std::iota(order.begin(), order.end(), Index{0});
  return cd_fixed_lambda(data, lambda, Eigen::VectorXd::Zero(data.p()), order, tol, max_sweeps);
}

std::vector<LassoFit> lasso_path(const Dataset& data, const LambdaGrid& grid, double tol, int max_sweeps) {
  for (std::size_t k = 1; k < grid.values.size(); ++k) {
    if (!(grid.values[k] < grid.values[k - 1])) throw InputError("grid must be strictly decreasing");
  }
  std::vector<Index> order(static_cast<std::size_t>(data.p()));
  std::iota(order.begin(), order.end(), Index{0});

  std::vector<LassoFit> path;
  path.reserve(grid.values.size());
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(data.p());
  for (const double lambda : grid.values) {
    path.push_back(cd_fixed_lambda(data, lambda, warm, order, tol, max_sweeps));
    warm = path.back().beta;
  }
  return path;
}

}  // namespace autotune
