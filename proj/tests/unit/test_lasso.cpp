#include "autotune/errors.hpp"
#include "autotune/lasso.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace autotune;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Dataset random_standardized(oracle::Gauss& g, Index n, Index p, double rho = 0.0, Index s = 3) {
  const MatrixXd x = oracle::standardized(g.correlated(n, p, rho));
  VectorXd beta = VectorXd::Zero(p);
  for (Index j = 0; j < std::min(s, p); ++j) beta[j * (p / std::min(s, p))] = g.uniform(1, 3);
  return Dataset(x, oracle::centered(x * beta + g.vector(n)));
}

std::vector<Index> identity(Index p) {
  std::vector<Index> o(static_cast<std::size_t>(p));
  std::iota(o.begin(), o.end(), Index{0});
  return o;
}

}  // namespace

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(1.2, 0.5) == doctest::Approx(0.7));
  CHECK(soft_threshold(-0.3, 0.5) == 0.0);
  CHECK(soft_threshold(-2.0, 0.5) == doctest::Approx(-1.5));
  for (double x : {-3.0, -0.1, 0.0, 0.4, 9.0}) CHECK(soft_threshold(x, 0.0) == x);
}

TEST_CASE("lambda_max") {
  MatrixXd x = MatrixXd::Ones(4, 1);
  VectorXd y(4);
  y << 1, 2, 3, 4;
  CHECK(lambda_max(Dataset(x, y)) == doctest::Approx(2.5));

  MatrixXd xo(4, 2);
  xo << 1, 1, -1, 1, 1, -1, -1, -1;
  VectorXd yo(4);
  yo << 1, 1, 1, 1;
  CHECK(lambda_max(Dataset(xo, yo)) == 0.0);

  oracle::Gauss g(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = random_standardized(g, 50, 30);
    const double lmax = lambda_max(d);
    CHECK(cd_fixed_lambda(d, lmax).beta.isZero());
    CHECK_FALSE(cd_fixed_lambda(d, 0.99 * lmax).beta.isZero());
  }
}

TEST_CASE("single coordinate closed form") {
  MatrixXd x = MatrixXd::Ones(4, 1);
  VectorXd y(4);
  y << 1, 2, 3, 4;
  const LassoFit fit = cd_fixed_lambda(Dataset(x, y), 0.5);
  CHECK(fit.beta[0] == doctest::Approx(2.0));
  CHECK(fit.converged);
}

TEST_CASE("orthogonal design matches the soft-threshold closed form") {
  oracle::Gauss g(7);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 60, p = 12;
    const MatrixXd x = oracle::orthogonal_design(g, n, p);
    const VectorXd y = x.leftCols(4) * VectorXd::Constant(4, 1.5) + g.vector(n);
    const Dataset d(x, y);
    const double lambda = g.uniform(0.05, 0.8) * lambda_max(d);
    const LassoFit fit = cd_fixed_lambda(d, lambda, 1e-12, 1000);
    for (Index j = 0; j < p; ++j) {
      const double expect = soft_threshold(x.col(j).dot(y) / n, lambda);
      CHECK(std::abs(fit.beta[j] - expect) <= 1e-8);
    }
  }
}

TEST_CASE("lambda = 0 reproduces least squares") {
  oracle::Gauss g(8);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = random_standardized(g, 80, 8, 0.3);
    const LassoFit fit = cd_fixed_lambda(d, 0.0, 1e-10, 5000);
    const VectorXd ols = oracle::ols(d.x(), d.y());
    CHECK((fit.beta - ols).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("residuals are stored exactly and KKT holds at convergence") {
  oracle::Gauss g(9);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset d = random_standardized(g, 40, 100, 0.5);
    const double lambda = 0.2 * lambda_max(d);
    const LassoFit fit = cd_fixed_lambda(d, lambda, 1e-7, 1000);
    CHECK(fit.converged);
    CHECK((fit.residuals - (d.y() - d.x() * fit.beta)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(kkt_check(d, fit.beta, lambda, 1e-6).pass);
    CHECK(oracle::kkt_violation(d.x(), d.y(), fit.beta, lambda) <= 1e-6);
  }
}

TEST_CASE("kkt_check") {
  oracle::Gauss g(10);
  const Dataset d = random_standardized(g, 50, 20);
  const double lmax = lambda_max(d);
  CHECK(kkt_check(d, VectorXd::Zero(20), lmax, 1e-12).pass);
  CHECK(kkt_check(d, VectorXd::Zero(20), 2 * lmax, 0).pass);

  const double lambda = 0.3 * lmax;
  LassoFit fit = cd_fixed_lambda(d, lambda, 1e-10, 1000);
  REQUIRE(kkt_check(d, fit.beta, lambda, 1e-6).pass);
  Index active = 0;
  while (fit.beta[active] == 0.0) ++active;
  fit.beta[active] += 0.1;
  const KktReport bad = kkt_check(d, fit.beta, lambda, 1e-6);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_violation >= 0.05);
}

TEST_CASE("objective never increases across sweeps") {
  oracle::Gauss g(12);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = random_standardized(g, 30, 60, 0.7);
    const double lambda = 0.1 * lambda_max(d);
    VectorXd beta = VectorXd::Zero(d.p());
    VectorXd r = d.y();
    const auto order = identity(d.p());
    double prev = lasso_objective(d, beta, lambda);
    for (int sweep = 0; sweep < 50; ++sweep) {
      cd_sweep(d, lambda, order, beta, r);
      const double now = lasso_objective(d, beta, lambda);
      CHECK(now <= prev + 1e-12);
      prev = now;
    }
  }
}

TEST_CASE("visiting order does not change the solution") {
  oracle::Gauss g(13);
  std::mt19937_64 shuffle(4);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = random_standardized(g, 60, 15, 0.5);
    const double lambda = 0.1 * lambda_max(d);
    auto order = identity(d.p());
    const LassoFit a = cd_fixed_lambda(d, lambda, VectorXd::Zero(d.p()), order, 1e-10, 5000);
    std::shuffle(order.begin(), order.end(), shuffle);
    const LassoFit b = cd_fixed_lambda(d, lambda, VectorXd::Zero(d.p()), order, 1e-10, 5000);
    CHECK((a.beta - b.beta).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("homogeneity in (Y, lambda)") {
  oracle::Gauss g(14);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = random_standardized(g, 40, 50, 0.35);
    const double lambda = 0.25 * lambda_max(d);
    const double c = g.uniform(0.1, 20);
    const Dataset scaled(d.x(), c * d.y());
    const LassoFit a = cd_fixed_lambda(d, lambda, 1e-3, 1000);
    const LassoFit b = cd_fixed_lambda(scaled, c * lambda, 1e-3, 1000);
    CHECK((b.beta - c * a.beta).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, c * a.beta.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("non-convergence is flagged, not thrown") {
  oracle::Gauss g(15);
  const Dataset d = random_standardized(g, 30, 80, 0.9);
  const LassoFit fit = cd_fixed_lambda(d, 0.01 * lambda_max(d), 1e-12, 1);
  CHECK_FALSE(fit.converged);
  // One full sweep plus one restricted sweep over its nonzeros.
  CHECK(fit.sweeps == 2);
}

TEST_CASE("relative l1 change conventions") {
  VectorXd zero = VectorXd::Zero(3), one = VectorXd::Ones(3);
  CHECK(relative_l1_change(zero, zero) == 0.0);
  CHECK(std::isinf(relative_l1_change(one, zero)));
  CHECK(relative_l1_change(2 * one, one) == doctest::Approx(1.0));
}

TEST_CASE("lambda grid") {
  const LambdaGrid grid = LambdaGrid::log_spaced(2.0, 0.01, 5);
  REQUIRE(grid.count() == 5);
  CHECK(grid.values.front() == 2.0);
  CHECK(grid.values.back() == doctest::Approx(0.02));
  for (Index k = 1; k < 5; ++k) {
    CHECK(grid.values[k] < grid.values[k - 1]);
    CHECK(std::log(grid.values[k - 1] / grid.values[k]) == doctest::Approx(std::log(10.0) / 2));
  }
  oracle::Gauss g(16);
  const Dataset wide = random_standardized(g, 20, 40);
  const Dataset tall = random_standardized(g, 40, 20);
  CHECK(LambdaGrid::standard(wide).ratio == doctest::Approx(0.01));
  CHECK(LambdaGrid::standard(tall).ratio == doctest::Approx(1e-4));
  CHECK(LambdaGrid::standard(tall).count() == 100);
  CHECK_THROWS_AS(LambdaGrid::log_spaced(0.0, 0.1, 3), InputError);
}

TEST_CASE("warm-started path agrees with cold starts") {
  oracle::Gauss g(17);
  for (int rep = 0; rep < 3; ++rep) {
    const Dataset d = random_standardized(g, 50, 80, 0.35, 5);
    const LambdaGrid grid = LambdaGrid::log_spaced(lambda_max(d), 0.05, 20);
    const auto path = lasso_path(d, grid, 1e-9, 5000);
    CHECK(path.front().beta.isZero());
    for (std::size_t k = 0; k < path.size(); ++k) {
      const LassoFit cold = cd_fixed_lambda(d, grid.values[k], 1e-9, 5000);
      CHECK((cold.beta - path[k].beta).cwiseAbs().maxCoeff() <= 1e-6);
      CHECK(kkt_check(d, path[k].beta, grid.values[k], 1e-6).pass);
    }
  }
}

TEST_CASE("support shrinks monotonically in lambda on an orthogonal design") {
  oracle::Gauss g(18);
  const MatrixXd x = oracle::orthogonal_design(g, 50, 20);
  const Dataset d(x, x * g.vector(20) + g.vector(50));
  const auto path = lasso_path(d, LambdaGrid::log_spaced(lambda_max(d), 0.001, 40));
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto nnz = [](const VectorXd& b) { return (b.array() != 0.0).count(); };
    CHECK(nnz(path[k].beta) >= nnz(path[k - 1].beta));
  }
}

TEST_CASE("path rejects a non-decreasing grid") {
  oracle::Gauss g(19);
  const Dataset d = random_standardized(g, 20, 5);
  LambdaGrid grid;
  grid.values = {1.0, 1.0};
  CHECK_THROWS_AS(lasso_path(d, grid), InputError);
}
