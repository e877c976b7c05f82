#include "autotune/simulate.hpp"

#include "autotune/errors.hpp"
#include "autotune/random.hpp"

#include <cmath>

namespace autotune {

void RegSimSpec::validate() const {
  if (n < 2) throw InputError("simulation needs n >= 2");
  if (p < 1) throw InputError("simulation needs p >= 1");
  if (s < 1 || s > p) throw InputError("simulation needs 1 <= s <= p");
  if (!(rho >= 0.0 && rho < 1.0)) throw InputError("rho must lie in [0, 1)");
  if (!(snr > 0.0)) throw InputError("snr must be positive");
  if (beta_type < 1 || beta_type > 5) throw InputError("beta type must be 1..5");
}

void VarSimSpec::validate() const {
  if (p < 1) throw InputError("VAR simulation needs p >= 1");
  if (n < 3) throw InputError("VAR simulation needs n >= 3");
  if (burn_in < 0) throw InputError("burn-in must be non-negative");
  if (dgp == VarDgp::kBlock2x2 && p % 2 != 0) throw InputError("block2x2 DGP needs an even p");
  if (snr.size() != 1 && snr.size() != static_cast<std::size_t>(p)) {
    throw InputError("VAR snr must hold one value or one per component");
  }
  for (const double v : snr) {
    if (!(v > 0.0)) throw InputError("VAR snr values must be positive");
  }
}

std::vector<Index> equidistant_positions(Index p, Index s) {
  std::vector<Index> pos;
  if (s == 1) return {0};
  for (Index k = 0; k < s; ++k) {
    const double x = static_cast<double>(k) * static_cast<double>(p - 1) / static_cast<double>(s - 1);
    pos.push_back(static_cast<Index>(std::llround(x)));
  }
  return pos;
}

Eigen::VectorXd make_beta(int beta_type, Index p, Index s) {
  if (s < 0 || s > p) throw InputError("make_beta needs 0 <= s <= p");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (s == 0) return beta;
  const auto linear = [s](Index k) {
    return s == 1 ? 10.0 : 10.0 - 9.5 * static_cast<double>(k) / static_cast<double>(s - 1);
  };
  switch (beta_type) {
    case 1:
      for (const Index j : equidistant_positions(p, s)) beta[j] = 1.0;
      break;
    case 2:
      beta.head(s).setOnes();
      break;
    case 3:
      for (Index k = 0; k < s; ++k) beta[k] = linear(k);
      break;
    case 4:
      beta.head(s).setOnes();
      for (Index i = s; i < p; ++i) beta[i] = std::pow(0.5, static_cast<double>(i + 1 - s));
      break;
    case 5: {
      const auto pos = equidistant_positions(p, s);
      for (Index k = 0; k < s; ++k) beta[pos[static_cast<std::size_t>(k)]] = linear(k);
      break;
    }
    default:
      throw InputError("beta type must be 1..5");
  }
  return beta;
}

double ar1_quadratic_form(const Eigen::VectorXd& v, double rho) {
  // v' Sigma v = sum_k v_k^2 + 2 sum_k v_k w_k, w_k = sum_{l<k} rho^(k-l) v_l.
  double w = 0.0;
  double total = 0.0;
  for (Index k = 0; k < v.size(); ++k) {
    if (k > 0) w = rho * (w + v[k - 1]);
    total += v[k] * v[k] + 2.0 * v[k] * w;
  }
  return total;
}

RegSimulation simulate_regression(const RegSimSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Eigen::VectorXd beta = make_beta(spec.beta_type, spec.p, spec.s);
  const double sigma2 = ar1_quadratic_form(beta, spec.rho) / spec.snr;

  const double innovation = std::sqrt(1.0 - spec.rho * spec.rho);
  Eigen::MatrixXd x(spec.n, spec.p);
  for (Index i = 0; i < spec.n; ++i) {
    double prev = rng.normal();
    x(i, 0) = prev;
    for (Index k = 1; k < spec.p; ++k) {
      prev = spec.rho * prev + innovation * rng.normal();
      x(i, k) = prev;
    }
  }
  const double sigma = std::sqrt(sigma2);
  Eigen::VectorXd y = x * beta;
  for (Index i = 0; i < spec.n; ++i) y[i] += sigma * rng.normal();
  return {Dataset(std::move(x), std::move(y)), std::move(beta), sigma2, spec.rho};
}

VarSimulation simulate_var(const VarSimSpec& spec) {
  spec.validate();
  const Index p = spec.p;
  VarSimulation sim;
  sim.transition = Eigen::MatrixXd::Zero(p, p);
  sim.noise_var.resize(p);
  double signal = 0.0;
  if (spec.dgp == VarDgp::kDiagonal) {
    sim.transition.diagonal().setConstant(0.5);
    signal = 0.5 * 0.5;
  } else {
    for (Index b = 0; b < p; b += 2) sim.transition.block(b, b, 2, 2).setConstant(0.3);
    signal = 0.6 * 0.6;
  }
  for (Index j = 0; j < p; ++j) sim.noise_var[j] = signal / spec.snr_of(j);

  Rng rng(spec.seed);
  const Eigen::VectorXd sd = sim.noise_var.cwiseSqrt();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eps(p);
  sim.series.lags = 1;
  sim.series.values.resize(spec.n + 1, p);
  for (Index t = 0; t < spec.burn_in + spec.n + 1; ++t) {
    for (Index j = 0; j < p; ++j) eps[j] = sd[j] * rng.normal();
    z = sim.transition * z + eps;
    if (t >= spec.burn_in) sim.series.values.row(t - spec.burn_in) = z.transpose();
  }
  return sim;
}

VarDgp parse_var_dgp(const std::string& name) {
  if (name == "diagonal") return VarDgp::kDiagonal;
  if (name == "block2x2") return VarDgp::kBlock2x2;
  throw InputError("unknown VAR DGP '" + name + "' (expected diagonal or block2x2)");
}

std::string to_string(VarDgp dgp) {
  return dgp == VarDgp::kDiagonal ? "diagonal" : "block2x2";
}

}  // namespace autotune
