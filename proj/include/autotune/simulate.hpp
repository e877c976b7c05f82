#pragma once

#include "autotune/model.hpp"
#include "autotune/var.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace autotune {

// Sparse linear-model DGP: rows of X ~ N(0, Sigma) with Sigma_kl = rho^|k-l|,
// Y = X beta + N(0, sigma2), sigma2 = beta' Sigma beta / snr.
struct RegSimSpec {
  Index n = 80;
  Index p = 750;
  Index s = 5;
  double rho = 0.35;
  double snr = 2.0;
  int beta_type = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class VarDgp { kDiagonal, kBlock2x2 };

// VAR(1) DGP started at zero. After the burn-in n + 1 observations are kept,
// so the lag-1 regression design has n rows.
struct VarSimSpec {
  Index p = 10;
  Index n = 200;
  VarDgp dgp = VarDgp::kDiagonal;
  std::vector<double> snr;  // one per component, or a single value for all
  Index burn_in = 1000;
  std::uint64_t seed = 1;

  void validate() const;
  double snr_of(Index j) const { return snr.size() == 1 ? snr[0] : snr[static_cast<std::size_t>(j)]; }
};

struct RegSimulation {
  Dataset data;
  Eigen::VectorXd beta;
  double sigma2 = 0.0;
  double rho = 0.0;
};

struct VarSimulation {
  SeriesData series;
  Eigen::MatrixXd transition;  // A, p x p
  Eigen::VectorXd noise_var;   // diagonal of Sigma_eps
};

// Beta types 1-5: 1 = s ones equally spaced over 1..p; 2 = s leading ones;
// 3 = s leading values falling linearly 10 -> 0.5; 4 = s leading ones then
// 0.5^(i-s); 5 = type-3 values at type-1 positions.
Eigen::VectorXd make_beta(int beta_type, Index p, Index s);

// Zero-based positions of s points spread evenly (rounded) over 0..p-1.
std::vector<Index> equidistant_positions(Index p, Index s);

// beta' Sigma beta for Sigma_kl = rho^|k-l|, in O(p).
double ar1_quadratic_form(const Eigen::VectorXd& v, double rho);

RegSimulation simulate_regression(const RegSimSpec& spec);
VarSimulation simulate_var(const VarSimSpec& spec);

VarDgp parse_var_dgp(const std::string& name);
std::string to_string(VarDgp dgp);

}  // namespace autotune
