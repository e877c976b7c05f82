#pragma once

#include "autotune/model.hpp"

#include <span>
#include <vector>

namespace autotune {

// ||beta_hat - beta||^2 / ||beta||^2. Throws InputError when beta = 0.
double rmse(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta);

// ((beta_hat - beta)' Sigma (beta_hat - beta) + sigma2) / sigma2 with Sigma_kl = rho^|k-l|.
double rte(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta, double rho, double sigma2);

// 1 - ((beta_hat - beta)' Sigma (beta_hat - beta) + sigma2) / (beta' Sigma beta + sigma2)
double pve(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta, double rho, double sigma2);

// Mann-Whitney AUROC with ties counted one half. Throws InputError if truth
// holds a single class.
double auroc(std::span<const double> scores, std::span<const bool> truth);

// Matthews correlation of two supports over p labels; 0 when any marginal is empty.
double mcc(std::span<const Index> est_support, std::span<const Index> true_support, Index p);

// Indices of nonzero entries.
std::vector<Index> support_of(const Eigen::VectorXd& v);

}  // namespace autotune
