#pragma once

#include "errors.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace spmnl {

//! Derivatives of one observation's log-likelihood in one predictor entry.
struct ScoreCurvature
{
  double score;     //!< I{y = k} - p_k
  double curvature; //!< -p_k (1 - p_k)
};

namespace detail {

inline void
check_predictor(const Eigen::Ref<const Eigen::VectorXd>& eta)
{
  if (eta.size() < 2)
    throw invalid_predictor("linear predictor needs at least two entries");
  if (!eta.allFinite())
    throw invalid_predictor("linear predictor has non-finite entries");
}

inline void
check_category(const Eigen::Ref<const Eigen::VectorXd>& eta, int k)
{
  if (k < 0 || k >= eta.size())
    throw invalid_predictor("category index out of range");
}

} // namespace detail

//! log sum_j exp(eta_j), evaluated with max subtraction.
inline double
log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& eta)
{
  const double top = eta.maxCoeff();
  return top + std::log((eta.array() - top).exp().sum());
}

//! P(Y = k) = exp(eta_k) / sum_j exp(eta_j) for every category.
inline Eigen::VectorXd
softmax_probabilities(const Eigen::Ref<const Eigen::VectorXd>& eta)
{
  detail::check_predictor(eta);
  Eigen::VectorXd p = (eta.array() - eta.maxCoeff()).exp().matrix();
  return p / p.sum();
}

//! log P(Y = y) under the predictor `eta`.
inline double
log_likelihood_contribution(const Eigen::Ref<const Eigen::VectorXd>& eta, int y)
{
  detail::check_predictor(eta);
  detail::check_category(eta, y);
  return eta[y] - log_sum_exp(eta);
}

//! First and second derivative of log P(Y = y) with respect to eta_k.
inline ScoreCurvature
score_and_curvature(const Eigen::Ref<const Eigen::VectorXd>& eta, int y, int k)
{
  detail::check_predictor(eta);
  detail::check_category(eta, y);
  detail::check_category(eta, k);
  const double pk = std::exp(eta[k] - log_sum_exp(eta));
  return { (y == k ? 1.0 : 0.0) - pk, -pk * (1.0 - pk) };
}

//! Logistic function 1 / (1 + exp(-z)) without overflow.
inline double
logistic(double z)
{
  if (z >= 0.0)
    return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

//! logistic(z) * (1 - logistic(z)), accurate when either factor rounds away.
inline double
logistic_variance(double z)
{
  const double e = std::exp(-std::abs(z));
  return e / ((1.0 + e) * (1.0 + e));
}

} // namespace spmnl
