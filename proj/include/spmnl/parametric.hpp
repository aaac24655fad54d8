#pragma once

#include "dataset.hpp"
#include "errors.hpp"
#include "model_core.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace spmnl {

struct ParametricOptions
{
  double tol = 1e-8; //!< max-norm of the score at convergence
  int max_iter = 100;
  int max_halvings = 30;
  bool intercept = true;
};

struct ParametricFitResult
{
  //! (K-1) x p' with p' = p + 1 when an intercept ("category effect") is
  //! fitted; the intercept is column 0.
  Eigen::MatrixXd coefficients;
  Eigen::MatrixXd standard_errors;
  //! Covariance of the coefficients stacked category block by block.
  Eigen::MatrixXd vcov;
  double loglik = 0.0;
  std::vector<double> loglik_trace;
  double score_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool intercept = true;
  ModelSpec spec;
};

//! Square roots of diag(vcov), reshaped to `rows` x `cols` (row-major blocks).
inline Eigen::MatrixXd
standard_errors(const Eigen::MatrixXd& vcov, Eigen::Index rows, Eigen::Index cols)
{
  if (vcov.rows() != vcov.cols() || vcov.rows() != rows * cols)
    throw shape_error("covariance size does not match the coefficient layout");
  Eigen::MatrixXd se(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double v = vcov(r * cols + c, r * cols + c);
      if (!(v >= -1e-10))
        throw numerical_failure("negative variance on the covariance diagonal");
      se(r, c) = std::sqrt(std::max(v, 0.0));
    }
  }
  return se;
}

namespace detail {

inline Eigen::MatrixXd
design_matrix(const Dataset& data, bool intercept)
{
  if (!intercept)
    return data.x;
  Eigen::MatrixXd z(data.size(), data.p() + 1);
  z.col(0).setOnes();
  z.rightCols(data.p()) = data.x;
  return z;
}

//! Linear predictors for all categories: n x K, reference column zero.
inline Eigen::MatrixXd
linear_predictors(const Eigen::MatrixXd& z, const Eigen::MatrixXd& coef, const ModelSpec& spec)
{
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(z.rows(), spec.categories);
  for (int r = 0; r < spec.free_count(); ++r)
    eta.col(spec.category_of_row(r)) = z * coef.row(r).transpose();
  return eta;
}

inline double
total_loglik(const Eigen::MatrixXd& eta, const std::vector<int>& y)
{
  long double ll = 0.0L;
  for (Eigen::Index i = 0; i < eta.rows(); ++i) {
    const Eigen::VectorXd row = eta.row(i).transpose();
    ll += row[y[static_cast<size_t>(i)]] - log_sum_exp(row);
  }
  return static_cast<double>(ll);
}

//! Rounding slack for comparing two log-likelihood sums of magnitude |ll|.
inline double
ascent_slack(double ll)
{
  return 4.0 * std::numeric_limits<double>::epsilon() * std::abs(ll);
}

struct ScoreInformation
{
  Eigen::VectorXd score;
  Eigen::MatrixXd information;
};

inline ScoreInformation
score_information(const Eigen::MatrixXd& z,
                  const Eigen::MatrixXd& eta,
                  const std::vector<int>& y,
                  const ModelSpec& spec)
{
  const auto pp = z.cols();
  const int free = spec.free_count();
  const auto dim = free * pp;
  ScoreInformation out{ Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim) };
  Eigen::VectorXd prob(free);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const Eigen::VectorXd p = softmax_probabilities(eta.row(i).transpose());
    for (int r = 0; r < free; ++r)
      prob[r] = p[spec.category_of_row(r)];
    const Eigen::VectorXd zi = z.row(i).transpose();
    const Eigen::MatrixXd zz = zi * zi.transpose();
    for (int r = 0; r < free; ++r) {
      const double ind = y[static_cast<size_t>(i)] == spec.category_of_row(r) ? 1.0 : 0.0;
      out.score.segment(r * pp, pp) += (ind - prob[r]) * zi;
      for (int s = r; s < free; ++s) {
        const double w = prob[r] * ((r == s ? 1.0 : 0.0) - prob[s]);
        out.information.block(r * pp, s * pp, pp, pp) += w * zz;
      }
    }
  }
  for (int r = 0; r < free; ++r)
    for (int s = 0; s < r; ++s)
      out.information.block(r * pp, s * pp, pp, pp) =
        out.information.block(s * pp, r * pp, pp, pp).transpose();
  return out;
}

inline void
check_fit_preconditions(const Dataset& data, const ModelSpec& spec, Eigen::Index pp)
{
  validate(data);
  spec.validate();
  if (spec.categories != data.categories)
    throw config_error("model and dataset disagree on the number of categories");
  const auto counts = data.category_counts();
  for (size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0)
      throw insufficient_data("category " + std::to_string(c) + " never occurs in the response");
  }
  if (data.size() <= static_cast<Eigen::Index>(spec.free_count()) * pp)
    throw insufficient_data("fewer observations than free coefficients");
}

} // namespace detail

//! Log-likelihood of a parametric MNL with coefficients `coef` laid out as in
//! ParametricFitResult.
inline double
parametric_loglik(const Dataset& data,
                  const ModelSpec& spec,
                  const Eigen::MatrixXd& coef,
                  bool intercept = true)
{
  const Eigen::MatrixXd z = detail::design_matrix(data, intercept);
  if (coef.rows() != spec.free_count() || coef.cols() != z.cols())
    throw shape_error("coefficient matrix does not match the design");
  return detail::total_loglik(detail::linear_predictors(z, coef, spec), data.y);
}

//! Joint Newton-Raphson with step halving for the parametric MNL.
inline ParametricFitResult
fit_parametric(const Dataset& data, const ModelSpec& spec, const ParametricOptions& options = {})
{
  const Eigen::MatrixXd z = detail::design_matrix(data, options.intercept);
  const auto pp = z.cols();
  detail::check_fit_preconditions(data, spec, pp);
  const int free = spec.free_count();
  if (pp == 0)
    throw config_error("parametric model without covariates or intercept");

  ParametricFitResult fit;
  fit.spec = spec;
  fit.intercept = options.intercept;
  fit.coefficients = Eigen::MatrixXd::Zero(free, pp);

  Eigen::MatrixXd eta = detail::linear_predictors(z, fit.coefficients, spec);
  double ll = detail::total_loglik(eta, data.y);
  fit.loglik_trace.push_back(ll);
  auto si = detail::score_information(z, eta, data.y, spec);

  auto flatten = [&](const Eigen::MatrixXd& m) {
    Eigen::VectorXd v(free * pp);
    for (int r = 0; r < free; ++r)
      v.segment(r * pp, pp) = m.row(r).transpose();
    return v;
  };
  auto unflatten = [&](const Eigen::VectorXd& v) {
    Eigen::MatrixXd m(free, pp);
    for (int r = 0; r < free; ++r)
      m.row(r) = v.segment(r * pp, pp).transpose();
    return m;
  };

  // a vanishing score alone is not enough: under separation the score
  // decays while Newton steps stay large
  auto stationary = [&](const Eigen::VectorXd& step) {
    return si.score.lpNorm<Eigen::Infinity>() < options.tol &&
           step.lpNorm<Eigen::Infinity>() < std::sqrt(options.tol);
  };
  auto newton_step = [&] {
    Eigen::LLT<Eigen::MatrixXd> llt(si.information);
    const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
    if (!(rcond > 1e-14))
      throw non_identified("information matrix is singular (rcond " + std::to_string(rcond) +
                             "); check for separation or collinear covariates",
                           rcond);
    return Eigen::VectorXd(llt.solve(si.score));
  };

  Eigen::VectorXd step = newton_step();
  for (int it = 0; it < options.max_iter; ++it) {
    if (stationary(step))
      break;
    const Eigen::VectorXd theta = flatten(fit.coefficients);

    bool accepted = false;
    double lambda = 1.0;
    for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
      const Eigen::MatrixXd cand = unflatten(theta + lambda * step);
      const Eigen::MatrixXd cand_eta = detail::linear_predictors(z, cand, spec);
      const double cand_ll = detail::total_loglik(cand_eta, data.y);
      if (std::isfinite(cand_ll) && cand_ll >= ll - detail::ascent_slack(ll)) {
        fit.coefficients = cand;
        eta = cand_eta;
        ll = cand_ll;
        accepted = true;
        break;
      }
    }
    fit.iterations = it + 1;
    if (!accepted)
      break; // no ascent left at machine precision
    fit.loglik_trace.push_back(ll);
    si = detail::score_information(z, eta, data.y, spec);
    step = newton_step();
  }
  fit.score_norm = si.score.lpNorm<Eigen::Infinity>();
  fit.converged = stationary(step);
  fit.loglik = ll;
  if (!fit.converged && eta.cwiseAbs().maxCoeff() > 30.0)
    throw non_identified("fitted probabilities saturate without converging; the data appear separated", 0.0);

  Eigen::LLT<Eigen::MatrixXd> llt(si.information);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14))
    throw non_identified("information matrix is singular at the final iterate",
                         llt.info() == Eigen::Success ? llt.rcond() : 0.0);
  fit.vcov = llt.solve(Eigen::MatrixXd::Identity(free * pp, free * pp));
  fit.vcov = 0.5 * (fit.vcov + fit.vcov.transpose()).eval();
  fit.standard_errors = standard_errors(fit.vcov, free, pp);
  return fit;
}

//! Fitted category probabilities, n x K.
inline Eigen::MatrixXd
fitted_probabilities(const ParametricFitResult& fit, const Dataset& data)
{
  const Eigen::MatrixXd z = detail::design_matrix(data, fit.intercept);
  const Eigen::MatrixXd eta = detail::linear_predictors(z, fit.coefficients, fit.spec);
  Eigen::MatrixXd p(eta.rows(), eta.cols());
  for (Eigen::Index i = 0; i < eta.rows(); ++i)
    p.row(i) = softmax_probabilities(eta.row(i).transpose()).transpose();
  return p;
}

} // namespace spmnl
