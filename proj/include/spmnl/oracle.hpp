#pragma once

// Slow, independent reference computations for the test suites. Nothing
// here calls the Newton fitters or the local-likelihood machinery.

#include "dataset.hpp"
#include "errors.hpp"
#include "kernels.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace spmnl::oracle {

struct PredictorForm
{
  bool intercept = true;
};

//! Exact MNL log-likelihood of stacked coefficients theta (row blocks of
//! size p', one per non-reference category), summed in long double.
inline long double
mnl_loglik(const Dataset& data, const ModelSpec& spec, const PredictorForm& form, const Eigen::VectorXd& theta)
{
  const auto p = data.p();
  const auto pp = p + (form.intercept ? 1 : 0);
  long double ll = 0.0L;
  std::vector<long double> eta(static_cast<size_t>(spec.categories));
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    int r = 0;
    long double top = 0.0L;
    for (int c = 0; c < spec.categories; ++c) {
      long double v = 0.0L;
      if (c != spec.reference) {
        const auto off = r * pp;
        if (form.intercept)
          v += theta[off];
        for (Eigen::Index j = 0; j < p; ++j)
          v += theta[off + (form.intercept ? 1 : 0) + j] * data.x(i, j);
        ++r;
      }
      eta[static_cast<size_t>(c)] = v;
      top = std::max(top, v);
    }
    long double sum = 0.0L;
    for (auto v : eta)
      sum += std::exp(v - top);
    ll += eta[static_cast<size_t>(data.y[static_cast<size_t>(i)])] - top - std::log(sum);
  }
  return ll;
}

//! Hooke-Jeeves pattern search maximising `f` from `start`.
inline Eigen::VectorXd
pattern_search_maximise(const std::function<long double(const Eigen::VectorXd&)>& f,
                        Eigen::VectorXd start,
                        double initial_step = 0.5,
                        double min_step = 1e-11,
                        long max_evaluations = 20'000'000)
{
  long evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& v) {
    if (++evaluations > max_evaluations)
      throw oracle_failure("pattern search exhausted its evaluation budget");
    return f(v);
  };
  auto explore = [&](Eigen::VectorXd& x, long double& fx, double step) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      for (double dir : { 1.0, -1.0 }) {
        Eigen::VectorXd y = x;
        y[j] += dir * step;
        const long double fy = eval(y);
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          break;
        }
      }
    }
  };

  Eigen::VectorXd base = std::move(start);
  long double fbase = eval(base);
  double step = initial_step;
  while (step > min_step) {
    Eigen::VectorXd x = base;
    long double fx = fbase;
    explore(x, fx, step);
    if (!(fx > fbase)) {
      step *= 0.5;
      continue;
    }
    // pattern moves while they keep paying off
    while (true) {
      Eigen::VectorXd y = x + (x - base);
      base = x;
      fbase = fx;
      long double fy = eval(y);
      explore(y, fy, step);
      if (fy > fbase) {
        x = std::move(y);
        fx = fy;
      } else {
        break;
      }
    }
  }
  return base;
}

//! Maximum likelihood coefficients of a parametric MNL by derivative-free
//! search; returned as (K-1) x p' like ParametricFitResult::coefficients.
inline Eigen::MatrixXd
oracle_mle(const Dataset& data, const ModelSpec& spec, const PredictorForm& form = {})
{
  const auto pp = data.p() + (form.intercept ? 1 : 0);
  const auto dim = pp * spec.free_count();
  if (dim > 30)
    throw oracle_failure("oracle_mle is limited to 30 free parameters");
  auto f = [&](const Eigen::VectorXd& theta) { return mnl_loglik(data, spec, form, theta); };
  // restart from the previous optimum with a fresh step to escape stalls
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  for (int round = 0; round < 3; ++round)
    theta = pattern_search_maximise(f, theta, round == 0 ? 0.5 : 1e-3);
  Eigen::MatrixXd out(spec.free_count(), pp);
  for (int r = 0; r < spec.free_count(); ++r)
    out.row(r) = theta.segment(r * pp, pp).transpose();
  return out;
}

//! Golden-section search for the maximiser of a unimodal f on [lo, hi].
//! Values are compared in long double so a flat top does not stall the
//! bracket early.
inline double
golden_section_maximise(const std::function<long double(double)>& f, double lo, double hi, double tol = 1e-12)
{
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  long double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

//! Product of univariate normal densities phi((t_d - ti_d) / h_d) / h_d.
inline double
product_gaussian_weight(const Eigen::VectorXd& h,
                        const Eigen::Ref<const Eigen::RowVectorXd>& t,
                        const Eigen::Ref<const Eigen::RowVectorXd>& ti)
{
  double w = 1.0;
  for (Eigen::Index d = 0; d < h.size(); ++d) {
    const double z = (t[d] - ti[d]) / h[d];
    w *= std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * h[d]);
  }
  return w;
}

//! Kernel-weighted local score of category `row` at query point t with
//! candidate value m, from a full softmax per observation.
inline double
local_score(const Dataset& data,
            const ModelSpec& spec,
            int row,
            const Eigen::Ref<const Eigen::RowVectorXd>& t,
            const Eigen::MatrixXd& beta,
            const Eigen::MatrixXd& m_obs,
            const KernelConfig& kernel,
            double m)
{
  const int k = spec.category_of_row(row);
  long double score = 0.0L;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    std::vector<long double> eta(static_cast<size_t>(spec.categories), 0.0L);
    for (int r = 0; r < spec.free_count(); ++r) {
      const long double lin = data.x.row(i).dot(beta.row(r));
      eta[static_cast<size_t>(spec.category_of_row(r))] = lin + (r == row ? m : m_obs(r, i));
    }
    long double sum = 0.0L;
    for (auto v : eta)
      sum += std::exp(v);
    const long double pk = std::exp(eta[static_cast<size_t>(k)]) / sum;
    const double w = product_gaussian_weight(kernel.bandwidths, t, data.t.row(i));
    score += w * ((data.y[static_cast<size_t>(i)] == k ? 1.0L : 0.0L) - pk);
  }
  return static_cast<double>(score);
}

//! Root of the local first order condition by bisection on [-50, 50].
//! The local score is strictly decreasing in m, so a sign change brackets
//! the unique root; no sign change means a one-sided local likelihood.
inline double
oracle_local_solve(const Dataset& data,
                   const ModelSpec& spec,
                   int row,
                   const Eigen::Ref<const Eigen::RowVectorXd>& t,
                   const Eigen::MatrixXd& beta,
                   const Eigen::MatrixXd& m_obs,
                   const KernelConfig& kernel,
                   double bracket = 50.0)
{
  auto score = [&](double m) { return local_score(data, spec, row, t, beta, m_obs, kernel, m); };
  double lo = -bracket, hi = bracket;
  const double slo = score(lo), shi = score(hi);
  if (!(slo > 0.0) || !(shi < 0.0))
    throw separation_error("local score does not change sign on the bracket");
  for (int it = 0; it < 400 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = score(mid);
    if (s > 0.0)
      lo = mid;
    else if (s < 0.0)
      hi = mid;
    else
      return mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace spmnl::oracle
