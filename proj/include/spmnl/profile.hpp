#pragma once

#include "dataset.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "model_core.hpp"
#include "parametric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace spmnl {

struct SemiparametricOptions
{
  double tol = 1e-6;        //!< max-norm change of (beta, m) and profile score
  int max_iter = 200;
  double inner_tol = 1e-10; //!< local Newton step size at which a local solve stops
  int inner_max_iter = 50;  //!< local Newton steps per point and solve
  int max_sweeps = 100;     //!< Gauss-Seidel sweeps over categories (K > 2)
  double step_cap = 5.0;    //!< bound on |delta m| per local Newton step
  int max_halvings = 30;
};

//! Parametric coefficients and smooth-function values at the observation
//! points, one row per non-reference category.
struct ProfileState
{
  Eigen::MatrixXd beta; //!< (K-1) x p
  Eigen::MatrixXd m;    //!< (K-1) x n
};

struct SmoothState
{
  Eigen::MatrixXd m;                 //!< (K-1) x n
  std::vector<Eigen::MatrixXd> m_grad; //!< per category row: n x p, d m(t_i) / d beta_k
};

struct SemiparametricFitResult
{
  Eigen::MatrixXd beta;
  //! Square roots of diag(-B^{-1}) per category ("profile-information SEs").
  Eigen::MatrixXd beta_se;
  SmoothState smooth;
  std::vector<double> loglik_trace;
  bool converged = false;
  int iterations = 0;
  KernelConfig kernel;
  ModelSpec spec;
  SemiparametricOptions options;
  double profile_score_norm = 0.0;
  std::vector<std::string> warnings;
  ParametricFitResult start; //!< the parametric fit used for starting values

  ProfileState state() const { return { beta, smooth.m }; }
};

//! Kernel-weighted sums of l'_ik and l''_ik over all observations.
struct LocalSums
{
  double score = 0.0;
  double curvature = 0.0;
  double weight_sum = 0.0;
};

struct LocalSolve
{
  double m = 0.0;
  int iterations = 0;
  bool converged = false;
  bool capped = false; //!< some step was clipped to the step cap
};

//! The one-dimensional local likelihood of category `row` as a function of
//! the candidate value m_k(t).
//!
//! For observation i the category-k predictor is x_i' beta_k + m, while the
//! other categories keep x_i' beta_j + m_j(t_i). Only the offset
//! x_i' beta_k - log sum_{j != k} exp(eta_ji) enters p_ik, so it is
//! precomputed once per state.
class LocalLikelihood
{
public:
  LocalLikelihood(const Dataset& data,
                  const ModelSpec& spec,
                  int row,
                  const ProfileState& state,
                  const KernelConfig& kernel)
    : data_(&data)
    , kernel_(&kernel)
    , inv_norm_(1.0 / kernel.normaliser())
    , offset_(data.size())
    , target_(data.size())
  {
    const int k = spec.category_of_row(row);
    const auto n = data.size();
    const int free = spec.free_count();
    Eigen::VectorXd others(free); // eta_j for j != k, reference excluded
    for (Eigen::Index i = 0; i < n; ++i) {
      double top = 0.0; // reference predictor
      for (int s = 0; s < free; ++s) {
        others[s] = s == row ? -std::numeric_limits<double>::infinity()
                             : data.x.row(i).dot(state.beta.row(s)) + state.m(s, i);
        top = std::max(top, others[s]);
      }
      double sum = std::exp(-top);
      for (int s = 0; s < free; ++s)
        sum += s == row ? 0.0 : std::exp(others[s] - top);
      offset_[i] = data.x.row(i).dot(state.beta.row(row)) - (top + std::log(sum));
      target_[i] = data.y[static_cast<size_t>(i)] == k ? 1.0 : 0.0;
    }
  }

  Eigen::Index size() const { return offset_.size(); }

  //! Kernel weights of all observations for the query point `t`.
  Eigen::VectorXd weights(const Eigen::Ref<const Eigen::RowVectorXd>& t) const
  {
    if (t.size() != data_->q())
      throw shape_error("query point dimension does not match the smooth covariates");
    Eigen::VectorXd w(size());
    for (Eigen::Index i = 0; i < size(); ++i)
      w[i] = kernel_weight_unchecked(*kernel_, inv_norm_, t, data_->t.row(i));
    return w;
  }

  LocalSums sums(const Eigen::Ref<const Eigen::VectorXd>& w, double m) const
  {
    LocalSums out;
    for (Eigen::Index i = 0; i < size(); ++i) {
      // p and 1 - p from one exponential; neither rounds to zero before underflow
      const double z = offset_[i] + m;
      const double e = std::exp(-std::abs(z));
      const double big = 1.0 / (1.0 + e);
      const double small = e * big;
      const double p = z >= 0.0 ? big : small;
      const double q = z >= 0.0 ? small : big;
      out.score += w[i] * (target_[i] > 0.5 ? q : -p);
      out.curvature -= w[i] * (big * small);
      out.weight_sum += w[i];
    }
    return out;
  }

  //! d m(t) / d beta_k from differentiating the local first order condition.
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& w, double m) const
  {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(data_->p());
    double den = 0.0;
    for (Eigen::Index i = 0; i < size(); ++i) {
      const double c = w[i] * logistic_variance(offset_[i] + m);
      num += c * data_->x.row(i).transpose();
      den += c;
    }
    if (!(den > 0.0))
      throw numerical_failure("local curvature sum vanished in the least favourable gradient");
    return -num / den;
  }

  //! Newton iterations m <- m - score / curvature, each step clipped to
  //! `step_cap`, until the step falls below `tol`.
  LocalSolve solve(const Eigen::Ref<const Eigen::VectorXd>& w,
                   double start,
                   double tol,
                   int max_iter,
                   double step_cap) const
  {
    LocalSolve out{ start, 0, false, false };
    for (; out.iterations < max_iter;) {
      const LocalSums s = sums(w, out.m);
      if (!(s.weight_sum > 0.0))
        throw no_local_data("all kernel weights vanish at the query point");
      if (!(s.curvature < 0.0))
        break; // probabilities saturated; the caller sees converged == false
      double step = -s.score / s.curvature;
      if (std::abs(step) > step_cap) {
        step = std::copysign(step_cap, step);
        out.capped = true;
      }
      out.m += step;
      ++out.iterations;
      if (std::abs(step) < tol) {
        out.converged = true;
        break;
      }
    }
    return out;
  }

  double offset(Eigen::Index i) const { return offset_[i]; }
  double target(Eigen::Index i) const { return target_[i]; }

private:
  const Dataset* data_;
  const KernelConfig* kernel_;
  double inv_norm_;
  Eigen::VectorXd offset_;
  Eigen::VectorXd target_;
};

namespace detail {

inline void
check_semiparametric_inputs(const Dataset& data,
                            const ModelSpec& spec,
                            const ProfileState& state,
                            const KernelConfig& kernel)
{
  kernel.validate();
  if (kernel.dimension() != data.q())
    throw shape_error("kernel dimension does not match the smooth covariates");
  if (state.beta.rows() != spec.free_count() || state.beta.cols() != data.p())
    throw shape_error("beta must be (K-1) x p");
  if (state.m.rows() != spec.free_count() || state.m.cols() != data.size())
    throw shape_error("m must be (K-1) x n");
}

inline void
check_row(const ModelSpec& spec, int row)
{
  if (row < 0 || row >= spec.free_count())
    throw config_error("category row out of range (the reference has no row)");
}

//! log-likelihood of all observations at the observation-point values of m.
inline double
state_loglik(const Dataset& data, const ModelSpec& spec, const ProfileState& state)
{
  const int free = spec.free_count();
  Eigen::VectorXd eta(spec.categories);
  long double ll = 0.0L;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    eta.setZero();
    for (int r = 0; r < free; ++r)
      eta[spec.category_of_row(r)] = data.x.row(i).dot(state.beta.row(r)) + state.m(r, i);
    ll += eta[data.y[static_cast<size_t>(i)]] - log_sum_exp(eta);
  }
  return static_cast<double>(ll);
}

//! Kernel weights between all pairs of observation points, column j for
//! query point t_j; left empty when n is too large to hold it.
struct WeightTable
{
  Eigen::MatrixXd w;

  static constexpr Eigen::Index max_points = 6000;

  WeightTable() = default;
  WeightTable(const Dataset& data, const KernelConfig& kernel)
  {
    const auto n = data.size();
    if (n > max_points)
      return;
    const double inv_norm = 1.0 / kernel.normaliser();
    w.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      w(j, j) = kernel_weight_unchecked(kernel, inv_norm, data.t.row(j), data.t.row(j));
      for (Eigen::Index i = j + 1; i < n; ++i)
        w(i, j) = w(j, i) = kernel_weight_unchecked(kernel, inv_norm, data.t.row(j), data.t.row(i));
    }
  }

  template<typename F>
  void at_point(const LocalLikelihood& local, const Dataset& data, Eigen::Index j, F&& f) const
  {
    if (w.size() > 0)
      f(w.col(j));
    else
      f(local.weights(data.t.row(j)));
  }
};

struct RowSolve
{
  Eigen::VectorXd m;
  Eigen::Index capped = 0;
  Eigen::Index unconverged = 0;
};

//! Solves the local likelihood of category `row` at every observation point,
//! warm-started from `start`.
inline RowSolve
solve_row(const Dataset& data,
          const ModelSpec& spec,
          int row,
          const ProfileState& state,
          const KernelConfig& kernel,
          const Eigen::VectorXd& start,
          const SemiparametricOptions& options,
          const WeightTable& table = {})
{
  const LocalLikelihood local(data, spec, row, state, kernel);
  RowSolve out{ Eigen::VectorXd(data.size()) };
  for (Eigen::Index j = 0; j < data.size(); ++j) {
    table.at_point(local, data, j, [&](const auto& w) {
      const LocalSolve s =
        local.solve(w, start[j], options.inner_tol, options.inner_max_iter, options.step_cap);
      out.m[j] = s.m;
      out.capped += s.capped ? 1 : 0;
      out.unconverged += s.converged ? 0 : 1;
    });
  }
  return out;
}

struct JointSolveReport
{
  int sweeps = 0;
  double capped_fraction = 0.0;
  double unconverged_fraction = 0.0;
};

//! Gauss-Seidel sweeps over categories until every m row is a local
//! solution given the others.
inline JointSolveReport
solve_all_rows(const Dataset& data,
               const ModelSpec& spec,
               ProfileState& state,
               const KernelConfig& kernel,
               const SemiparametricOptions& options,
               const WeightTable& table = {})
{
  JointSolveReport report;
  const int free = spec.free_count();
  const double points = static_cast<double>(data.size() * free);
  for (int sweep = 0; sweep < std::max(1, options.max_sweeps); ++sweep) {
    double change = 0.0;
    Eigen::Index capped = 0, unconverged = 0;
    for (int r = 0; r < free; ++r) {
      RowSolve s = solve_row(data, spec, r, state, kernel, state.m.row(r).transpose(), options, table);
      change = std::max(change, (s.m - state.m.row(r).transpose()).lpNorm<Eigen::Infinity>());
      state.m.row(r) = s.m.transpose();
      capped += s.capped;
      unconverged += s.unconverged;
    }
    report.sweeps = sweep + 1;
    report.capped_fraction = static_cast<double>(capped) / points;
    report.unconverged_fraction = static_cast<double>(unconverged) / points;
    if (free == 1 || change < options.inner_tol)
      break;
  }
  return report;
}

inline Eigen::MatrixXd
gradients_at_observations(const Dataset& data,
                          const ModelSpec& spec,
                          int row,
                          const ProfileState& state,
                          const KernelConfig& kernel,
                          const WeightTable& table)
{
  const LocalLikelihood local(data, spec, row, state, kernel);
  Eigen::MatrixXd g(data.size(), data.p());
  for (Eigen::Index j = 0; j < data.size(); ++j)
    table.at_point(local, data, j, [&](const auto& w) { g.row(j) = local.gradient(w, state.m(row, j)).transpose(); });
  return g;
}

} // namespace detail

//! Kernel-weighted score and curvature of the local likelihood of category
//! `row` at query point `t`, with candidate value `m_t`.
inline LocalSums
local_smoothed_score(const Dataset& data,
                     const ModelSpec& spec,
                     int row,
                     const Eigen::Ref<const Eigen::RowVectorXd>& t,
                     const ProfileState& state,
                     const KernelConfig& kernel,
                     double m_t)
{
  detail::check_semiparametric_inputs(data, spec, state, kernel);
  detail::check_row(spec, row);
  const LocalLikelihood local(data, spec, row, state, kernel);
  const LocalSums s = local.sums(local.weights(t), m_t);
  if (!(s.weight_sum > 0.0))
    throw no_local_data("all kernel weights vanish at the query point");
  return s;
}

//! One Newton step on the local likelihood at `t`, clipped to `step_cap`.
inline double
local_m_update(const Dataset& data,
               const ModelSpec& spec,
               int row,
               const Eigen::Ref<const Eigen::RowVectorXd>& t,
               const ProfileState& state,
               const KernelConfig& kernel,
               double m_t,
               double step_cap = SemiparametricOptions{}.step_cap)
{
  const LocalSums s = local_smoothed_score(data, spec, row, t, state, kernel, m_t);
  if (!(s.curvature < 0.0))
    throw numerical_failure("local curvature is not negative");
  const double step = -s.score / s.curvature;
  return m_t + std::clamp(step, -step_cap, step_cap);
}

//! Gradient of the least favourable curve m_k(t) with respect to beta_k.
inline Eigen::VectorXd
m_gradient(const Dataset& data,
           const ModelSpec& spec,
           int row,
           const Eigen::Ref<const Eigen::RowVectorXd>& t,
           const ProfileState& state,
           const KernelConfig& kernel,
           double m_t)
{
  detail::check_semiparametric_inputs(data, spec, state, kernel);
  detail::check_row(spec, row);
  const LocalLikelihood local(data, spec, row, state, kernel);
  return local.gradient(local.weights(t), m_t);
}

//! Least favourable gradients at every observation point: n x p.
inline Eigen::MatrixXd
m_gradients_at_observations(const Dataset& data,
                            const ModelSpec& spec,
                            int row,
                            const ProfileState& state,
                            const KernelConfig& kernel)
{
  detail::check_semiparametric_inputs(data, spec, state, kernel);
  detail::check_row(spec, row);
  return detail::gradients_at_observations(data, spec, row, state, kernel, {});
}

struct BetaUpdate
{
  Eigen::VectorXd beta;  //!< beta_k - B^{-1} s
  Eigen::VectorXd score; //!< s = sum_i l'_ik (x_i + m'(t_i))
  Eigen::MatrixXd B;     //!< sum_i l''_ik (x_i + m'(t_i))(x_i + m'(t_i))'
};

//! Newton step on the profile score of category `row`, given the least
//! favourable gradients `m_grad` (n x p) at the observation points.
//!
//! The step is returned undamped; fit_semiparametric applies step halving.
inline BetaUpdate
beta_update(const Dataset& data,
            const ModelSpec& spec,
            int row,
            const ProfileState& state,
            const Eigen::MatrixXd& m_grad)
{
  detail::check_row(spec, row);
  if (m_grad.rows() != data.size() || m_grad.cols() != data.p())
    throw shape_error("least favourable gradients must be n x p");
  const int k = spec.category_of_row(row);
  const auto p = data.p();
  const int free = spec.free_count();
  BetaUpdate out{ Eigen::VectorXd(), Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Zero(p, p) };
  Eigen::VectorXd eta(spec.categories);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    eta.setZero();
    for (int r = 0; r < free; ++r)
      eta[spec.category_of_row(r)] = data.x.row(i).dot(state.beta.row(r)) + state.m(r, i);
    const ScoreCurvature d = score_and_curvature(eta, data.y[static_cast<size_t>(i)], k);
    const Eigen::VectorXd u = data.x.row(i).transpose() + m_grad.row(i).transpose();
    out.score += d.score * u;
    out.B += d.curvature * u * u.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(-out.B);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (!(rcond > 1e-14))
    throw non_identified("profile information of category " + std::to_string(k) +
                           " is singular (rcond " + std::to_string(rcond) + ")",
                         rcond);
  out.beta = state.beta.row(row).transpose() + llt.solve(out.score);
  return out;
}

//! Profile-likelihood Newton-Raphson for the semiparametric MNL.
//!
//! Starting values come from a parametric MNL with intercepts and linear
//! terms in both covariate blocks. Each outer iteration updates beta_k for
//! k = 1..K-1 in turn (with the local likelihood of category k re-solved for
//! every trial value, so step halving acts on the profile likelihood) and
//! then re-solves all smooth functions at the observation points.
inline SemiparametricFitResult
fit_semiparametric(const Dataset& data,
                   const ModelSpec& spec,
                   const KernelConfig& kernel,
                   const SemiparametricOptions& options = {})
{
  validate(data);
  spec.validate();
  kernel.validate();
  if (spec.categories != data.categories)
    throw config_error("model and dataset disagree on the number of categories");
  if (data.q() == 0)
    throw config_error("semiparametric model needs at least one smooth covariate");
  if (kernel.dimension() != data.q())
    throw shape_error("kernel dimension does not match the smooth covariates");
  if (data.p() == 0)
    throw config_error("semiparametric model needs at least one parametric covariate");
  if (options.inner_max_iter < 1 || options.max_iter < 0 || !(options.step_cap > 0.0))
    throw config_error("invalid semiparametric options");

  const int free = spec.free_count();
  const auto n = data.size();
  const auto p = data.p();
  const auto q = data.q();

  SemiparametricFitResult fit;
  fit.kernel = kernel;
  fit.spec = spec;
  fit.options = options;

  // step 1: parametric start with intercepts and linear T terms
  fit.start = fit_parametric(all_parametric(data), spec);
  ProfileState state{ fit.start.coefficients.middleCols(1, p), Eigen::MatrixXd(free, n) };
  for (int r = 0; r < free; ++r) {
    state.m.row(r) = (data.t * fit.start.coefficients.row(r).tail(q).transpose()).transpose();
    state.m.row(r).array() += fit.start.coefficients(r, 0);
  }

  bool ill_conditioned = false;
  bool unsolved = false;
  auto note_solve = [&](double capped_fraction, double unconverged_fraction) {
    if (capped_fraction > 0.1 && !ill_conditioned) {
      ill_conditioned = true;
      fit.warnings.push_back("ill-conditioned: local updates hit the step cap at more than 10% of points");
    }
    if (unconverged_fraction > 0.0 && !unsolved) {
      unsolved = true;
      fit.warnings.push_back("local likelihood did not converge at some points (one-sided local data)");
    }
  };
  auto note_joint = [&](const detail::JointSolveReport& r) { note_solve(r.capped_fraction, r.unconverged_fraction); };
  auto note_row = [&](const detail::RowSolve& r) {
    note_solve(static_cast<double>(r.capped) / static_cast<double>(n),
               static_cast<double>(r.unconverged) / static_cast<double>(n));
  };

  const detail::WeightTable table(data, kernel);
  note_joint(detail::solve_all_rows(data, spec, state, kernel, options, table));
  double ll = detail::state_loglik(data, spec, state);
  fit.loglik_trace.push_back(ll);

  std::vector<Eigen::MatrixXd> grads(static_cast<size_t>(free));
  std::vector<Eigen::MatrixXd> B(static_cast<size_t>(free));
  // profile scores, least favourable gradients and B for every category at `state`
  auto profile_scores = [&] {
    double norm = 0.0;
    for (int r = 0; r < free; ++r) {
      grads[static_cast<size_t>(r)] = detail::gradients_at_observations(data, spec, r, state, kernel, table);
      const BetaUpdate u = beta_update(data, spec, r, state, grads[static_cast<size_t>(r)]);
      B[static_cast<size_t>(r)] = u.B;
      norm = std::max(norm, u.score.lpNorm<Eigen::Infinity>());
    }
    return norm;
  };
  bool scores_current = false;

  for (int it = 0; it < options.max_iter; ++it) {
    const ProfileState previous = state;
    scores_current = false;

    // step 2: beta_k sweeps, category by category
    for (int r = 0; r < free; ++r) {
      if (r > 0) {
        auto s = detail::solve_row(data, spec, r, state, kernel, state.m.row(r).transpose(), options, table);
        state.m.row(r) = s.m.transpose();
        note_row(s);
      }
      const double base = free > 1 ? detail::state_loglik(data, spec, state) : ll;
      const Eigen::MatrixXd g = detail::gradients_at_observations(data, spec, r, state, kernel, table);
      const BetaUpdate u = beta_update(data, spec, r, state, g);
      const Eigen::VectorXd delta = u.beta - state.beta.row(r).transpose();

      double lambda = 1.0;
      for (int h = 0; h <= options.max_halvings; ++h, lambda *= 0.5) {
        ProfileState cand = state;
        cand.beta.row(r) += lambda * delta.transpose();
        const Eigen::VectorXd predicted = state.m.row(r).transpose() + lambda * (g * delta);
        auto s = detail::solve_row(data, spec, r, cand, kernel, predicted, options, table);
        cand.m.row(r) = s.m.transpose();
        const double cand_ll = detail::state_loglik(data, spec, cand);
        if (std::isfinite(cand_ll) && cand_ll >= base - detail::ascent_slack(base)) {
          note_row(s);
          state = std::move(cand);
          ll = cand_ll;
          break;
        }
      }
    }

    // step 3: smooth functions at the observation points
    if (free > 1) {
      note_joint(detail::solve_all_rows(data, spec, state, kernel, options, table));
      ll = detail::state_loglik(data, spec, state);
    }
    fit.loglik_trace.push_back(ll);
    fit.iterations = it + 1;

    const double change = std::max((state.beta - previous.beta).lpNorm<Eigen::Infinity>(),
                                   (state.m - previous.m).lpNorm<Eigen::Infinity>());
    if (change < options.tol) {
      fit.profile_score_norm = profile_scores();
      scores_current = true;
      if (fit.profile_score_norm < options.tol) {
        fit.converged = true;
        break;
      }
    }
  }

  if (!scores_current)
    fit.profile_score_norm = profile_scores();
  fit.beta = state.beta;
  fit.smooth.m = state.m;
  fit.smooth.m_grad = grads;
  fit.beta_se.resize(free, p);
  for (int r = 0; r < free; ++r) {
    const Eigen::MatrixXd cov = (-B[static_cast<size_t>(r)]).inverse();
    fit.beta_se.row(r) = cov.diagonal().cwiseMax(0.0).cwiseSqrt().transpose();
  }
  if (!fit.converged)
    fit.warnings.push_back("profile iterations did not converge within max_iter");
  return fit;
}

//! Category probabilities at a new covariate point, solving the local
//! likelihood at `t_new` with beta and the observation-point values of the
//! other categories fixed at the fit.
inline Eigen::VectorXd
predict_probabilities(const SemiparametricFitResult& fit,
                      const Dataset& data,
                      const Eigen::Ref<const Eigen::VectorXd>& x_new,
                      const Eigen::Ref<const Eigen::RowVectorXd>& t_new)
{
  if (x_new.size() != data.p() || t_new.size() != data.q())
    throw shape_error("prediction point does not match the covariate blocks");
  const ProfileState state = fit.state();
  detail::check_semiparametric_inputs(data, fit.spec, state, fit.kernel);

  // nearest observation in bandwidth-scaled distance seeds the local solves
  Eigen::Index nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double d =
      ((data.t.row(i) - t_new).array() / fit.kernel.bandwidths.transpose().array()).square().sum();
    if (d < best) {
      best = d;
      nearest = i;
    }
  }

  Eigen::VectorXd eta = Eigen::VectorXd::Zero(fit.spec.categories);
  for (int r = 0; r < fit.spec.free_count(); ++r) {
    const LocalLikelihood local(data, fit.spec, r, state, fit.kernel);
    const LocalSolve s = local.solve(local.weights(t_new),
                                     state.m(r, nearest),
                                     fit.options.inner_tol,
                                     std::max(fit.options.inner_max_iter, 100),
                                     fit.options.step_cap);
    if (!s.converged)
      throw separation_error("local likelihood at the query point has no finite maximiser");
    eta[fit.spec.category_of_row(r)] = x_new.dot(fit.beta.row(r)) + s.m;
  }
  return softmax_probabilities(eta);
}

//! In-sample probabilities at the observation points, n x K.
inline Eigen::MatrixXd
fitted_probabilities(const SemiparametricFitResult& fit, const Dataset& data)
{
  Eigen::MatrixXd out(data.size(), fit.spec.categories);
  Eigen::VectorXd eta(fit.spec.categories);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    eta.setZero();
    for (int r = 0; r < fit.spec.free_count(); ++r)
      eta[fit.spec.category_of_row(r)] = data.x.row(i).dot(fit.beta.row(r)) + fit.smooth.m(r, i);
    out.row(i) = softmax_probabilities(eta).transpose();
  }
  return out;
}

} // namespace spmnl
