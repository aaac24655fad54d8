#pragma once

#include "chi_square.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "parametric.hpp"
#include "random.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spmnl {

enum class IIAMethod
{
  hausman_mcfadden,
  small_hsiao
};

inline std::string
to_string(IIAMethod method)
{
  return method == IIAMethod::hausman_mcfadden ? "hausman-mcfadden" : "small-hsiao";
}

struct IIATestResult
{
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  int dropped_category = 0;
  IIAMethod method = IIAMethod::hausman_mcfadden;
  std::string note;
};

namespace detail {

inline ModelSpec
restricted_spec(const ModelSpec& spec, int dropped)
{
  return ModelSpec{ spec.categories - 1, spec.reference < dropped ? spec.reference : spec.reference - 1 };
}

//! For each category shared by the full and restricted model, the pair
//! (full coefficient row, restricted coefficient row).
inline std::vector<std::pair<int, int>>
shared_rows(const ModelSpec& full, const ModelSpec& restricted, int dropped)
{
  std::vector<std::pair<int, int>> rows;
  for (int r = 0; r < full.free_count(); ++r) {
    const int c = full.category_of_row(r);
    if (c == dropped)
      continue;
    rows.emplace_back(r, restricted.row_of_category(c < dropped ? c : c - 1));
  }
  return rows;
}

inline void
check_dropped(const ModelSpec& spec, int dropped)
{
  if (dropped < 0 || dropped >= spec.categories)
    throw config_error("dropped category out of range");
  if (dropped == spec.reference)
    throw config_error("the reference category cannot be dropped");
  if (spec.categories < 3)
    throw config_error("IIA tests need at least three categories");
}

} // namespace detail

//! Hausman quadratic form diff' v^{-1} diff with chi-square(dim) p-value.
//! A Moore-Penrose inverse replaces v^{-1} when v is not positive definite;
//! the statistic is then reported as computed, negative or not.
inline IIATestResult
hausman_form(const Eigen::VectorXd& diff, const Eigen::MatrixXd& v)
{
  if (v.rows() != diff.size() || v.cols() != diff.size() || diff.size() == 0)
    throw shape_error("Hausman form needs a square covariance matching the difference");
  IIATestResult result;
  result.method = IIAMethod::hausman_mcfadden;
  result.df = static_cast<int>(diff.size());
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
    result.statistic = diff.dot(llt.solve(diff));
  } else {
    // Moore-Penrose inverse over the numerically nonzero eigenvalues
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double cut = 1e-12 * lam.cwiseAbs().maxCoeff();
    const Eigen::VectorXd proj = eig.eigenvectors().transpose() * diff;
    double stat = 0.0;
    for (Eigen::Index a = 0; a < lam.size(); ++a)
      if (std::abs(lam[a]) > cut)
        stat += proj[a] * proj[a] / lam[a];
    result.statistic = stat;
    result.note = "V_restricted - V_full is not positive definite; generalized inverse used";
    if (stat < 0.0)
      result.note += "; negative statistic";
  }
  result.p_value = chi_square_upper_tail(result.statistic, result.df);
  return result;
}

//! Hausman-McFadden test: full-sample fit against the fit on observations
//! that did not choose `dropped`.
inline IIATestResult
hausman_mcfadden(const Dataset& data,
                 const ModelSpec& spec,
                 int dropped,
                 const ParametricOptions& options = {})
{
  detail::check_dropped(spec, dropped);
  const ParametricFitResult full = fit_parametric(data, spec, options);
  const ModelSpec rspec = detail::restricted_spec(spec, dropped);
  const ParametricFitResult restricted = fit_parametric(drop_category(data, dropped), rspec, options);

  const auto pp = full.coefficients.cols();
  const auto rows = detail::shared_rows(spec, rspec, dropped);
  const auto dim = static_cast<Eigen::Index>(rows.size()) * pp;
  std::vector<Eigen::Index> fi, ri;
  for (const auto& [fr, rr] : rows) {
    for (Eigen::Index j = 0; j < pp; ++j) {
      fi.push_back(fr * pp + j);
      ri.push_back(rr * pp + j);
    }
  }
  Eigen::VectorXd diff(dim);
  Eigen::MatrixXd v(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    diff[a] = restricted.coefficients(ri[a] / pp, ri[a] % pp) - full.coefficients(fi[a] / pp, fi[a] % pp);
    for (Eigen::Index b = 0; b < dim; ++b)
      v(a, b) = restricted.vcov(ri[a], ri[b]) - full.vcov(fi[a], fi[b]);
  }

  IIATestResult result = hausman_form(diff, v);
  result.dropped_category = dropped;
  return result;
}

//! Small-Hsiao test on a seeded random half split of the sample.
inline IIATestResult
small_hsiao(const Dataset& data,
            const ModelSpec& spec,
            int dropped,
            std::uint64_t seed,
            const ParametricOptions& options = {})
{
  detail::check_dropped(spec, dropped);
  validate(data);
  const auto n = data.size();
  if (n < 4)
    throw insufficient_data("Small-Hsiao test needs at least four observations");

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    order[static_cast<size_t>(i)] = i;
  RandomStream rng(seed, 0x5348); // split stream
  for (auto i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(i + 1)]);
  const auto half = order.size() / 2;
  const std::vector<Eigen::Index> a(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
  const std::vector<Eigen::Index> b(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
  const Dataset sample_a = subset_rows(data, a);
  const Dataset sample_b = subset_rows(data, b);
  for (const Dataset* half : { &sample_a, &sample_b }) {
    const auto counts = half->category_counts();
    for (size_t c = 0; c < counts.size(); ++c)
      if (counts[c] == 0)
        throw insufficient_data("category " + std::to_string(c) + " is absent from a half sample");
  }

  const ParametricFitResult fit_a = fit_parametric(sample_a, spec, options);
  const ParametricFitResult fit_b = fit_parametric(sample_b, spec, options);
  const double wa = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXd combined = wa * fit_a.coefficients + (1.0 - wa) * fit_b.coefficients;

  const ModelSpec rspec = detail::restricted_spec(spec, dropped);
  const Dataset restricted_b = drop_category(sample_b, dropped);
  const ParametricFitResult fit_rb = fit_parametric(restricted_b, rspec, options);

  Eigen::MatrixXd combined_r(rspec.free_count(), combined.cols());
  for (const auto& [fr, rr] : detail::shared_rows(spec, rspec, dropped))
    combined_r.row(rr) = combined.row(fr);
  const double ll_combined = parametric_loglik(restricted_b, rspec, combined_r, options.intercept);

  IIATestResult result;
  result.method = IIAMethod::small_hsiao;
  result.dropped_category = dropped;
  result.df = static_cast<int>(combined_r.size());
  result.statistic = -2.0 * (ll_combined - fit_rb.loglik);
  result.p_value = chi_square_upper_tail(result.statistic, result.df);
  if (!fit_a.converged || !fit_b.converged || !fit_rb.converged)
    result.note = "a component fit did not converge";
  return result;
}

struct IIABatchEntry
{
  int dropped_category = 0;
  std::optional<IIATestResult> result;
  std::string error; //!< set when the test could not be computed
};

//! Runs the test once for every non-reference category.
inline std::vector<IIABatchEntry>
iia_all_permutations(const Dataset& data,
                     const ModelSpec& spec,
                     IIAMethod method,
                     std::uint64_t seed,
                     const ParametricOptions& options = {})
{
  if (spec.categories < 3)
    throw config_error("IIA tests need at least three categories");
  std::vector<IIABatchEntry> out;
  for (int c = 0; c < spec.categories; ++c) {
    if (c == spec.reference)
      continue;
    IIABatchEntry entry;
    entry.dropped_category = c;
    try {
      entry.result = method == IIAMethod::hausman_mcfadden ? hausman_mcfadden(data, spec, c, options)
                                                           : small_hsiao(data, spec, c, seed, options);
    } catch (const error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

} // namespace spmnl
