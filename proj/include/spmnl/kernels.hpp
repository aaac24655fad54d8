#pragma once

#include "errors.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace spmnl {

enum class KernelFamily
{
  gaussian
};

inline std::string
to_string(KernelFamily family)
{
  switch (family) {
    case KernelFamily::gaussian:
      return "gaussian";
  }
  return "unknown";
}

//! Product kernel with a diagonal bandwidth matrix H = diag(bandwidths).
struct KernelConfig
{
  KernelFamily family = KernelFamily::gaussian;
  Eigen::VectorXd bandwidths;

  Eigen::Index dimension() const { return bandwidths.size(); }

  void validate() const
  {
    if (bandwidths.size() == 0)
      throw config_error("kernel needs at least one bandwidth");
    for (Eigen::Index d = 0; d < bandwidths.size(); ++d) {
      if (!std::isfinite(bandwidths[d]) || bandwidths[d] <= 0.0)
        throw config_error("bandwidth " + std::to_string(d) +
                           " must be positive and finite");
    }
  }

  //! det(H) times the kernel's normalising constant.
  double normaliser() const
  {
    return std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(bandwidths.size())) *
           bandwidths.prod();
  }
};

//! (det H)^{-1} K(H^{-1}(t - ti)) without validation; `inv_norm` is
//! 1 / config.normaliser().
inline double
kernel_weight_unchecked(const KernelConfig& config,
                        double inv_norm,
                        const Eigen::Ref<const Eigen::RowVectorXd>& t,
                        const Eigen::Ref<const Eigen::RowVectorXd>& ti)
{
  double sq = 0.0;
  for (Eigen::Index d = 0; d < t.size(); ++d) {
    const double z = (t[d] - ti[d]) / config.bandwidths[d];
    sq += z * z;
  }
  return std::exp(-0.5 * sq) * inv_norm;
}

//! Weight of an observation at `ti` for the query point `t`.
inline double
kernel_weight(const KernelConfig& config,
              const Eigen::Ref<const Eigen::RowVectorXd>& t,
              const Eigen::Ref<const Eigen::RowVectorXd>& ti)
{
  config.validate();
  if (t.size() != config.dimension() || ti.size() != config.dimension())
    throw shape_error("kernel point dimension does not match bandwidths");
  return kernel_weight_unchecked(config, 1.0 / config.normaliser(), t, ti);
}

//! Sample standard deviation (n - 1 denominator) of each column.
inline Eigen::VectorXd
column_sd(const Eigen::MatrixXd& columns)
{
  const auto n = columns.rows();
  Eigen::VectorXd sd(columns.cols());
  for (Eigen::Index d = 0; d < columns.cols(); ++d) {
    const double mean = columns.col(d).mean();
    const double ss = (columns.col(d).array() - mean).square().sum();
    sd[d] = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return sd;
}

//! Bandwidths equal to `scale` times each column's standard deviation.
inline KernelConfig
bandwidth_from_scale(const Eigen::MatrixXd& columns,
                     double scale,
                     const std::vector<std::string>& names = {})
{
  if (!std::isfinite(scale) || scale <= 0.0)
    throw config_error("bandwidth scale must be positive");
  if (columns.rows() < 2)
    throw insufficient_data("bandwidth needs at least two observations");
  if (columns.cols() == 0)
    throw config_error("no smooth covariates to derive bandwidths from");
  const Eigen::VectorXd sd = column_sd(columns);
  for (Eigen::Index d = 0; d < sd.size(); ++d) {
    if (!(sd[d] > 0.0)) {
      const std::string name = static_cast<size_t>(d) < names.size()
                                 ? names[static_cast<size_t>(d)]
                                 : "column " + std::to_string(d);
      throw degenerate_covariate(name, "smooth covariate '" + name + "' is constant");
    }
  }
  KernelConfig config;
  config.bandwidths = scale * sd;
  return config;
}

struct BandwidthCandidate
{
  double scale;
  KernelConfig kernel;
};

//! `steps` scales evenly spaced on [lo, hi]; a single step uses `lo`.
inline std::vector<BandwidthCandidate>
bandwidth_grid(const Eigen::MatrixXd& columns,
               double lo,
               double hi,
               int steps,
               const std::vector<std::string>& names = {})
{
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || steps < 1)
    throw config_error("bandwidth grid needs 0 < lo <= hi and steps >= 1");
  std::vector<BandwidthCandidate> grid;
  grid.reserve(static_cast<size_t>(steps));
  for (int s = 0; s < steps; ++s) {
    const double scale =
      steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps - 1);
    grid.push_back({ scale, bandwidth_from_scale(columns, scale, names) });
  }
  return grid;
}

} // namespace spmnl
