#pragma once

#include "dataset.hpp"
#include "errors.hpp"
#include "model_core.hpp"
#include "random.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace spmnl {

//! A known smooth function of the smooth covariates t.
struct SmoothFunction
{
  enum class Kind
  {
    zero,   //!< 0
    linear, //!< a + b * (t_1 + ... + t_q)
    sine,   //!< a * sin(b * t_1)
    ridge   //!< a * t_1 * t_2
  };
  Kind kind = Kind::zero;
  double a = 0.0;
  double b = 0.0;

  static SmoothFunction zero() { return {}; }
  static SmoothFunction linear(double a, double b) { return { Kind::linear, a, b }; }
  static SmoothFunction sine(double amplitude, double frequency) { return { Kind::sine, amplitude, frequency }; }
  static SmoothFunction ridge(double a) { return { Kind::ridge, a, 0.0 }; }

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& t) const
  {
    switch (kind) {
      case Kind::zero:
        return 0.0;
      case Kind::linear:
        return a + b * t.sum();
      case Kind::sine:
        return a * std::sin(b * t[0]);
      case Kind::ridge:
        return a * t[0] * t[1];
    }
    return 0.0;
  }

  Eigen::Index min_dimension() const
  {
    switch (kind) {
      case Kind::sine:
        return 1;
      case Kind::ridge:
        return 2;
      default:
        return 0;
    }
  }
};

//! Sampling law of one covariate column.
struct CovariateLaw
{
  enum class Kind
  {
    uniform,   //!< a = lo, b = hi
    normal,    //!< a = mean, b = sd
    bernoulli, //!< a = success probability
    lognormal  //!< exp(normal(a, b))
  };
  Kind kind = Kind::uniform;
  double a = 0.0;
  double b = 1.0;

  static CovariateLaw uniform(double lo, double hi) { return { Kind::uniform, lo, hi }; }
  static CovariateLaw normal(double mu, double sd) { return { Kind::normal, mu, sd }; }
  static CovariateLaw bernoulli(double p) { return { Kind::bernoulli, p, 0.0 }; }
  static CovariateLaw lognormal(double mu, double sd) { return { Kind::lognormal, mu, sd }; }

  double draw(RandomStream& rng) const
  {
    switch (kind) {
      case Kind::uniform:
        return rng.uniform(a, b);
      case Kind::normal:
        return rng.normal(a, b);
      case Kind::bernoulli:
        return rng.bernoulli(a) ? 1.0 : 0.0;
      case Kind::lognormal:
        return std::exp(rng.normal(a, b));
    }
    return 0.0;
  }

  void validate() const
  {
    if (!std::isfinite(a) || !std::isfinite(b))
      throw config_error("covariate law parameters must be finite");
    if (kind == Kind::uniform && !(a < b))
      throw config_error("uniform law needs lo < hi");
    if ((kind == Kind::normal || kind == Kind::lognormal) && !(b >= 0.0))
      throw config_error("normal law needs sd >= 0");
    if (kind == Kind::bernoulli && !(a >= 0.0 && a <= 1.0))
      throw config_error("bernoulli law needs p in [0, 1]");
  }
};

//! A fully known semiparametric MNL data-generating process.
//!
//! Random streams: x column d uses stream d, t column d uses stream
//! 1000 + d, the response uses stream 2000; each stream is seeded with
//! derive_seed(seed, stream).
struct DGPSpec
{
  int categories = 2;
  int reference = 1;
  Eigen::MatrixXd beta;               //!< (K-1) x p, rows in ModelSpec row order
  std::vector<SmoothFunction> smooth; //!< K-1 functions, same order
  std::vector<CovariateLaw> x_laws;   //!< p laws
  std::vector<CovariateLaw> t_laws;   //!< q laws
  Eigen::Index n = 0;
  std::uint64_t seed = 0;

  ModelSpec model() const { return ModelSpec{ categories, reference }; }

  void validate() const
  {
    model().validate();
    if (n < 1)
      throw config_error("simulation needs n >= 1");
    if (beta.rows() != categories - 1 || beta.cols() != static_cast<Eigen::Index>(x_laws.size()))
      throw config_error("beta must have K-1 rows and one column per parametric covariate");
    if (!beta.allFinite())
      throw config_error("beta must be finite");
    if (smooth.size() != static_cast<size_t>(categories - 1))
      throw config_error("need one smooth function per non-reference category");
    for (const auto& f : smooth) {
      if (!std::isfinite(f.a) || !std::isfinite(f.b))
        throw config_error("smooth function parameters must be finite");
      if (f.min_dimension() > static_cast<Eigen::Index>(t_laws.size()))
        throw config_error("smooth function needs more smooth covariates");
    }
    for (const auto& law : x_laws)
      law.validate();
    for (const auto& law : t_laws)
      law.validate();
  }

  //! True linear predictor for all K categories.
  Eigen::VectorXd predictor(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                            const Eigen::Ref<const Eigen::RowVectorXd>& t) const
  {
    const ModelSpec spec = model();
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(categories);
    for (int r = 0; r < spec.free_count(); ++r)
      eta[spec.category_of_row(r)] = x.dot(beta.row(r)) + smooth[static_cast<size_t>(r)](t);
    return eta;
  }

  Eigen::VectorXd probabilities(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                                const Eigen::Ref<const Eigen::RowVectorXd>& t) const
  {
    return softmax_probabilities(predictor(x, t));
  }
};

//! Draws a dataset from `spec`; identical seeds give identical datasets.
inline Dataset
simulate(const DGPSpec& spec)
{
  spec.validate();
  const auto p = static_cast<Eigen::Index>(spec.x_laws.size());
  const auto q = static_cast<Eigen::Index>(spec.t_laws.size());
  Dataset data;
  data.categories = spec.categories;
  data.x.resize(spec.n, p);
  data.t.resize(spec.n, q);
  for (Eigen::Index d = 0; d < p; ++d) {
    RandomStream rng(spec.seed, static_cast<std::uint64_t>(d));
    for (Eigen::Index i = 0; i < spec.n; ++i)
      data.x(i, d) = spec.x_laws[static_cast<size_t>(d)].draw(rng);
  }
  for (Eigen::Index d = 0; d < q; ++d) {
    RandomStream rng(spec.seed, 1000 + static_cast<std::uint64_t>(d));
    for (Eigen::Index i = 0; i < spec.n; ++i)
      data.t(i, d) = spec.t_laws[static_cast<size_t>(d)].draw(rng);
  }
  RandomStream rng(spec.seed, 2000);
  data.y.resize(static_cast<size_t>(spec.n));
  for (Eigen::Index i = 0; i < spec.n; ++i)
    data.y[static_cast<size_t>(i)] = rng.categorical(spec.probabilities(data.x.row(i), data.t.row(i)));
  return data;
}

} // namespace spmnl
