#include <spmnl/chi_square.hpp>
#include <spmnl/iia.hpp>
#include <spmnl/simulate.hpp>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace spmnl;

namespace {

DGPSpec
mnl_dgp(int K, Eigen::Index n, std::uint64_t seed)
{
  DGPSpec s;
  s.categories = K;
  s.reference = K - 1;
  s.n = n;
  s.seed = seed;
  s.x_laws = { CovariateLaw::normal(0.0, 1.0), CovariateLaw::bernoulli(0.5) };
  s.beta.resize(K - 1, 2);
  for (int r = 0; r < K - 1; ++r) {
    s.beta(r, 0) = 0.6 - 0.3 * r;
    s.beta(r, 1) = -0.4 + 0.2 * r;
    s.smooth.push_back(SmoothFunction::linear(0.1 * r, 0.0));
  }
  return s;
}

} // namespace

TEST(ChiSquare, CriticalValues)
{
  EXPECT_NEAR(chi_square_upper_tail(3.84, 1), 0.05, 1e-3);
  EXPECT_NEAR(chi_square_upper_tail(5.99, 2), 0.05, 1e-3);
  // df = 2 is an exponential tail
  for (double x : { 0.1, 1.0, 7.5, 40.0 })
    EXPECT_NEAR(chi_square_upper_tail(x, 2), std::exp(-x / 2), 1e-15);
  // df = 1 is a two-sided normal tail
  EXPECT_NEAR(chi_square_upper_tail(1.959963984540054 * 1.959963984540054, 1), 0.05, 1e-12);
  EXPECT_NEAR(normal_two_sided_p(1.959963984540054), 0.05, 1e-12);
}

TEST(ChiSquare, MatchesBoostGammaQ)
{
  for (int df = 1; df <= 50; ++df) {
    for (double stat = 0.05; stat <= 200.0; stat *= 1.17) {
      const double ref = boost::math::gamma_q(0.5 * df, 0.5 * stat);
      EXPECT_NEAR(chi_square_upper_tail(stat, df), ref, 1e-10) << "df " << df << " stat " << stat;
    }
    EXPECT_NEAR(chi_square_upper_tail(200.0, df), boost::math::gamma_q(0.5 * df, 100.0), 1e-10);
  }
}

TEST(ChiSquare, MonotoneAndBounded)
{
  for (int df : { 1, 3, 8, 25 }) {
    double prev = 1.0;
    for (double stat = 0.0; stat < 150.0; stat += 0.25) {
      const double p = chi_square_upper_tail(stat, df);
      EXPECT_LE(p, prev);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      prev = p;
    }
  }
  EXPECT_EQ(chi_square_upper_tail(-2.0, 3), 1.0);
  EXPECT_EQ(chi_square_upper_tail(0.0, 3), 1.0);
  EXPECT_THROW(chi_square_upper_tail(1.0, 0), config_error);
}

TEST(HausmanForm, ZeroDifferenceGivesZeroStatistic)
{
  const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(3, 3) * 0.2;
  const IIATestResult r = hausman_form(Eigen::VectorXd::Zero(3), v);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.df, 3);
  EXPECT_TRUE(r.note.empty());
}

TEST(HausmanForm, PositiveDefiniteCase)
{
  Eigen::MatrixXd v(2, 2);
  v << 4.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd d(2);
  d << 2.0, 1.5;
  const IIATestResult r = hausman_form(d, v);
  EXPECT_NEAR(r.statistic, 1.0 + 2.25, 1e-14);
  EXPECT_NEAR(r.p_value, std::exp(-3.25 / 2), 1e-14);
}

TEST(HausmanForm, IndefiniteCovarianceUsesGeneralizedInverse)
{
  Eigen::MatrixXd v(2, 2);
  v << 1.0, 0.0, 0.0, -0.5;
  Eigen::VectorXd d(2);
  d << 0.1, 1.0;
  const IIATestResult r = hausman_form(d, v);
  EXPECT_NEAR(r.statistic, 0.01 - 2.0, 1e-14);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_NE(r.note.find("generalized inverse"), std::string::npos);
  EXPECT_NE(r.note.find("negative"), std::string::npos);
}

TEST(HausmanMcFadden, ShapeAndErrors)
{
  const Dataset d = simulate(mnl_dgp(4, 800, 3));
  const ModelSpec spec{ 4, 3 };
  const IIATestResult r = hausman_mcfadden(d, spec, 1);
  EXPECT_EQ(r.df, 2 * 3);
  EXPECT_EQ(r.dropped_category, 1);
  EXPECT_TRUE(std::isfinite(r.statistic));
  EXPECT_GE(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
  EXPECT_THROW(hausman_mcfadden(d, spec, 3), config_error);
  EXPECT_THROW(hausman_mcfadden(d, spec, 4), config_error);
  const Dataset two = simulate(mnl_dgp(2, 100, 3));
  EXPECT_THROW(hausman_mcfadden(two, ModelSpec{ 2, 1 }, 0), config_error);
}

TEST(SmallHsiao, DeterministicUnderSeed)
{
  const Dataset d = simulate(mnl_dgp(4, 600, 8));
  const ModelSpec spec{ 4, 3 };
  const IIATestResult a = small_hsiao(d, spec, 0, 42);
  const IIATestResult b = small_hsiao(d, spec, 0, 42);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.df, 2 * 3);
  const IIATestResult c = small_hsiao(d, spec, 0, 43);
  EXPECT_NE(a.statistic, c.statistic);
  EXPECT_GE(a.p_value, 0.0);
  EXPECT_LE(a.p_value, 1.0);
}

TEST(SmallHsiao, HalfSampleMissingCategory)
{
  Dataset d = simulate(mnl_dgp(3, 60, 2));
  for (auto& y : d.y)
    if (y == 0)
      y = 1;
  d.y[0] = 0; // a single observation cannot be in both halves
  EXPECT_THROW(small_hsiao(d, ModelSpec{ 3, 2 }, 1, 7), insufficient_data);
}

TEST(IIAAllPermutations, CountsDistinctAndDeterministic)
{
  const Dataset d = simulate(mnl_dgp(5, 1500, 4));
  const ModelSpec spec{ 5, 4 };
  for (IIAMethod method : { IIAMethod::hausman_mcfadden, IIAMethod::small_hsiao }) {
    const auto first = iia_all_permutations(d, spec, method, 11);
    const auto second = iia_all_permutations(d, spec, method, 11);
    ASSERT_EQ(first.size(), 4u);
    std::set<int> dropped;
    for (size_t i = 0; i < first.size(); ++i) {
      dropped.insert(first[i].dropped_category);
      ASSERT_TRUE(first[i].result.has_value()) << first[i].error;
      EXPECT_EQ(first[i].result->dropped_category, first[i].dropped_category);
      EXPECT_EQ(first[i].result->method, method);
      EXPECT_EQ(first[i].result->statistic, second[i].result->statistic);
    }
    EXPECT_EQ(dropped.size(), 4u);
    EXPECT_EQ(dropped.count(4), 0u);
  }
}

TEST(IIAAllPermutations, FailuresAreRecordedPerEntry)
{
  Dataset d = simulate(mnl_dgp(3, 80, 6));
  // the dummy marks category 0 exactly, so the full fit is separated
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d.x(i, 1) = d.y[static_cast<size_t>(i)] == 0 ? 1.0 : 0.0;
  const auto out = iia_all_permutations(d, ModelSpec{ 3, 2 }, IIAMethod::hausman_mcfadden, 1);
  ASSERT_EQ(out.size(), 2u);
  bool any_error = false;
  for (const auto& e : out)
    any_error = any_error || !e.error.empty();
  EXPECT_TRUE(any_error);
}
