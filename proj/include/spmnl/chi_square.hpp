#pragma once

#include "errors.hpp"

#include <cmath>
#include <limits>

namespace spmnl {

namespace detail {

// Series for the regularised lower incomplete gamma P(a, x), x < a + 1.
inline double
gamma_p_series(double a, double x)
{
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17)
      break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction (modified Lentz) for the upper tail Q(a, x), x >= a + 1.
inline double
gamma_q_continued_fraction(double a, double x)
{
  constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny)
      d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17)
      break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace detail

//! Regularised upper incomplete gamma function Q(a, x).
inline double
gamma_q(double a, double x)
{
  if (!(a > 0.0) || !(x >= 0.0))
    throw config_error("gamma_q needs a > 0 and x >= 0");
  if (x == 0.0)
    return 1.0;
  if (x < a + 1.0)
    return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

//! P(X >= statistic) for X ~ chi-square(df). Negative statistics map to 1.
inline double
chi_square_upper_tail(double statistic, int df)
{
  if (df < 1)
    throw config_error("chi-square needs df >= 1");
  if (std::isnan(statistic))
    return std::numeric_limits<double>::quiet_NaN();
  if (statistic <= 0.0)
    return 1.0;
  return gamma_q(0.5 * df, 0.5 * statistic);
}

//! Two-sided normal p-value of a z statistic.
inline double
normal_two_sided_p(double z)
{
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

} // namespace spmnl
