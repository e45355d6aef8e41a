#pragma once

// Tail probabilities for the reference distributions used by the test
// statistics. Backed by Boost.Math's incomplete beta/gamma routines.

#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace pairtrade::dist {

inline double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(|T| > |t|) for Student-t with `df` degrees of freedom.
inline double student_t_two_sided(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  boost::math::students_t d(df);
  return 2.0 * boost::math::cdf(boost::math::complement(d, std::fabs(t)));
}

inline double student_t_quantile(double p, double df) {
  boost::math::students_t d(df);
  return boost::math::quantile(d, p);
}

/// Upper tail of F(d1, d2).
inline double f_sf(double f, double d1, double d2) {
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  boost::math::fisher_f d(d1, d2);
  return boost::math::cdf(boost::math::complement(d, f));
}

/// Upper tail of chi-square with `df` degrees of freedom.
inline double chi2_sf(double x, double df) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  boost::math::chi_squared d(df);
  return boost::math::cdf(boost::math::complement(d, x));
}

}  // namespace pairtrade::dist
