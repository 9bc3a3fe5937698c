#include "netinf/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "netinf/error.hpp"

namespace netinf::special {

double log_poisson_pmf(std::uint64_t x, double mean) {
  if (mean < 0.0) throw ParameterError("Poisson mean must be >= 0");
  const double xd = static_cast<double>(x);
  if (mean == 0.0) return x == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return xd * std::log(mean) - mean - std::lgamma(xd + 1.0);
}

double poisson_upper_tail(std::uint64_t x, double mean) {
  if (mean == 0.0) return 0.0;
  // P(X > x) = P(X >= x + 1) = regularized lower gamma P(x + 1, mean).
  return boost::math::gamma_p(static_cast<double>(x) + 1.0, mean);
}

double log_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double log_binomial_pmf(std::uint64_t k, std::uint64_t trials, double q) {
  if (q < 0.0 || q > 1.0) throw ParameterError("binomial probability out of [0, 1]");
  if (k > trials) return -std::numeric_limits<double>::infinity();
  if (q == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (q == 1.0) return k == trials ? 0.0 : -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k), nd = static_cast<double>(trials);
  return log_choose(trials, k) + kd * std::log(q) + (nd - kd) * std::log1p(-q);
}

double binomial_upper_tail(std::uint64_t k, std::uint64_t trials, double q) {
  if (k >= trials || q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  // P(X >= k + 1) = I_q(k + 1, trials - k).
  return boost::math::ibeta(static_cast<double>(k) + 1.0, static_cast<double>(trials - k), q);
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double chi_squared_sf(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

Maximum maximize_concave(const std::function<double(double)>& f, double lo, double hi,
                         double tolerance) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  Maximum best = fc >= fd ? Maximum{c, fc} : Maximum{d, fd};

  // Parabola through the bracket ends and the best interior point.
  const double x0 = a, x1 = best.argmax, x2 = b;
  const double f0 = f(x0), f1 = best.value, f2 = f(x2);
  const double num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
  const double den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
  if (den != 0.0 && std::isfinite(num / den)) {
    const double x = x1 - 0.5 * num / den;
    if (x > x0 && x < x2) {
      const double fx = f(x);
      if (fx > best.value) best = {x, fx};
    }
  }
  if (f0 > best.value) best = {x0, f0};
  if (f2 > best.value) best = {x2, f2};
  return best;
}

}  // namespace netinf::special
