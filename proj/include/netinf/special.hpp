#pragma once

#include <cstdint>
#include <functional>

// Numerical helpers shared across modules. Incomplete gamma/beta functions
// come from Boost.Math; everything else is written out here.
namespace netinf::special {

double log_poisson_pmf(std::uint64_t x, double mean);
// P(X > x) for X ~ Poisson(mean).
double poisson_upper_tail(std::uint64_t x, double mean);

double log_binomial_pmf(std::uint64_t k, std::uint64_t trials, double q);
// P(X > k) for X ~ Bin(trials, q).
double binomial_upper_tail(std::uint64_t k, std::uint64_t trials, double q);

double log_choose(std::uint64_t n, std::uint64_t k);

// Regularized incomplete beta I_x(a, b), i.e. the Beta(a, b) CDF at x.
double beta_cdf(double x, double a, double b);

// Upper tail of the chi-squared distribution.
double chi_squared_sf(double statistic, double dof);

struct Maximum {
  double argmax;
  double value;
};

// Golden-section search for the maximum of a concave f on [lo, hi], run
// until the bracket is narrower than `tolerance`, followed by one parabolic
// step through the final three points (kept only if it improves f).
Maximum maximize_concave(const std::function<double(double)>& f, double lo, double hi,
                         double tolerance);

}  // namespace netinf::special
