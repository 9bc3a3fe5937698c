#include <doctest.h>

#include <cmath>
#include <vector>

#include "netinf/error.hpp"
#include "netinf/harness.hpp"

using namespace netinf;
using namespace netinf::harness;

TEST_CASE("moments") {
  const std::vector<double> x{1, 2, 3, 4};
  const auto m = mean_var(x);
  CHECK(m.mean == 2.5);
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.standard_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(m.count == 4);
  CHECK_THROWS_AS(mean_var(std::vector<double>{1.0}), ParameterError);
}

TEST_CASE("two-sample KS distance") {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3, 4};
  CHECK(ks_distance(a, b) == 0.0);
  const std::vector<double> c{5, 6, 7};
  CHECK(ks_distance(a, c) == 1.0);
  // Brute force over all jump points.
  const std::vector<double> x{0.1, 0.5, 0.5, 0.9, 1.3}, y{0.2, 0.5, 1.0};
  double brute = 0.0;
  for (double t : {0.1, 0.2, 0.5, 0.9, 1.0, 1.3}) {
    double fx = 0, fy = 0;
    for (double v : x) fx += v <= t;
    for (double v : y) fy += v <= t;
    brute = std::max(brute, std::fabs(fx / 5 - fy / 3));
  }
  CHECK(ks_distance(x, y) == doctest::Approx(brute));
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, y), ParameterError);
}

TEST_CASE("one-sample KS distance") {
  const std::vector<double> x{0.5};
  CHECK(ks_distance_to_cdf(x, [](double t) { return t; }) == doctest::Approx(0.5));
  const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
  CHECK(ks_distance_to_cdf(grid, [](double t) { return t; }) == doctest::Approx(0.1));
}

TEST_CASE("collect is independent of the job count") {
  const Draw draw = [](RngStream& r) { return r.normal() + r.uniform(); };
  const RngStream rng(121, 5);
  const auto one = collect(draw, 257, rng, "x", 1);
  const auto four = collect(draw, 257, rng, "x", 4);
  CHECK(one.values == four.values);
  CHECK(one.seed == 121);
  CHECK(one.stream == 5);
}

TEST_CASE("for_each_replica propagates exceptions") {
  CHECK_THROWS_AS(for_each_replica(10, 3,
                                   [](std::size_t i) {
                                     if (i == 7) throw ParameterError("boom");
                                   }),
                  ParameterError);
}

TEST_CASE("weighted midpoint") {
  CHECK(weighted_midpoint(0, 1, 10, 1) == 5.0);
  CHECK(weighted_midpoint(0, 1, 10, 3) == doctest::Approx(2.5));
  CHECK(weighted_midpoint(2, 0, 4, 0) == 3.0);
}

TEST_CASE("power test separates distinct laws and not equal ones") {
  const RngStream rng(122, 0);
  const auto far = power_test([](RngStream& r) { return r.normal(); },
                              [](RngStream& r) { return 6.0 + r.normal(); }, 1000, rng);
  CHECK(far.power > 0.99);
  CHECK(far.size < 0.01);
  CHECK(far.reject_above);

  const auto below = power_test([](RngStream& r) { return r.normal(); },
                                [](RngStream& r) { return -6.0 + r.normal(); }, 1000, rng);
  CHECK_FALSE(below.reject_above);
  CHECK(below.power > 0.99);

  const auto same = power_test([](RngStream& r) { return r.normal(); },
                               [](RngStream& r) { return r.normal(); }, 2000, rng);
  CHECK(std::fabs(same.power - same.size) < 0.1);
  CHECK_THROWS_AS(power_test([](RngStream& r) { return r.normal(); },
                             [](RngStream& r) { return r.normal(); }, 50, rng),
                  ParameterError);
}

TEST_CASE("least squares slope") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  CHECK(least_squares_slope(x, y) == doctest::Approx(2.0));
  CHECK_THROWS_AS(least_squares_slope(std::vector<double>{1, 1}, std::vector<double>{1, 2}),
                  ParameterError);
}
