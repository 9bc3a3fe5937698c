#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/rng.hpp"

// Monte Carlo machinery shared by every experiment: replica scheduling,
// moments, Kolmogorov-Smirnov distances and threshold tests.
//
// All aggregation runs over replica indices in increasing order, so results
// are bit-identical for any number of worker threads.
namespace netinf::harness {

struct SampleSet {
  std::vector<double> values;
  std::string model_tag;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
  std::size_t count = 0;
};

struct PowerReport {
  double power = 0.0;
  double size = 0.0;
  double threshold = 0.0;
  bool reject_above = true;  // reject the null when statistic >= threshold
  std::size_t replicas = 0;
  std::pair<double, double> standard_errors;  // (power, size)
  Moments null_moments;
  Moments alt_moments;
};

// A statistic computed on one random draw.
using Draw = std::function<double(RngStream&)>;

// Runs body(i) for i in [0, replicas) on `jobs` threads (jobs <= 1: inline).
void for_each_replica(std::size_t replicas, std::size_t jobs,
                      const std::function<void(std::size_t)>& body);

// values[i] = draw(rng.replica(i)).
SampleSet collect(const Draw& draw, std::size_t replicas, const RngStream& rng,
                  std::string model_tag, std::size_t jobs = 1);

// Requires at least two values.
Moments mean_var(std::span<const double> values);
inline Moments mean_var(const SampleSet& s) { return mean_var(s.values); }

// sup_x |F_a(x) - F_b(x)| over the two empirical CDFs. Requires nonempty inputs.
double ks_distance(std::span<const double> a, std::span<const double> b);
inline double ks_distance(const SampleSet& a, const SampleSet& b) {
  return ks_distance(a.values, b.values);
}

// sup_x |F_n(x) - F(x)| against a continuous CDF.
double ks_distance_to_cdf(std::span<const double> sample,
                          const std::function<double(double)>& cdf);

// A lower bound on the total variation distance between the laws that
// generated the samples: any threshold event on a statistic is an event on
// the underlying objects. Numerically equal to ks_distance.
double tv_lower_bound(const SampleSet& a, const SampleSet& b);

// Midpoint of the two means weighted so that both sit the same number of
// standard deviations from it.
double weighted_midpoint(double mean_a, double sd_a, double mean_b, double sd_b);

// Threshold test between two statistic generators. `replicas` draws per model
// calibrate the threshold (weighted midpoint of the means); a second, fresh
// set of `replicas` draws per model estimates size and power. Requires
// replicas >= 100.
PowerReport power_test(const Draw& null_draw, const Draw& alt_draw, std::size_t replicas,
                       const RngStream& rng, std::size_t jobs = 1);

using GraphGenerator = std::function<Graph(RngStream&)>;
using GraphStatistic = std::function<double(const Graph&)>;

PowerReport power_test(const GraphGenerator& gen_null, const GraphGenerator& gen_alt,
                       const GraphStatistic& statistic, std::size_t replicas,
                       const RngStream& rng, std::size_t jobs = 1);

// Least-squares slope of y on x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace netinf::harness
