#include "netinf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "netinf/error.hpp"

namespace netinf::harness {

void for_each_replica(std::size_t replicas, std::size_t jobs,
                      const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || replicas < 2) {
    for (std::size_t i = 0; i < replicas; ++i) body(i);
    return;
  }
  jobs = std::min(jobs, replicas);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  workers.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < replicas; i += jobs) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SampleSet collect(const Draw& draw, std::size_t replicas, const RngStream& rng,
                  std::string model_tag, std::size_t jobs) {
  SampleSet out{std::vector<double>(replicas), std::move(model_tag), rng.seed(), rng.stream()};
  for_each_replica(replicas, jobs, [&](std::size_t i) {
    RngStream local = rng.replica(i);
    out.values[i] = draw(local);
  });
  return out;
}

Moments mean_var(std::span<const double> values) {
  if (values.size() < 2) throw ParameterError("mean_var needs at least two samples");
  const auto count = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / (count - 1.0);
  return {mean, variance, std::sqrt(variance / count), values.size()};
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ParameterError("ks_distance needs nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_distance_to_cdf(std::span<const double> sample,
                          const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ParameterError("ks_distance_to_cdf needs a nonempty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double best = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    const double t = x[i];
    const double below = static_cast<double>(i) / n;
    while (i < x.size() && x[i] == t) ++i;
    const double at = static_cast<double>(i) / n;
    const double f = cdf(t);
    best = std::max({best, std::fabs(at - f), std::fabs(f - below)});
  }
  return best;
}

double tv_lower_bound(const SampleSet& a, const SampleSet& b) { return ks_distance(a, b); }

double weighted_midpoint(double mean_a, double sd_a, double mean_b, double sd_b) {
  if (sd_a + sd_b <= 0.0) return 0.5 * (mean_a + mean_b);
  return (mean_a * sd_b + mean_b * sd_a) / (sd_a + sd_b);
}

PowerReport power_test(const Draw& null_draw, const Draw& alt_draw, std::size_t replicas,
                       const RngStream& rng, std::size_t jobs) {
  if (replicas < 100) throw ParameterError("power_test needs at least 100 replicas");
  const RngStream cal = rng.substream(kCalibratePhase);
  const RngStream eval = rng.substream(kEvaluatePhase);
  const auto cal_null = collect(null_draw, replicas, cal.substream(kNullPhase), "null", jobs);
  const auto cal_alt = collect(alt_draw, replicas, cal.substream(kAltPhase), "alt", jobs);
  const auto eval_null = collect(null_draw, replicas, eval.substream(kNullPhase), "null", jobs);
  const auto eval_alt = collect(alt_draw, replicas, eval.substream(kAltPhase), "alt", jobs);

  PowerReport report;
  report.replicas = replicas;
  report.null_moments = mean_var(cal_null);
  report.alt_moments = mean_var(cal_alt);
  const double sd0 = std::sqrt(report.null_moments.variance);
  const double sd1 = std::sqrt(report.alt_moments.variance);
  report.threshold =
      weighted_midpoint(report.null_moments.mean, sd0, report.alt_moments.mean, sd1);
  report.reject_above = report.alt_moments.mean >= report.null_moments.mean;

  auto rejection_rate = [&](const SampleSet& s) {
    std::size_t rejected = 0;
    for (double v : s.values) {
      rejected += report.reject_above ? v >= report.threshold : v <= report.threshold;
    }
    return static_cast<double>(rejected) / static_cast<double>(s.values.size());
  };
  report.size = rejection_rate(eval_null);
  report.power = rejection_rate(eval_alt);
  const auto r = static_cast<double>(replicas);
  report.standard_errors = {std::sqrt(report.power * (1.0 - report.power) / r),
                            std::sqrt(report.size * (1.0 - report.size) / r)};
  return report;
}

PowerReport power_test(const GraphGenerator& gen_null, const GraphGenerator& gen_alt,
                       const GraphStatistic& statistic, std::size_t replicas,
                       const RngStream& rng, std::size_t jobs) {
  return power_test([&](RngStream& r) { return statistic(gen_null(r)); },
                    [&](RngStream& r) { return statistic(gen_alt(r)); }, replicas, rng, jobs);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope needs >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ParameterError("slope undefined for constant x");
  return sxy / sxx;
}

}  // namespace netinf::harness
