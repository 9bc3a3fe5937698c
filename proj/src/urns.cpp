#include "netinf/urns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netinf/error.hpp"
#include "netinf/special.hpp"

namespace netinf::urns {

std::uint64_t UrnState::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void UrnState::validate() const {
  if (counts.empty()) throw ParameterError("urn needs at least one color");
  if (replacement.size() != counts.size()) {
    throw ParameterError("replacement matrix must be m x m");
  }
  for (const auto& row : replacement) {
    if (row.size() != counts.size()) throw ParameterError("replacement matrix must be m x m");
    if (std::all_of(row.begin(), row.end(), [](std::uint64_t x) { return x == 0; })) {
      throw ParameterError("replacement rows must be nonzero");
    }
  }
  if (total() == 0) throw ParameterError("urn must start with at least one ball");
}

UrnState UrnState::diagonal(std::vector<std::uint64_t> counts, std::uint64_t k) {
  const std::size_t m = counts.size();
  UrnState s{std::move(counts), std::vector<std::vector<std::uint64_t>>(
                                    m, std::vector<std::uint64_t>(m, 0))};
  for (std::size_t i = 0; i < m; ++i) s.replacement[i][i] = k;
  return s;
}

std::size_t urn_step(UrnState& state, RngStream& rng) {
  std::uint64_t ball = rng.below(state.total());
  std::size_t color = 0;
  while (ball >= state.counts[color]) {
    ball -= state.counts[color];
    ++color;
  }
  const auto& row = state.replacement[color];
  for (std::size_t i = 0; i < row.size(); ++i) state.counts[i] += row[i];
  return color;
}

UrnTrajectory urn_run(const UrnState& initial, std::uint64_t steps,
                      std::span<const std::uint64_t> checkpoints, RngStream& rng) {
  initial.validate();
  std::vector<std::uint64_t> marks(checkpoints.begin(), checkpoints.end());
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  if (!marks.empty() && marks.back() > steps) {
    throw ParameterError("checkpoint beyond the last step");
  }
  UrnTrajectory out{{}, initial};
  auto next = marks.begin();
  for (std::uint64_t s = 0;; ++s) {
    if (next != marks.end() && *next == s) {
      out.snapshots.push_back({s, out.final_state.total(), out.final_state.counts});
      ++next;
    }
    if (s == steps) break;
    urn_step(out.final_state, rng);
  }
  return out;
}

double sequence_probability(const UrnState& initial, std::span<const std::size_t> colors) {
  initial.validate();
  UrnState state = initial;
  double prob = 1.0;
  for (std::size_t c : colors) {
    if (c >= state.colors()) throw ParameterError("color out of range");
    prob *= static_cast<double>(state.counts[c]) / static_cast<double>(state.total());
    for (std::size_t i = 0; i < state.colors(); ++i) state.counts[i] += state.replacement[c][i];
  }
  return prob;
}

double beta_binomial_pmf(std::uint64_t n, std::uint64_t b, std::uint64_t r, std::uint64_t k) {
  if (k > n) throw ParameterError("k must be <= n");
  if (b + r == 0) throw ParameterError("urn must start with at least one ball");
  // C(n, k) b^(k) r^(n-k) / (b + r)^(n), rising factorials via lgamma.
  auto log_rising = [](double x, std::uint64_t len) {
    if (len == 0) return 0.0;
    return std::lgamma(x + static_cast<double>(len)) - std::lgamma(x);
  };
  if ((b == 0 && k > 0) || (r == 0 && k < n)) return 0.0;
  const double bd = static_cast<double>(b), rd = static_cast<double>(r);
  return std::exp(special::log_choose(n, k) + log_rising(bd, k) + log_rising(rd, n - k) -
                  log_rising(bd + rd, n));
}

LimitLawReport limit_law_check(const UrnState& initial, const LimitLaw& law,
                               std::uint64_t n_final, std::size_t runs, const RngStream& rng,
                               std::size_t jobs) {
  initial.validate();
  if (runs == 0) throw ParameterError("runs must be positive");
  const std::size_t m = initial.colors();

  std::uint64_t k = 1;
  if (law.kind == LawKind::kDirichletScaled) {
    if (law.params.size() != 1 || law.params[0] < 1.0 ||
        law.params[0] != std::floor(law.params[0])) {
      throw ParameterError("scaled Dirichlet law takes one positive integer k");
    }
    k = static_cast<std::uint64_t>(law.params[0]);
  } else {
    if (law.kind == LawKind::kBeta && m != 2) throw ParameterError("Beta law needs two colors");
    if (law.params.size() != m) throw ParameterError("law parameters do not match the colors");
    for (std::size_t i = 0; i < m; ++i) {
      if (law.params[i] != static_cast<double>(initial.counts[i])) {
        throw ParameterError("law parameters must equal the initial counts");
      }
    }
  }
  if (!(initial.replacement == UrnState::diagonal(initial.counts, k).replacement)) {
    throw ParameterError("law requires a diagonal replacement matrix");
  }

  LimitLawReport report;
  report.runs = runs;
  report.n_final = n_final;
  for (auto c : initial.counts) {
    if (c == 0) throw ParameterError("every color needs at least one ball");
    report.alpha.push_back(static_cast<double>(c) / static_cast<double>(k));
  }
  const double alpha_sum = std::accumulate(report.alpha.begin(), report.alpha.end(), 0.0);

  std::vector<std::vector<double>> fractions(m, std::vector<double>(runs));
  harness::for_each_replica(runs, jobs, [&](std::size_t run) {
    RngStream local = rng.replica(run);
    UrnState state = initial;
    while (state.total() < n_final) urn_step(state, local);
    const double total = static_cast<double>(state.total());
    for (std::size_t i = 0; i < m; ++i) {
      fractions[i][run] = static_cast<double>(state.counts[i]) / total;
    }
  });

  const std::size_t marginals = law.kind == LawKind::kBeta ? 1 : m;
  for (std::size_t i = 0; i < marginals; ++i) {
    const double a = report.alpha[i], b = alpha_sum - a;
    const double d = harness::ks_distance_to_cdf(
        fractions[i], [a, b](double x) { return special::beta_cdf(x, a, b); });
    report.marginal_ks.push_back(d);
    report.ks = std::max(report.ks, d);
  }
  return report;
}

TriangularScaling triangular_urn_scaling(const UrnState& initial,
                                         std::span<const std::uint64_t> n_values,
                                         std::size_t runs, const RngStream& rng,
                                         std::size_t jobs) {
  initial.validate();
  const std::vector<std::vector<std::uint64_t>> expected{{2, 0}, {1, 1}};
  if (initial.replacement != expected) {
    throw ParameterError("triangular urn needs replacement [[2, 0], [1, 1]]");
  }
  if (initial.counts[1] == 0) throw ParameterError("triangular urn needs some red balls");
  if (n_values.empty() || runs < 2) throw ParameterError("need n values and at least 2 runs");
  std::vector<std::uint64_t> ns(n_values.begin(), n_values.end());
  if (!std::is_sorted(ns.begin(), ns.end())) throw ParameterError("n values must be increasing");

  TriangularScaling out;
  out.n_values = ns;
  out.samples.assign(ns.size(), std::vector<double>(runs));
  harness::for_each_replica(runs, jobs, [&](std::size_t run) {
    RngStream local = rng.replica(run);
    UrnState state = initial;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      while (state.total() < ns[i]) urn_step(state, local);
      out.samples[i][run] = static_cast<double>(state.counts[1]) /
                            std::sqrt(static_cast<double>(state.total()));
    }
  });
  for (std::size_t i = 0; i < ns.size(); ++i) {
    out.moments.push_back(harness::mean_var(out.samples[i]));
    if (i + 1 < ns.size()) {
      out.consecutive_ks.push_back(harness::ks_distance(out.samples[i], out.samples[i + 1]));
    }
  }
  return out;
}

}  // namespace netinf::urns
