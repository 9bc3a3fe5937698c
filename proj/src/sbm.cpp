#include "netinf/sbm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "netinf/error.hpp"
#include "netinf/special.hpp"

namespace netinf::sbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ParameterError("profile lengths differ: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

void check_nonnegative(std::span<const double> c) {
  for (double x : c) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ParameterError("profile entries must be finite and >= 0");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

void SbmParams::validate() const {
  const std::size_t kk = k();
  if (kk == 0) throw ParameterError("SBM needs at least one community");
  double total = 0.0;
  for (double p : prior) {
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("prior entries must lie in (0, 1]");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw ParameterError("prior must sum to 1");
  if (rates.size() != kk) throw ParameterError("Q must be k x k");
  for (std::size_t i = 0; i < kk; ++i) {
    if (rates[i].size() != kk) throw ParameterError("Q must be k x k");
    for (std::size_t j = 0; j < kk; ++j) {
      const double q = rates[i][j];
      if (!(q >= 0.0) || !std::isfinite(q)) throw ParameterError("Q entries must be finite and >= 0");
      if (regime == Regime::kLogarithmic && q == 0.0) {
        throw ParameterError("Q entries must be > 0 in the logarithmic regime");
      }
    }
  }
  for (std::size_t i = 0; i < kk; ++i) {
    for (std::size_t j = i + 1; j < kk; ++j) {
      if (rates[i][j] != rates[j][i]) throw ParameterError("Q must be symmetric");
    }
  }
}

double SbmParams::edge_probability(std::size_t i, std::size_t j, std::size_t n) const {
  const double q = rates[i][j];
  const double nd = static_cast<double>(n);
  switch (regime) {
    case Regime::kConstant:
      return q;
    case Regime::kLogarithmic:
      return q * std::log(nd) / nd;
    case Regime::kLinear:
      return q / nd;
  }
  return q;
}

SbmParams SbmParams::symmetric(std::size_t k, double a, double b, Regime regime) {
  SbmParams params;
  params.prior.assign(k, 1.0 / static_cast<double>(k));
  params.rates.assign(k, std::vector<double>(k, b));
  for (std::size_t i = 0; i < k; ++i) params.rates[i][i] = a;
  params.regime = regime;
  return params;
}

// ---------------------------------------------------------------------------
// Generation

LabeledGraph sample_sbm(std::size_t n, const SbmParams& params, RngStream& rng) {
  params.validate();
  const std::size_t k = params.k();
  std::vector<std::vector<double>> prob(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double q = params.edge_probability(i, j, n);
      if (!(q >= 0.0 && q <= 1.0)) {
        throw ParameterError("scaled edge probability " + std::to_string(q) + " for pair (" +
                             std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") is outside [0, 1]");
      }
      prob[i][j] = q;
    }
  }

  LabeledGraph lg{Graph(n), std::vector<std::size_t>(n)};
  for (auto& label : lg.labels) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    label = k - 1;
    for (std::size_t j = 0; j < k; ++j) {
      cumulative += params.prior[j];
      if (u < cumulative) {
        label = j;
        break;
      }
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    const auto& row = prob[lg.labels[u]];
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.uniform() < row[lg.labels[v]]) lg.graph.add_edge(u, v);
    }
  }
  return lg;
}

std::vector<CommunityProfile> community_profiles(const SbmParams& params) {
  params.validate();
  const std::size_t k = params.k();
  std::vector<CommunityProfile> profiles(k, CommunityProfile(k));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) profiles[j][i] = params.prior[i] * params.rates[i][j];
  }
  return profiles;
}

// ---------------------------------------------------------------------------
// CH-divergence

double d_t(std::span<const double> c1, std::span<const double> c2, double t) {
  check_same_length(c1, c2);
  if (t == 0.0 || t == 1.0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    total += t * c1[i] + (1.0 - t) * c2[i] - std::pow(c1[i], t) * std::pow(c2[i], 1.0 - t);
  }
  return total;
}

PoissonTestResult ch_divergence(std::span<const double> c1, std::span<const double> c2) {
  check_same_length(c1, c2);
  check_nonnegative(c1);
  check_nonnegative(c2);
  if (std::equal(c1.begin(), c1.end(), c2.begin())) return {0.0, 0.5};
  if (std::lexicographical_compare(c2.begin(), c2.end(), c1.begin(), c1.end())) {
    const PoissonTestResult swapped = ch_divergence(c2, c1);
    return {swapped.d_plus, 1.0 - swapped.t_star};
  }
  const auto best = special::maximize_concave([&](double t) { return d_t(c1, c2, t); }, 0.0,
                                              1.0, 1e-10);
  return {std::max(best.value, 0.0), best.argmax};
}

RecoveryVerdict exact_recovery_solvable(const SbmParams& params) {
  params.validate();
  if (params.regime != Regime::kLogarithmic) {
    throw ParameterError("exact recovery threshold applies to the logarithmic regime only");
  }
  const std::size_t k = params.k();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (params.rates[i] == params.rates[j]) {
        throw ParameterError("rows " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                             " of Q are equal");
      }
    }
  }
  const auto profiles = community_profiles(params);
  RecoveryVerdict verdict;
  verdict.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double value = ch_divergence(profiles[i], profiles[j]).d_plus;
      if (value < verdict.min_value) {
        verdict.min_value = value;
        verdict.min_pair = std::make_pair(i, j);
      }
    }
  }
  // Within solver tolerance of the threshold counts as meeting it.
  verdict.solvable = verdict.min_value >= 1.0 - 1e-9;
  verdict.boundary = std::fabs(verdict.min_value - 1.0) <= 1e-9;
  return verdict;
}

std::vector<std::vector<std::size_t>> finest_partition(const SbmParams& params) {
  params.validate();
  if (params.regime != Regime::kLogarithmic) {
    throw ParameterError("exact recovery threshold applies to the logarithmic regime only");
  }
  const auto profiles = community_profiles(params);
  const std::size_t k = params.k();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (ch_divergence(profiles[i], profiles[j]).d_plus < 1.0 - 1e-9) {
        const std::size_t a = find(i), b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> block_of(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t r = find(i);
    if (block_of[r] == k) {
      block_of[r] = blocks.size();
      blocks.emplace_back();
    }
    blocks[block_of[r]].push_back(i);
  }
  return blocks;
}

// ---------------------------------------------------------------------------
// Degree profiles and MAP testing

std::vector<std::uint64_t> degree_profile(const LabeledGraph& lg, Vertex v, std::size_t k) {
  if (lg.labels.size() != lg.graph.size()) throw ParameterError("labels length must equal n");
  if (v >= lg.graph.size()) throw ParameterError("vertex out of range");
  const std::size_t max_label = *std::max_element(lg.labels.begin(), lg.labels.end());
  if (k == 0) k = max_label + 1;
  if (max_label >= k) throw ParameterError("label out of range");
  std::vector<std::uint64_t> profile(k, 0);
  const auto row = lg.graph.row(v);
  for (std::size_t w = 0; w < row.size(); ++w) {
    std::uint64_t bits = row[w];
    while (bits) {
      const auto u = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      ++profile[lg.labels[u]];
      bits &= bits - 1;
    }
  }
  return profile;
}

std::size_t map_classify(std::span<const std::uint64_t> d,
                         const std::vector<std::vector<double>>& means,
                         std::span<const double> prior) {
  if (means.empty() || means.size() != prior.size()) {
    throw ParameterError("need one mean vector per prior entry");
  }
  std::size_t best = 0;
  double best_score = kNegInf;
  bool have_best = false;
  for (std::size_t j = 0; j < means.size(); ++j) {
    if (means[j].size() != d.size()) throw ParameterError("mean vector length must equal k");
    double score = prior[j] > 0.0 ? std::log(prior[j]) : kNegInf;
    for (std::size_t i = 0; i < d.size() && score != kNegInf; ++i) {
      const double lambda = means[j][i];
      if (lambda == 0.0) {
        if (d[i] > 0) score = kNegInf;
      } else {
        score += static_cast<double>(d[i]) * std::log(lambda) - lambda;
      }
    }
    if (!have_best || score > best_score) {
      best = j;
      best_score = score;
      have_best = true;
    }
  }
  return best;
}

PairwiseError pairwise_error(std::span<const double> lambda_i, std::span<const double> lambda_j,
                             double p_i, double p_j) {
  check_same_length(lambda_i, lambda_j);
  check_nonnegative(lambda_i);
  check_nonnegative(lambda_j);
  if (p_i < 0.0 || p_j < 0.0) throw ParameterError("priors must be >= 0");
  if (p_i == 0.0 || p_j == 0.0) return {0.0, 0.0};

  const std::size_t k = lambda_i.size();
  // Per-coordinate log pmf tables over 0..limit[c].
  std::vector<std::size_t> limit(k);
  std::vector<std::vector<double>> log_a(k), log_b(k);
  double tail_i = 0.0, tail_j = 0.0;
  double box = 1.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double mu = std::max(lambda_i[c], lambda_j[c]);
    limit[c] = static_cast<std::size_t>(std::ceil(mu + 12.0 * std::sqrt(mu) + 30.0));
    box *= static_cast<double>(limit[c] + 1);
    log_a[c].resize(limit[c] + 1);
    log_b[c].resize(limit[c] + 1);
    for (std::size_t x = 0; x <= limit[c]; ++x) {
      log_a[c][x] = special::log_poisson_pmf(x, lambda_i[c]);
      log_b[c][x] = special::log_poisson_pmf(x, lambda_j[c]);
    }
    tail_i += special::poisson_upper_tail(limit[c], lambda_i[c]);
    tail_j += special::poisson_upper_tail(limit[c], lambda_j[c]);
  }
  if (box > 5e7) throw ParameterError("Poisson lattice too large to enumerate");

  const double log_pi = std::log(p_i), log_pj = std::log(p_j);
  std::vector<std::size_t> x(k, 0);
  long double total = 0.0L;
  for (;;) {
    double la = log_pi, lb = log_pj;
    for (std::size_t c = 0; c < k; ++c) {
      la += log_a[c][x[c]];
      lb += log_b[c][x[c]];
    }
    total += std::exp(std::min(la, lb));
    std::size_t c = 0;
    while (c < k && ++x[c] > limit[c]) x[c++] = 0;
    if (c == k) break;
  }
  return {static_cast<double>(total), std::min(p_i * tail_i, p_j * tail_j)};
}

ErrorBounds map_error_bounds(const std::vector<std::vector<double>>& pairwise) {
  const std::size_t k = pairwise.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (pairwise[i].size() != k) throw ParameterError("pairwise error matrix must be square");
    for (std::size_t j = i + 1; j < k; ++j) {
      if (pairwise[i][j] < 0.0) throw ParameterError("pairwise errors must be >= 0");
      sum += pairwise[i][j];
    }
  }
  if (k < 2) return {0.0, 0.0};
  return {sum / static_cast<double>(k - 1), sum};
}

LeCam lecam_tv(std::size_t n, double a, double b) {
  if (n < 2) throw ParameterError("lecam_tv needs n >= 2");
  const double nd = static_cast<double>(n);
  const double trials_d = nd * a;
  const double trials_rounded = std::round(trials_d);
  if (!(a > 0.0) || trials_rounded < 1.0 || std::fabs(trials_d - trials_rounded) > 1e-9) {
    throw ParameterError("n * a must be a positive integer");
  }
  const double ln_n = std::log(nd);
  const double q = ln_n * b / nd;
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("ln(n) b / n must lie in [0, 1]");
  const auto trials = static_cast<std::uint64_t>(trials_rounded);
  const double mean = a * b * ln_n;
  const double bound = 2.0 * a * b * b * ln_n * ln_n / nd;
  if (q == 0.0) return {0.0, bound};

  std::uint64_t limit = static_cast<std::uint64_t>(std::ceil(mean + 12.0 * std::sqrt(mean) + 30.0));
  while (special::binomial_upper_tail(limit, trials, q) +
             special::poisson_upper_tail(limit, mean) >=
         1e-12) {
    limit *= 2;
  }

  // Both pmfs by their ratio recurrences in log space.
  double log_bin = static_cast<double>(trials) * std::log1p(-q);
  double log_poi = -mean;
  const double log_odds = std::log(q) - std::log1p(-q);
  const double log_mean = std::log(mean);
  long double half_l1 = 0.0L;
  for (std::uint64_t x = 0; x <= limit; ++x) {
    const double pb = x <= trials ? std::exp(log_bin) : 0.0;
    half_l1 += std::fabs(pb - std::exp(log_poi));
    const double xd = static_cast<double>(x);
    if (x < trials) {
      log_bin += std::log(static_cast<double>(trials - x) / (xd + 1.0)) + log_odds;
    } else {
      log_bin = kNegInf;
    }
    log_poi += log_mean - std::log(xd + 1.0);
  }
  return {static_cast<double>(0.5L * half_l1), bound};
}

std::vector<std::uint64_t> ambiguous_profile(const SbmParams& params, std::size_t i,
                                             std::size_t j, double n) {
  const std::size_t k = params.k();
  if (i >= k || j >= k) throw ParameterError("community index out of range");
  if (i == j) throw ParameterError("ambiguous profile needs two distinct communities");
  if (!(n > 1.0)) throw ParameterError("n must exceed 1");
  const auto profiles = community_profiles(params);
  const double t = ch_divergence(profiles[i], profiles[j]).t_star;
  const double ln_n = std::log(n);
  std::vector<std::uint64_t> x(k);
  for (std::size_t l = 0; l < k; ++l) {
    const double v = std::pow(profiles[i][l], t) * std::pow(profiles[j][l], 1.0 - t) * ln_n;
    x[l] = static_cast<std::uint64_t>(std::floor(v));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Genie-aided recovery

std::vector<std::size_t> corrupt_labels(std::span<const std::size_t> truth, std::size_t k,
                                        double rate, RngStream& rng) {
  if (!(rate >= 0.0 && rate < 0.5)) throw ParameterError("corruption rate must lie in [0, 1/2)");
  std::vector<std::size_t> out(truth.begin(), truth.end());
  if (k < 2) return out;
  for (auto& label : out) {
    if (rng.uniform() < rate) {
      const auto shift = 1 + rng.below(k - 1);
      label = (label + shift) % k;
    }
  }
  return out;
}

std::vector<std::size_t> degree_profiling_round(const Graph& g,
                                                std::span<const std::size_t> current,
                                                const SbmParams& params) {
  const std::size_t n = g.size();
  const std::size_t k = params.k();
  if (current.size() != n) throw ParameterError("labels length must equal n");
  const auto profiles = community_profiles(params);
  const double ln_n = std::log(static_cast<double>(n));
  std::vector<std::vector<double>> means(k, std::vector<double>(k));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) means[j][i] = ln_n * profiles[j][i];
  }
  // Bit masks of the current communities.
  const std::size_t words = g.words_per_row();
  std::vector<std::vector<std::uint64_t>> mask(k, std::vector<std::uint64_t>(words, 0));
  for (Vertex v = 0; v < n; ++v) {
    if (current[v] >= k) throw ParameterError("label out of range");
    mask[current[v]][v / 64] |= std::uint64_t{1} << (v % 64);
  }
  std::vector<std::size_t> next(n);
  std::vector<std::uint64_t> d(k);
  for (Vertex v = 0; v < n; ++v) {
    const auto row = g.row(v);
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t count = 0;
      for (std::size_t w = 0; w < words; ++w) {
        count += static_cast<std::uint64_t>(std::popcount(row[w] & mask[i][w]));
      }
      d[i] = count;
    }
    next[v] = map_classify(d, means, params.prior);
  }
  return next;
}

std::vector<std::size_t> genie_recover(const LabeledGraph& lg, const SbmParams& params,
                                       double corruption, std::size_t rounds, RngStream& rng) {
  params.validate();
  if (params.regime != Regime::kLogarithmic) {
    throw ParameterError("genie-aided recovery assumes the logarithmic regime");
  }
  auto labels = corrupt_labels(lg.labels, params.k(), corruption, rng);
  for (std::size_t r = 0; r < rounds; ++r) labels = degree_profiling_round(lg.graph, labels, params);
  return labels;
}

double label_accuracy(std::span<const std::size_t> labels, std::span<const std::size_t> truth) {
  if (labels.size() != truth.size() || truth.empty()) {
    throw ParameterError("label vectors must be nonempty and of equal length");
  }
  std::size_t hits = 0;
  for (std::size_t v = 0; v < truth.size(); ++v) hits += labels[v] == truth[v];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

MapSimulation simulate_map_error(const std::vector<std::vector<double>>& means,
                                 std::span<const double> prior, std::size_t replicas,
                                 const RngStream& rng) {
  if (replicas == 0) throw ParameterError("replicas must be >= 1");
  const std::size_t k = prior.size();
  std::size_t errors = 0;
  std::vector<std::uint64_t> d(means.empty() ? 0 : means[0].size());
  for (std::size_t r = 0; r < replicas; ++r) {
    RngStream local = rng.replica(r);
    const double u = local.uniform();
    double cumulative = 0.0;
    std::size_t h = k - 1;
    for (std::size_t j = 0; j < k; ++j) {
      cumulative += prior[j];
      if (u < cumulative) {
        h = j;
        break;
      }
    }
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = local.poisson(means[h][i]);
    errors += map_classify(d, means, prior) != h;
  }
  const double rate = static_cast<double>(errors) / static_cast<double>(replicas);
  return {rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(replicas)), replicas};
}

}  // namespace netinf::sbm
