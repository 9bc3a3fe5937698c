#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/rng.hpp"

// Stochastic block model: generation, Poisson degree-profile testing, the
// Chernoff-Hellinger divergence and the exact-recovery threshold built on it.
// Community labels are 0-based here; text/JSON output shifts them to 1-based.
namespace netinf::sbm {

enum class Regime {
  kConstant,     // edge probability Q_ij
  kLogarithmic,  // Q_ij * ln(n) / n
  kLinear,       // Q_ij / n
};

struct SbmParams {
  std::vector<double> prior;               // p, sums to 1
  std::vector<std::vector<double>> rates;  // Q, symmetric k x k
  Regime regime = Regime::kLogarithmic;

  std::size_t k() const { return prior.size(); }

  // Throws ParameterError if any invariant is violated.
  void validate() const;

  // Edge probability between communities i and j at n vertices, before any
  // range check.
  double edge_probability(std::size_t i, std::size_t j, std::size_t n) const;

  // k communities of equal prior, Q_ii = a, Q_ij = b otherwise.
  static SbmParams symmetric(std::size_t k, double a, double b,
                             Regime regime = Regime::kLogarithmic);
};

using CommunityProfile = std::vector<double>;

struct LabeledGraph {
  Graph graph;
  std::vector<std::size_t> labels;
};

struct PoissonTestResult {
  double d_plus = 0.0;
  double t_star = 0.5;
};

struct RecoveryVerdict {
  bool solvable = false;
  bool boundary = false;  // min_value within 1e-9 of the threshold 1
  std::optional<std::pair<std::size_t, std::size_t>> min_pair;
  double min_value = 0.0;
};

struct PairwiseError {
  double value = 0.0;
  double truncation_bound = 0.0;  // upper bound on the omitted lattice mass
};

struct ErrorBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct LeCam {
  double tv = 0.0;
  double bound = 0.0;
};

// Throws ParameterError if any scaled edge probability leaves [0, 1].
LabeledGraph sample_sbm(std::size_t n, const SbmParams& params, RngStream& rng);

// Columns of diag(p) Q (unscaled).
std::vector<CommunityProfile> community_profiles(const SbmParams& params);

double d_t(std::span<const double> c1, std::span<const double> c2, double t);

// Maximizes the concave map t -> d_t(c1, c2, t) on [0, 1]. The result is
// exactly symmetric: swapping the arguments gives the same d_plus and maps
// t_star to 1 - t_star.
PoissonTestResult ch_divergence(std::span<const double> c1, std::span<const double> c2);

// Requires the logarithmic regime and pairwise distinct rows of Q.
RecoveryVerdict exact_recovery_solvable(const SbmParams& params);

// Blocks are the connected components of the graph on [k] whose edges are the
// pairs with D_+ < 1. Each block is sorted; blocks are ordered by first member.
std::vector<std::vector<std::size_t>> finest_partition(const SbmParams& params);

// Entry i counts neighbours of v labelled i. k = 0 infers k from the labels.
std::vector<std::uint64_t> degree_profile(const LabeledGraph& lg, Vertex v, std::size_t k = 0);

// MAP label: argmax_j log p_j + sum_i (d_i log means[j][i] - means[j][i]).
// Ties go to the smallest index.
std::size_t map_classify(std::span<const std::uint64_t> d,
                         const std::vector<std::vector<double>>& means,
                         std::span<const double> prior);

// Sum over the lattice of min{P_{lambda_i}(x) p_i, P_{lambda_j}(x) p_j}.
// Each coordinate is truncated at mu + 12 sqrt(mu) + 30 (mu the larger of the
// two means); the bound on the dropped mass is returned alongside.
PairwiseError pairwise_error(std::span<const double> lambda_i, std::span<const double> lambda_j,
                             double p_i, double p_j);

// (1/(k-1)) sum_{i<j} P_e(i,j) <= P_e <= sum_{i<j} P_e(i,j).
ErrorBounds map_error_bounds(const std::vector<std::vector<double>>& pairwise);

// Exact TV(Bin(n a, ln(n) b / n), Poi(a b ln n)) and Le Cam's bound
// 2 a b^2 ln(n)^2 / n. Requires n a to be a positive integer.
LeCam lecam_tv(std::size_t n, double a, double b);

// x_l = floor((PQ)_{l,i}^t* (PQ)_{l,j}^(1-t*) ln n), the degree profile that is
// likely under both communities i and j.
std::vector<std::uint64_t> ambiguous_profile(const SbmParams& params, std::size_t i,
                                             std::size_t j, double n);

// Each label is replaced, with probability `rate`, by a uniformly chosen
// different label. Stand-in for a partial-recovery algorithm.
std::vector<std::size_t> corrupt_labels(std::span<const std::size_t> truth, std::size_t k,
                                        double rate, RngStream& rng);

// One synchronous degree-profiling round: every vertex is re-labelled by
// map_classify on its profile against `current`, means ln(n) (PQ)_j.
std::vector<std::size_t> degree_profiling_round(const Graph& g,
                                                std::span<const std::size_t> current,
                                                const SbmParams& params);

// Corrupts the true labels at `corruption`, then applies `rounds` rounds of
// degree profiling. Logarithmic regime only.
std::vector<std::size_t> genie_recover(const LabeledGraph& lg, const SbmParams& params,
                                       double corruption, std::size_t rounds, RngStream& rng);

// Fraction of vertices whose label matches.
double label_accuracy(std::span<const std::size_t> labels, std::span<const std::size_t> truth);

struct MapSimulation {
  double error_rate = 0.0;
  double standard_error = 0.0;
  std::size_t replicas = 0;
};

// Monte Carlo of the Bayesian test: H ~ prior, D | H = j ~ Poisson(means[j]),
// error when map_classify(D) != H. Replica r draws from rng.replica(r).
MapSimulation simulate_map_error(const std::vector<std::vector<double>>& means,
                                 std::span<const double> prior, std::size_t replicas,
                                 const RngStream& rng);

}  // namespace netinf::sbm
