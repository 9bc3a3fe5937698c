#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "netinf/harness.hpp"
#include "netinf/rng.hpp"

// Polya urns with an arbitrary nonnegative replacement matrix.
namespace netinf::urns {

struct UrnState {
  std::vector<std::uint64_t> counts;
  // Row i: balls of each color added when color i is drawn.
  std::vector<std::vector<std::uint64_t>> replacement;

  std::size_t colors() const { return counts.size(); }
  std::uint64_t total() const;

  // Throws ParameterError unless the shapes match, total >= 1 and every
  // replacement row is nonzero.
  void validate() const;

  // counts with replacement k * identity.
  static UrnState diagonal(std::vector<std::uint64_t> counts, std::uint64_t k = 1);
};

struct Snapshot {
  std::uint64_t step = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> counts;
};

struct UrnTrajectory {
  std::vector<Snapshot> snapshots;
  UrnState final_state;
};

// Draws one ball (color i with probability counts_i / total), applies
// replacement row i and returns i.
std::size_t urn_step(UrnState& state, RngStream& rng);

// Runs `steps` draws. A snapshot is recorded after each step index listed in
// `checkpoints` (0 is the initial state); checkpoints must be <= steps.
UrnTrajectory urn_run(const UrnState& initial, std::uint64_t steps,
                      std::span<const std::uint64_t> checkpoints, RngStream& rng);

// Probability of drawing the given color sequence from `initial`.
double sequence_probability(const UrnState& initial, std::span<const std::size_t> colors);

// P(k blue among the first n draws) for the classical urn started from
// b blue and r red balls.
double beta_binomial_pmf(std::uint64_t n, std::uint64_t b, std::uint64_t r, std::uint64_t k);

enum class LawKind {
  kBeta,             // two colors, identity replacement, limit Beta(b, r)
  kDirichlet,        // identity replacement, limit Dir(r_1, ..., r_m)
  kDirichletScaled,  // replacement k * identity, limit Dir(r_1 / k, ..., r_m / k)
};

struct LimitLaw {
  LawKind kind = LawKind::kBeta;
  std::vector<double> params;  // (b, r), (r_1..r_m) or (k)
};

struct LimitLawReport {
  double ks = 0.0;                  // max over marginals
  std::vector<double> marginal_ks;  // one per color (a single entry for kBeta)
  std::vector<double> alpha;        // Dirichlet parameters of the limit
  std::size_t runs = 0;
  std::uint64_t n_final = 0;
};

// Runs each urn until the total reaches n_final and compares the terminal
// color fractions with the Beta marginals of the limit law. Throws if the law
// does not match the initial state.
LimitLawReport limit_law_check(const UrnState& initial, const LimitLaw& law,
                               std::uint64_t n_final, std::size_t runs, const RngStream& rng,
                               std::size_t jobs = 1);

struct TriangularScaling {
  std::vector<std::uint64_t> n_values;
  // samples[i][run] = red / sqrt(total) at the first time total >= n_values[i].
  std::vector<std::vector<double>> samples;
  std::vector<harness::Moments> moments;
  // ks between samples[i] and samples[i + 1].
  std::vector<double> consecutive_ks;
};

// Replacement must be [[2, 0], [1, 1]] (color 0 blue, color 1 red) with at
// least one red ball. All n_values are read off the same trajectories.
TriangularScaling triangular_urn_scaling(const UrnState& initial,
                                         std::span<const std::uint64_t> n_values,
                                         std::size_t runs, const RngStream& rng,
                                         std::size_t jobs = 1);

}  // namespace netinf::urns
