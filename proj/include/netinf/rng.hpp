#pragma once

#include <cstdint>
#include <limits>

namespace netinf {

// Deterministic random stream identified by (seed, stream).
//
// The generator is xoshiro256** whose 256-bit state is filled by SplitMix64
// from a mix of the seed and the stream id. Every distribution below is
// implemented here (not via <random> distributions, whose algorithms differ
// between standard libraries), so a given (seed, stream) yields the same
// draws on every platform.
//
// Monte Carlo replica r of an experiment draws from `base.replica(r)`;
// independent phases of one experiment use `base.substream(tag)`.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Child stream for replica `index`; independent of the parent's position.
  RngStream replica(std::uint64_t index) const;
  // Child stream for a named phase of an experiment.
  RngStream substream(std::uint64_t tag) const;

  std::uint64_t next_u64();
  std::uint64_t operator()() { return next_u64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound); bound > 0. Unbiased (Lemire's method).
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  // Standard normal (Marsaglia polar method, spare value cached).
  double normal();
  // Gamma(shape, 1), shape > 0 (Marsaglia-Tsang).
  double gamma(double shape);
  double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }
  // Poisson(mean), mean >= 0. Inversion for small means, PTRS otherwise.
  std::uint64_t poisson(double mean);
  // Geometric number of failures before the first success, p in (0, 1].
  std::uint64_t geometric(double p);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Stable tags for RngStream::substream.
inline constexpr std::uint64_t kNullPhase = 0x6e756c6c;   // "null"
inline constexpr std::uint64_t kAltPhase = 0x616c74;      // "alt"
inline constexpr std::uint64_t kCalibratePhase = 0x63616c;  // "cal"
inline constexpr std::uint64_t kEvaluatePhase = 0x6576616c;  // "eval"

}  // namespace netinf
