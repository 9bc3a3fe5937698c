#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "netinf/error.hpp"
#include "netinf/harness.hpp"
#include "netinf/special.hpp"
#include "netinf/urns.hpp"

using namespace netinf;
using namespace netinf::urns;

namespace {

// Exact law of the blue count after `steps` draws, by enumerating every
// color sequence.
std::vector<double> enumerate_blue_law(const UrnState& initial, std::size_t steps) {
  std::vector<double> law(steps + 1, 0.0);
  std::vector<std::size_t> seq;
  std::function<void(std::size_t)> walk = [&](std::size_t depth) {
    if (depth == steps) {
      std::size_t blue = 0;
      for (auto c : seq) blue += c == 0;
      law[blue] += sequence_probability(initial, seq);
      return;
    }
    for (std::size_t c = 0; c < 2; ++c) {
      seq.push_back(c);
      walk(depth + 1);
      seq.pop_back();
    }
  };
  walk(0);
  return law;
}

double chi_squared_p(const std::vector<double>& observed, const std::vector<double>& expected_prob,
                     double total) {
  double stat = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_prob[i] * total;
    if (e <= 0.0) continue;
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  return special::chi_squared_sf(stat, static_cast<double>(cells - 1));
}

}  // namespace

TEST_CASE("urn state validation") {
  CHECK_NOTHROW(UrnState::diagonal({3, 2}).validate());
  UrnState zero_row{{1, 1}, {{1, 0}, {0, 0}}};
  CHECK_THROWS_AS(zero_row.validate(), ParameterError);
  UrnState empty{{0, 0}, {{1, 0}, {0, 1}}};
  CHECK_THROWS_AS(empty.validate(), ParameterError);
  UrnState ragged{{1, 1}, {{1, 0}}};
  CHECK_THROWS_AS(ragged.validate(), ParameterError);
}

TEST_CASE("first draw from (3, 2) is blue with probability 3/5") {
  const RngStream base(81, 0);
  const auto initial = UrnState::diagonal({3, 2});
  const std::size_t runs = 100000;
  std::size_t blue = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    auto local = base.replica(r);
    UrnState s = initial;
    blue += urn_step(s, local) == 0;
  }
  const double se = std::sqrt(0.6 * 0.4 / runs);
  CHECK(std::fabs(static_cast<double>(blue) / runs - 0.6) < 3 * se);
  CHECK(sequence_probability(initial, std::vector<std::size_t>{0}) == doctest::Approx(0.6));
}

TEST_CASE("trajectory snapshots") {
  RngStream rng(82, 0);
  const auto initial = UrnState::diagonal({1, 1}, 3);
  const std::uint64_t checkpoints[] = {5, 0, 10};
  const auto traj = urn_run(initial, 10, checkpoints, rng);
  REQUIRE(traj.snapshots.size() == 3);
  CHECK(traj.snapshots[0].step == 0);
  CHECK(traj.snapshots[0].total == 2);
  CHECK(traj.snapshots[1].total == 2 + 5 * 3);
  CHECK(traj.snapshots[2].total == 2 + 10 * 3);
  CHECK(traj.final_state.total() == 32);
  const std::uint64_t late[] = {11};
  CHECK_THROWS_AS(urn_run(initial, 10, late, rng), ParameterError);
}

TEST_CASE("uniform law of the blue count from (1, 1)") {
  // At total n = 10 (8 draws), X_n is uniform on {1, ..., 9}.
  const auto initial = UrnState::diagonal({1, 1});
  const auto exact = enumerate_blue_law(initial, 8);
  for (double p : exact) CHECK(p == doctest::Approx(1.0 / 9).epsilon(1e-12));

  const RngStream base(83, 0);
  const std::size_t runs = 100000;
  std::vector<double> observed(9, 0.0);
  for (std::size_t r = 0; r < runs; ++r) {
    auto local = base.replica(r);
    const auto traj = urn_run(initial, 8, std::vector<std::uint64_t>{}, local);
    observed[traj.final_state.counts[0] - 1] += 1;
  }
  CHECK(chi_squared_p(observed, exact, runs) > 0.001);
}

TEST_CASE("beta-binomial pmf") {
  CHECK(beta_binomial_pmf(1, 1, 1, 0) == doctest::Approx(0.5));
  CHECK(beta_binomial_pmf(1, 1, 1, 1) == doctest::Approx(0.5));
  double total = 0.0;
  for (std::uint64_t k = 0; k <= 50; ++k) total += beta_binomial_pmf(50, 3, 2, k);
  CHECK(std::fabs(total - 1.0) <= 1e-12);
  for (std::uint64_t k = 0; k <= 20; ++k) {
    CHECK(beta_binomial_pmf(20, 3, 7, k) ==
          doctest::Approx(beta_binomial_pmf(20, 7, 3, 20 - k)).epsilon(1e-12));
  }
  // Agrees with exhaustive sequence enumeration.
  const auto exact = enumerate_blue_law(UrnState::diagonal({3, 2}), 7);
  for (std::uint64_t k = 0; k <= 7; ++k) {
    CHECK(beta_binomial_pmf(7, 3, 2, k) == doctest::Approx(exact[k]).epsilon(1e-12));
  }
  // Large n stays finite.
  CHECK(std::isfinite(beta_binomial_pmf(5000, 3, 2, 2500)));
  CHECK_THROWS_AS(beta_binomial_pmf(3, 1, 1, 4), ParameterError);
}

TEST_CASE("exchangeability of draw sequences") {
  const auto initial = UrnState::diagonal({3, 2});
  const double expected = 3.0 / 5 * 2.0 / 6 * 4.0 / 7 * 5.0 / 8 * 3.0 / 9;
  std::size_t sequences = 0;
  for (unsigned mask = 0; mask < 32; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    std::vector<std::size_t> seq;
    for (int i = 0; i < 5; ++i) seq.push_back(mask >> i & 1 ? 0 : 1);
    CHECK(sequence_probability(initial, seq) == doctest::Approx(expected).epsilon(1e-14));
    ++sequences;
  }
  CHECK(sequences == 10);
}

TEST_CASE("total grows by k per step") {
  RngStream rng(84, 0);
  for (std::uint64_t k : {1u, 2u, 5u}) {
    UrnState s = UrnState::diagonal({2, 3, 1}, k);
    for (std::uint64_t step = 1; step <= 200; ++step) {
      urn_step(s, rng);
      CHECK(s.total() == 6 + step * k);
    }
  }
}

TEST_CASE("the blue fraction is a martingale") {
  const RngStream base(85, 0);
  const auto initial = UrnState::diagonal({3, 2});
  std::vector<double> x(4000);
  for (std::size_t r = 0; r < x.size(); ++r) {
    auto local = base.replica(r);
    const auto traj = urn_run(initial, 500, std::vector<std::uint64_t>{}, local);
    x[r] = static_cast<double>(traj.final_state.counts[0]) /
           static_cast<double>(traj.final_state.total());
  }
  const auto m = harness::mean_var(x);
  CHECK(std::fabs(m.mean - 0.6) <= 3 * m.standard_error);
}

TEST_CASE("beta-binomial against simulation") {
  const RngStream base(86, 0);
  const auto initial = UrnState::diagonal({3, 2});
  const std::size_t runs = 1000000;
  std::vector<double> observed(6, 0.0), expected(6);
  for (std::size_t r = 0; r < runs; ++r) {
    auto local = base.replica(r);
    UrnState s = initial;
    std::size_t blue = 0;
    for (int i = 0; i < 5; ++i) blue += urn_step(s, local) == 0;
    observed[blue] += 1;
  }
  for (std::uint64_t k = 0; k <= 5; ++k) expected[k] = beta_binomial_pmf(5, 3, 2, k);
  CHECK(chi_squared_p(observed, expected, runs) > 0.001);
}

TEST_CASE("limit laws") {
  SUBCASE("Beta(1, 1)") {
    const auto rep = limit_law_check(UrnState::diagonal({1, 1}), {LawKind::kBeta, {1, 1}}, 10000,
                                     1000, RngStream(87, 0));
    CHECK(rep.ks < 0.05);
  }
  SUBCASE("Dirichlet(1, 1, 1) marginals") {
    const auto rep = limit_law_check(UrnState::diagonal({1, 1, 1}),
                                     {LawKind::kDirichlet, {1, 1, 1}}, 10000, 1000,
                                     RngStream(88, 0));
    CHECK(rep.marginal_ks.size() == 3);
    CHECK(rep.ks < 0.05);
  }
  SUBCASE("two balls per step from (2, 2)") {
    const auto rep = limit_law_check(UrnState::diagonal({2, 2}, 2),
                                     {LawKind::kDirichletScaled, {2}}, 10000, 1000,
                                     RngStream(89, 0));
    CHECK(rep.alpha == std::vector<double>{1.0, 1.0});
    CHECK(rep.ks < 0.05);
  }
  SUBCASE("inconsistent laws are rejected") {
    const RngStream rng(90, 0);
    CHECK_THROWS_AS(limit_law_check(UrnState::diagonal({1, 1}), {LawKind::kBeta, {2, 1}}, 100,
                                    10, rng),
                    ParameterError);
    CHECK_THROWS_AS(limit_law_check(UrnState::diagonal({1, 1}, 2), {LawKind::kBeta, {1, 1}}, 100,
                                    10, rng),
                    ParameterError);
    CHECK_THROWS_AS(limit_law_check(UrnState::diagonal({1, 1}), {LawKind::kDirichletScaled, {3}},
                                    100, 10, rng),
                    ParameterError);
    CHECK_THROWS_AS(limit_law_check(UrnState::diagonal({1, 1, 1}), {LawKind::kBeta, {1, 1}}, 100,
                                    10, rng),
                    ParameterError);
  }
}

TEST_CASE("triangular urn") {
  const UrnState initial{{1, 1}, {{2, 0}, {1, 1}}};
  RngStream rng(91, 0);
  UrnState s = initial;
  for (int i = 0; i < 100; ++i) {
    const auto before = s.total();
    urn_step(s, rng);
    CHECK(s.total() == before + 2);
  }

  const std::uint64_t ns[] = {1000, 10000};
  const auto rep = triangular_urn_scaling(initial, ns, 1000, RngStream(92, 0));
  REQUIRE(rep.consecutive_ks.size() == 1);
  CHECK(rep.consecutive_ks[0] < 0.05);
  for (const auto& m : rep.moments) CHECK(m.mean > 10 * m.standard_error);

  const UrnState no_red{{2, 0}, {{2, 0}, {1, 1}}};
  CHECK_THROWS_AS(triangular_urn_scaling(no_red, ns, 10, RngStream(1, 0)), ParameterError);
  CHECK_THROWS_AS(triangular_urn_scaling(UrnState::diagonal({1, 1}), ns, 10, RngStream(1, 0)),
                  ParameterError);
}
