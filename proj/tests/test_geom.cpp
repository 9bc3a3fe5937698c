#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "netinf/error.hpp"
#include "netinf/geom.hpp"
#include "netinf/harness.hpp"
#include "netinf/special.hpp"

using namespace netinf;
using namespace netinf::geom;

namespace {

std::uint64_t cubic_triangle_count(const Graph& g) {
  std::uint64_t count = 0;
  const std::size_t n = g.size();
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (!g.has_edge(i, j)) continue;
      for (Vertex k = j + 1; k < n; ++k) count += g.has_edge(i, k) && g.has_edge(j, k);
    }
  }
  return count;
}

// tau from induced 3-vertex subgraph counts: a triple with e edges
// contributes (1-p)^e (-p)^(3-e).
double tau_from_counts(const Graph& g, double p) {
  const double n = static_cast<double>(g.size());
  const double t = static_cast<double>(cubic_triangle_count(g));
  double cherries = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    const double d = static_cast<double>(degree(g, v));
    cherries += d * (d - 1) / 2;
  }
  const double m = static_cast<double>(g.edge_count());
  const double e3 = t;
  const double e2 = cherries - 3 * t;
  const double e1 = m * (n - 2) - 2 * e2 - 3 * t;
  const double e0 = n * (n - 1) * (n - 2) / 6 - e1 - e2 - e3;
  const double q = 1 - p;
  return e3 * q * q * q - e2 * q * q * p + e1 * q * p * p - e0 * p * p * p;
}

// P(<X, Y> >= t) by midpoint integration of (1 - s^2)^((d-3)/2).
double tail_by_integration(double t, std::size_t d) {
  const double e = 0.5 * (static_cast<double>(d) - 3.0);
  auto f = [e](double s) { return std::pow(1 - s * s, e); };
  const int steps = 400000;
  auto integrate = [&](double lo, double hi) {
    double acc = 0.0;
    const double h = (hi - lo) / steps;
    for (int i = 0; i < steps; ++i) acc += f(lo + (i + 0.5) * h);
    return acc * h;
  };
  return integrate(t, 1.0) / integrate(-1.0, 1.0);
}

}  // namespace

TEST_CASE("sphere points have unit norm") {
  RngStream rng(41, 0);
  const auto pts = sample_sphere(50, 7, rng);
  for (Eigen::Index i = 0; i < pts.coords.rows(); ++i) {
    CHECK(std::fabs(pts.coords.row(i).norm() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(sample_sphere(3, 1, rng), ParameterError);
}

TEST_CASE("first coordinate on S^2 is uniform") {
  RngStream rng(42, 0);
  const auto pts = sample_sphere(100000, 3, rng);
  std::vector<double> x(100000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = pts.coords(static_cast<Eigen::Index>(i), 0);
  const double d = harness::ks_distance_to_cdf(x, [](double t) { return (t + 1) / 2; });
  CHECK(d < 0.01);
}

TEST_CASE("inner products at d = 100 have mean 0 and variance 1/d") {
  RngStream rng(43, 0);
  std::vector<double> dots(10000);
  for (auto& v : dots) {
    const auto pts = sample_sphere(2, 100, rng);
    v = pts.coords.row(0).dot(pts.coords.row(1));
  }
  const auto m = harness::mean_var(dots);
  CHECK(std::fabs(m.mean) < 3 * m.standard_error);
  CHECK(m.variance == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("threshold examples") {
  for (std::size_t d : {2u, 3u, 10u, 1000u, 40960u}) CHECK(threshold(0.5, d) == 0.0);
  CHECK(threshold(0.25, 3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(threshold(0.3, 2) == doctest::Approx(std::cos(0.3 * M_PI)).epsilon(1e-12));
  double previous = 2.0;
  for (double p : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const double t = threshold(p, 12);
    CHECK(t < previous);
    previous = t;
  }
  CHECK_THROWS_AS(threshold(0.0, 5), ParameterError);
  CHECK_THROWS_AS(threshold(1.0, 5), ParameterError);
}

TEST_CASE("threshold solves its defining equation") {
  for (std::size_t d : {4u, 5u, 10u, 50u}) {
    for (double p : {0.05, 0.3, 0.8}) {
      const double t = threshold(p, d);
      CHECK(std::fabs(inner_product_tail(t, d) - p) <= 1e-10);
      CHECK(tail_by_integration(t, d) == doctest::Approx(p).epsilon(1e-7));
    }
  }
}

TEST_CASE("rgg edge density matches p") {
  const RngStream base(44, 0);
  std::vector<double> density(200);
  for (std::size_t r = 0; r < density.size(); ++r) {
    auto local = base.replica(r);
    density[r] = static_cast<double>(sample_rgg(100, 0.3, 10, local).edge_count()) / 4950.0;
  }
  const auto m = harness::mean_var(density);
  CHECK(std::fabs(m.mean - 0.3) < 3 * m.standard_error);

  RngStream rng(45, 0);
  const Graph dense = sample_rgg(30, 0.999999, 5, rng);
  CHECK(dense.edge_count() >= 430);
}

TEST_CASE("rgg is reproducible bit for bit") {
  RngStream a(46, 3), b(46, 3);
  CHECK(sample_rgg(4, 0.5, 2, a) == sample_rgg(4, 0.5, 2, b));
}

TEST_CASE("sweep pruning keeps every edge") {
  RngStream rng(47, 0);
  for (double p : {0.01, 0.2, 0.6}) {
    const auto pts = sample_sphere(300, 3, rng);
    const double t = threshold(p, 3);
    const Graph g = geometric_graph(pts, t);
    std::size_t brute = 0;
    for (Eigen::Index i = 0; i < 300; ++i) {
      for (Eigen::Index j = i + 1; j < 300; ++j) {
        const bool edge = pts.coords.row(i).dot(pts.coords.row(j)) >= t;
        brute += edge;
        CHECK(g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j)) == edge);
      }
    }
    CHECK(g.edge_count() == brute);
  }
}

TEST_CASE("Bartlett and explicit routes agree in law") {
  const RngStream base(48, 0);
  const std::size_t reps = 2000;
  std::vector<double> tri_explicit(reps), tri_bartlett(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    auto a = base.substream(1).replica(r);
    auto b = base.substream(2).replica(r);
    tri_explicit[r] = static_cast<double>(
        triangle_count(sample_rgg(20, 0.5, 30, a, GramMethod::kExplicit)));
    tri_bartlett[r] = static_cast<double>(
        triangle_count(sample_rgg(20, 0.5, 30, b, GramMethod::kBartlett)));
  }
  // Two-sample KS at 2000 vs 2000: 0.06 is beyond the 0.999 quantile.
  CHECK(harness::ks_distance(tri_explicit, tri_bartlett) < 0.06);

  RngStream rng(49, 0);
  CHECK_THROWS_AS(sample_rgg(10, 0.5, 5, rng, GramMethod::kBartlett), ParameterError);
}

TEST_CASE("erdos renyi") {
  RngStream rng(50, 0);
  CHECK(sample_er(12, 1.0, rng) == Graph::complete(12));
  CHECK(sample_er(12, 0.0, rng).edge_count() == 0);
  CHECK(sample_er(1, 0.5, rng).edge_count() == 0);
  const std::size_t reps = 2000;
  std::vector<double> edges(reps);
  for (auto& e : edges) e = static_cast<double>(sample_er(40, 0.2, rng).edge_count());
  const auto m = harness::mean_var(edges);
  CHECK(std::fabs(m.mean - 0.2 * 780) < 3 * m.standard_error);
  CHECK(m.variance == doctest::Approx(780 * 0.2 * 0.8).epsilon(0.1));
  CHECK_THROWS_AS(sample_er(5, 1.5, rng), ParameterError);
}

TEST_CASE("every pair appears in G(n, p) with probability p") {
  RngStream rng(51, 0);
  const std::size_t n = 9, reps = 40000;
  std::vector<double> hits(n * n, 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    const Graph g = sample_er(n, 0.1, rng);
    for (const auto& [u, v] : g.edges()) hits[u * n + v] += 1;
  }
  const double se = std::sqrt(0.1 * 0.9 / reps);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) CHECK(std::fabs(hits[u * n + v] / reps - 0.1) < 4.5 * se);
  }
}

TEST_CASE("triangle counts") {
  CHECK(triangle_count(Graph::complete(4)) == 4);
  CHECK(triangle_count(Tree::star(9).to_graph()) == 0);
  RngStream rng(52, 0);
  for (int r = 0; r < 100; ++r) {
    const Graph g = sample_er(5 + rng.below(70), rng.uniform(), rng);
    const auto bit = triangle_count(g);
    CHECK(bit == cubic_triangle_count(g));
    // Tr(A^3) / 6 through a dense product.
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : g.edges()) {
      a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = 1;
      a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = 1;
    }
    CHECK((a * a * a).trace() / 6 == doctest::Approx(static_cast<double>(bit)));
  }
}

TEST_CASE("mean triangle count in G(30, 1/2)") {
  RngStream rng(53, 0);
  std::vector<double> t(10000);
  for (auto& v : t) v = static_cast<double>(triangle_count(sample_er(30, 0.5, rng)));
  const auto m = harness::mean_var(t);
  CHECK(std::fabs(m.mean - 507.5) < 3 * m.standard_error);
}

TEST_CASE("signed triangle statistic") {
  CHECK(signed_triangle_stat(Graph::complete(3), 0.5) == doctest::Approx(0.125));
  CHECK(signed_triangle_stat(Graph(3), 0.5) == doctest::Approx(-0.125));
  RngStream rng(54, 0);
  for (int r = 0; r < 30; ++r) {
    const double p = 0.1 + 0.8 * rng.uniform();
    const Graph g = sample_er(4 + rng.below(30), rng.uniform(), rng);
    CHECK(signed_triangle_stat(g, p) ==
          doctest::Approx(tau_from_counts(g, p)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("signed triangle statistic is label invariant") {
  RngStream rng(55, 0);
  const Graph g = sample_rgg(25, 0.4, 3, rng);
  const double tau = signed_triangle_stat(g, 0.4);
  std::vector<Vertex> perm(25);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  for (int r = 0; r < 20; ++r) {
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    CHECK(signed_triangle_stat(g.permuted(perm), 0.4) == doctest::Approx(tau).epsilon(1e-12));
  }
}

TEST_CASE("signed triangle moments under G(30, 1/2)") {
  RngStream rng(56, 0);
  std::vector<double> tau(10000);
  for (auto& v : tau) v = signed_triangle_stat(sample_er(30, 0.5, rng), 0.5);
  const auto m = harness::mean_var(tau);
  CHECK(std::fabs(m.mean) < 3 * m.standard_error);
  CHECK(m.variance == doctest::Approx(4060.0 / 64.0).epsilon(0.05));
}

TEST_CASE("triangle moment closed form") {
  const auto one = triangle_moments_er(10, 1.0);
  CHECK(one.mean == doctest::Approx(120.0));
  CHECK(one.variance == 0.0);
  const auto zero = triangle_moments_er(10, 0.0);
  CHECK(zero.mean == 0.0);
  CHECK(zero.variance == 0.0);
  // Small n by enumeration of all graphs on 4 vertices.
  const double p = 0.3;
  double mean = 0.0, second = 0.0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    Graph g(4);
    int bit = 0, m = 0;
    for (Vertex u = 0; u < 4; ++u) {
      for (Vertex v = u + 1; v < 4; ++v, ++bit) {
        if (mask >> bit & 1) {
          g.add_edge(u, v);
          ++m;
        }
      }
    }
    const double prob = std::pow(p, m) * std::pow(1 - p, 6 - m);
    const double t = static_cast<double>(triangle_count(g));
    mean += prob * t;
    second += prob * t * t;
  }
  const auto f = triangle_moments_er(4, p);
  CHECK(f.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(f.variance == doctest::Approx(second - mean * mean).epsilon(1e-12));
}

TEST_CASE("wishart ensembles") {
  RngStream rng(57, 0);
  for (int r = 0; r < 100; ++r) {
    const auto w = sample_wishart(10, 20, EntryDist::kGaussian, MatrixKind::kWishart, rng);
    CHECK((w.values - w.values.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w.values);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
  }
  for (auto e : {EntryDist::kUniformScaled, EntryDist::kRademacher}) {
    const auto w = sample_wishart(6, 10, e, MatrixKind::kWishartScaledNoDiag, rng);
    CHECK(w.values.diagonal().norm() == 0.0);
  }
  CHECK_THROWS_AS(sample_wishart(4, 4, EntryDist::kRademacher, MatrixKind::kGoeNoDiag, rng),
                  ParameterError);
  const auto goe = sample_wishart(8, 4, EntryDist::kGaussian, MatrixKind::kGoeNoDiag, rng);
  CHECK(goe.values.diagonal().norm() == 0.0);
  CHECK((goe.values - goe.values.transpose()).norm() == 0.0);
}

TEST_CASE("scaled Wishart entries have unit variance") {
  RngStream rng(58, 0);
  for (auto e : {EntryDist::kGaussian, EntryDist::kUniformScaled, EntryDist::kRademacher}) {
    std::vector<double> entries;
    for (int r = 0; r < 300; ++r) {
      const auto w = sample_wishart(6, 10000, e, MatrixKind::kWishartScaledNoDiag, rng,
                                    GramMethod::kExplicit);
      for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = i + 1; j < 6; ++j) entries.push_back(w.values(i, j));
      }
    }
    const auto m = harness::mean_var(entries);
    CHECK(std::fabs(m.mean) < 4 * m.standard_error);
    CHECK(m.variance == doctest::Approx(1.0).epsilon(0.06));
  }
}

TEST_CASE("shifted GOE diagonal has mean d") {
  RngStream rng(59, 0);
  std::vector<double> diag;
  for (int r = 0; r < 500; ++r) {
    const auto w = sample_wishart(10, 50, EntryDist::kGaussian, MatrixKind::kGoeShifted, rng);
    for (Eigen::Index i = 0; i < 10; ++i) diag.push_back(w.values(i, i));
  }
  const auto m = harness::mean_var(diag);
  CHECK(std::fabs(m.mean - 50.0) < 3 * m.standard_error);
  CHECK(m.variance == doctest::Approx(100.0).epsilon(0.1));
}

TEST_CASE("h map") {
  Eigen::MatrixXd pos = Eigen::MatrixXd::Constant(5, 5, 0.3);
  CHECK(h_map(pos) == Graph::complete(5));
  RngStream rng(60, 0);
  const auto w = sample_wishart(12, 30, EntryDist::kGaussian, MatrixKind::kWishart, rng);
  Eigen::MatrixXd scaled = 3.7 * w.values;
  CHECK(h_map(scaled) == h_map(w));

  std::vector<double> density(500);
  for (auto& v : density) {
    const auto x = sample_wishart(20, 15, EntryDist::kGaussian, MatrixKind::kWishart, rng);
    v = static_cast<double>(h_map(x).edge_count()) / 190.0;
  }
  const auto m = harness::mean_var(density);
  CHECK(std::fabs(m.mean - 0.5) < 3 * m.standard_error);
}

TEST_CASE("trace of the cube") {
  GaussianMatrix zero{MatrixKind::kGoeNoDiag, EntryDist::kGaussian, 1, Eigen::MatrixXd::Zero(4, 4)};
  CHECK(tr_cubed(zero) == 0.0);
  RngStream rng(61, 0);
  const auto w = sample_wishart(7, 9, EntryDist::kGaussian, MatrixKind::kWishart, rng);
  CHECK(tr_cubed(w) == doctest::Approx((w.values * w.values * w.values).trace()));

  std::vector<double> goe(3000);
  for (auto& v : goe) {
    v = tr_cubed(sample_wishart(16, 1, EntryDist::kGaussian, MatrixKind::kGoeNoDiag, rng));
  }
  const auto m = harness::mean_var(goe);
  CHECK(std::fabs(m.mean) < 3 * m.standard_error);

  // E Tr(W^3) = n(n-1)(n-2)/sqrt(d) for the scaled, diagonal-free Wishart.
  std::vector<double> wis(3000);
  for (auto& v : wis) {
    v = tr_cubed(sample_wishart(16, 400, EntryDist::kGaussian, MatrixKind::kWishartScaledNoDiag,
                                rng));
  }
  const auto mw = harness::mean_var(wis);
  CHECK(std::fabs(mw.mean - 16.0 * 15 * 14 / 20.0) < 3 * mw.standard_error);
}

TEST_CASE("detection verdict follows the threshold") {
  const Graph tri = Graph::complete(3);
  CHECK(detect_geometry(tri, 0.5, 0.1).geometric);
  CHECK_FALSE(detect_geometry(tri, 0.5, 0.2).geometric);
  CHECK(detect_geometry(tri, 0.5, 0.1).statistic == doctest::Approx(0.125));
}

TEST_CASE("calibration moments") {
  const auto cal = calibrate_tau(50, 0.5, 100, 400, RngStream(62, 0));
  CHECK(std::fabs(cal.er.mean) < 3 * cal.er.standard_error);
  // Variance of tau under G(n, 1/2, d) is at most n^3 + 3 n^4 / d, up to
  // Monte Carlo error on the sample variance.
  const double bound = 125000.0 + 3.0 * 6250000.0 / 100.0;
  CHECK(cal.geo.variance <= bound * (1 + 4 * std::sqrt(2.0 / 400)));
  CHECK(cal.tau_threshold > cal.er.mean);
  CHECK(cal.tau_threshold < cal.geo.mean);
  CHECK_THROWS_AS(calibrate_tau(10, 0.5, 5, 50, RngStream(1, 1)), ParameterError);
}

TEST_CASE("mean tau scales like d^{-1/2}") {
  std::vector<double> log_d, log_mean, collapse;
  for (std::size_t d : {100u, 1000u, 10000u}) {
    const auto cal = calibrate_tau(50, 0.5, d, 400, RngStream(63, d));
    log_d.push_back(std::log(static_cast<double>(d)));
    log_mean.push_back(std::log(cal.geo.mean));
    collapse.push_back(cal.geo.mean * std::sqrt(static_cast<double>(d)) / 125000.0);
  }
  CHECK(std::fabs(harness::least_squares_slope(log_d, log_mean) + 0.5) < 0.1);
  const auto [lo, hi] = std::minmax_element(collapse.begin(), collapse.end());
  CHECK(*hi / *lo < 1.3);
}

TEST_CASE("detection power at n = 64, d = 2") {
  const auto cal = calibrate_tau(64, 0.5, 2, 1000, RngStream(64, 0));
  const RngStream eval(64, 1);
  std::size_t power = 0, size = 0;
  for (std::size_t r = 0; r < 1000; ++r) {
    auto a = eval.substream(kAltPhase).replica(r);
    auto b = eval.substream(kNullPhase).replica(r);
    power += detect_geometry(sample_rgg(64, 0.5, 2, a), 0.5, cal.tau_threshold).geometric;
    size += detect_geometry(sample_er(64, 0.5, b), 0.5, cal.tau_threshold).geometric;
  }
  CHECK(power >= 950);
  CHECK(size <= 50);
}

TEST_CASE("dimension estimation") {
  SUBCASE("well separated") {
    const std::size_t cand[] = {2, 2048};
    std::map<std::size_t, double> table;
    for (auto d : cand) table[d] = calibrate_tau(64, 0.5, d, 200, RngStream(65, d)).geo.mean;
    const RngStream eval(66, 0);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < 200; ++r) {
      auto local = eval.replica(r);
      correct += estimate_dimension(sample_rgg(64, 0.5, 2, local), 0.5, cand, table) == 2;
    }
    CHECK(correct >= 190);
  }
  SUBCASE("adjacent dimensions at d << n") {
    const std::size_t cand[] = {8, 9};
    std::map<std::size_t, double> table;
    for (auto d : cand) table[d] = calibrate_tau(256, 0.5, d, 200, RngStream(67, d)).geo.mean;
    const RngStream eval(68, 0);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < 200; ++r) {
      auto local = eval.replica(r);
      const std::size_t truth = cand[r % 2];
      correct += estimate_dimension(sample_rgg(256, 0.5, truth, local), 0.5, cand, table) == truth;
    }
    CHECK(correct >= 180);
  }
  SUBCASE("adjacent dimensions at d >> n are a coin flip") {
    const std::size_t cand[] = {100000, 100001};
    std::map<std::size_t, double> table;
    for (auto d : cand) table[d] = calibrate_tau(16, 0.5, d, 400, RngStream(69, d)).geo.mean;
    const RngStream eval(70, 0);
    std::size_t correct = 0;
    const std::size_t reps = 400;
    for (std::size_t r = 0; r < reps; ++r) {
      auto local = eval.replica(r);
      const std::size_t truth = cand[r % 2];
      correct += estimate_dimension(sample_rgg(16, 0.5, truth, local), 0.5, cand, table) == truth;
    }
    CHECK(std::fabs(static_cast<double>(correct) / reps - 0.5) < 0.1);
  }
  SUBCASE("ties and errors") {
    const std::size_t cand[] = {9, 3};
    std::map<std::size_t, double> table{{3, 1.0}, {9, 1.0}};
    CHECK(estimate_dimension(Graph(3), 0.5, cand, table) == 3);
    CHECK_THROWS_AS(estimate_dimension(Graph(3), 0.5, std::span<const std::size_t>{}, table),
                    ParameterError);
    const std::size_t missing[] = {4};
    CHECK_THROWS_AS(estimate_dimension(Graph(3), 0.5, missing, table), ParameterError);
  }
}

TEST_CASE("sparse regime triangle test") {
  SUBCASE("ER triangle mean near c^3 / 6 at n = 1000") {
    RngStream rng(71, 0);
    std::vector<double> t(2000);
    for (auto& v : t) v = static_cast<double>(triangle_count(sample_er(1000, 0.005, rng)));
    const auto m = harness::mean_var(t);
    // Exact mean C(1000, 3) p^3 = 20.77; the Poisson limit is 20.83.
    CHECK(std::fabs(m.mean - 125.0 / 6.0) < 3 * m.standard_error + 0.1);
  }
  SUBCASE("low dimension is detected at n = 10^4") {
    const auto rep = sparse_triangle_experiment(10000, 5.0, 2, 500, RngStream(72, 0));
    CHECK(rep.test.power >= 0.9);
    CHECK(rep.test.null_moments.mean == doctest::Approx(125.0 / 6.0).epsilon(0.1));
  }
}
