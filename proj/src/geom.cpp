#include "netinf/geom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "netinf/error.hpp"
#include "netinf/special.hpp"

namespace netinf::geom {

namespace {

void check_probability_open(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1)");
}

void check_dimension(std::size_t d) {
  if (d < 2) throw ParameterError("dimension must be >= 2");
}

double draw_entry(EntryDist e, RngStream& rng) {
  switch (e) {
    case EntryDist::kGaussian:
      return rng.normal();
    case EntryDist::kUniformScaled:
      return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    case EntryDist::kRademacher:
      return (rng.next_u64() >> 63) ? 1.0 : -1.0;
  }
  return 0.0;
}

bool use_bartlett(GramMethod method, std::size_t n, std::size_t d) {
  switch (method) {
    case GramMethod::kExplicit:
      return false;
    case GramMethod::kBartlett:
      if (d < n) throw ParameterError("Bartlett sampling needs d >= n");
      return true;
    case GramMethod::kAuto:
      return d > n;
  }
  return false;
}

// W ~ Wishart_n(d, I) as L L^T: L lower triangular, L_ii^2 ~ chi^2_{d-i},
// L_ij ~ N(0, 1) below the diagonal.
Eigen::MatrixXd bartlett_gram(std::size_t n, std::size_t d, RngStream& rng) {
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    lower(i, i) = std::sqrt(rng.chi_squared(static_cast<double>(d) - static_cast<double>(i)));
    for (Eigen::Index j = 0; j < i; ++j) lower(i, j) = rng.normal();
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(size, size);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(lower);
  return gram.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd explicit_gram(std::size_t n, std::size_t d, EntryDist entries, RngStream& rng) {
  const auto rows = static_cast<Eigen::Index>(n), cols = static_cast<Eigen::Index>(d);
  RowMatrix x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = draw_entry(entries, rng);
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(rows, rows);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
  return gram.selfadjointView<Eigen::Lower>();
}

}  // namespace

std::string_view to_string(EntryDist e) {
  switch (e) {
    case EntryDist::kGaussian:
      return "gaussian";
    case EntryDist::kUniformScaled:
      return "uniform-scaled";
    case EntryDist::kRademacher:
      return "rademacher";
  }
  return "";
}

std::string_view to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::kWishart:
      return "wishart";
    case MatrixKind::kGoeShifted:
      return "goe_shifted";
    case MatrixKind::kWishartScaledNoDiag:
      return "wishart_scaled_nodiag";
    case MatrixKind::kGoeNoDiag:
      return "goe_nodiag";
  }
  return "";
}

EntryDist parse_entry_dist(std::string_view s) {
  for (auto e : {EntryDist::kGaussian, EntryDist::kUniformScaled, EntryDist::kRademacher}) {
    if (s == to_string(e)) return e;
  }
  throw ParameterError("unknown entry distribution: " + std::string(s));
}

MatrixKind parse_matrix_kind(std::string_view s) {
  for (auto k : {MatrixKind::kWishart, MatrixKind::kGoeShifted, MatrixKind::kWishartScaledNoDiag,
                 MatrixKind::kGoeNoDiag}) {
    if (s == to_string(k)) return k;
  }
  throw ParameterError("unknown matrix kind: " + std::string(s));
}

SpherePoints sample_sphere(std::size_t n, std::size_t d, RngStream& rng) {
  check_dimension(d);
  SpherePoints points{n, d, RowMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d))};
  for (Eigen::Index i = 0; i < points.coords.rows(); ++i) {
    auto row = points.coords.row(i);
    double norm = 0.0;
    do {
      for (Eigen::Index j = 0; j < row.size(); ++j) row(j) = rng.normal();
      norm = row.norm();
    } while (norm == 0.0);
    row /= norm;
  }
  return points;
}

double inner_product_tail(double t, std::size_t d) {
  check_dimension(d);
  if (t <= -1.0) return 1.0;
  if (t >= 1.0) return 0.0;
  // (1 + T) / 2 ~ Beta(a, a), so P(T >= t) = I_{(1 - t)/2}(a, a).
  const double a = 0.5 * (static_cast<double>(d) - 1.0);
  return special::beta_cdf(0.5 * (1.0 - t), a, a);
}

double threshold(double p, std::size_t d) {
  check_probability_open(p);
  check_dimension(d);
  double lo = -1.0, hi = 1.0;
  double best = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    best = mid;
    const double tail = inner_product_tail(mid, d);
    if (tail == p) break;
    if (tail > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

Graph geometric_graph(const SpherePoints& points, double t) {
  const std::size_t n = points.n;
  Graph g(n);
  if (n < 2) return g;
  const RowMatrix& x = points.coords;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x(static_cast<Eigen::Index>(a), 0) < x(static_cast<Eigen::Index>(b), 0);
  });
  // <x, y> >= t implies |x_0 - y_0| <= |x - y| <= sqrt(2 - 2t).
  const double reach = std::sqrt(std::max(0.0, 2.0 - 2.0 * t)) + 1e-9;
  for (std::size_t a = 0; a < n; ++a) {
    const auto u = static_cast<Eigen::Index>(order[a]);
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto v = static_cast<Eigen::Index>(order[b]);
      if (x(v, 0) - x(u, 0) > reach) break;
      if (x.row(u).dot(x.row(v)) >= t) g.add_edge(order[a], order[b]);
    }
  }
  return g;
}

Graph sample_rgg(std::size_t n, double p, std::size_t d, RngStream& rng, GramMethod method) {
  check_probability_open(p);
  check_dimension(d);
  const double t = threshold(p, d);
  if (!use_bartlett(method, n, d)) return geometric_graph(sample_sphere(n, d, rng), t);

  // Normalized Gaussian vectors are uniform on the sphere, so only the Gram
  // matrix of the Gaussian vectors is needed.
  const Eigen::MatrixXd gram = bartlett_gram(n, d, rng);
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (gram(ii, jj) >= t * std::sqrt(gram(ii, ii) * gram(jj, jj))) g.add_edge(i, j);
    }
  }
  return g;
}

Graph sample_er(std::size_t n, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  if (p == 1.0) return Graph::complete(n);
  Graph g(n);
  if (p == 0.0 || n < 2) return g;
  // Skip over absent pairs (v, w), w < v, in row order with geometric gaps.
  std::uint64_t v = 1;
  std::uint64_t w = 0;
  bool first = true;
  while (v < n) {
    const std::uint64_t skip = rng.geometric(p);
    w += skip + (first ? 0 : 1);
    first = false;
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) g.add_edge(w, v);
  }
  return g;
}

std::uint64_t triangle_count(const Graph& g) {
  std::uint64_t wedges_closed = 0;
  for (const auto& [u, v] : g.edges()) {
    const auto ru = g.row(u), rv = g.row(v);
    for (std::size_t w = 0; w < ru.size(); ++w) {
      wedges_closed += static_cast<std::uint64_t>(std::popcount(ru[w] & rv[w]));
    }
  }
  return wedges_closed / 3;
}

double signed_triangle_stat(const Graph& g, double p) {
  check_probability_open(p);
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b(i, j) = i == j ? 0.0
                       : (g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j)) ? 1.0 : 0.0) -
                             p;
    }
  }
  const Eigen::MatrixXd b2 = b * b;
  return b2.cwiseProduct(b).sum() / 6.0;
}

TriangleMoments triangle_moments_er(std::size_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0, 1]");
  const double nd = static_cast<double>(n);
  const double c3 = n < 3 ? 0.0 : nd * (nd - 1) * (nd - 2) / 6.0;
  const double c4 = n < 4 ? 0.0 : c3 * (nd - 3) / 4.0;
  const double p3 = p * p * p, p5 = p3 * p * p, p6 = p3 * p3;
  // Each 4-set holds 12 ordered pairs of triangles sharing an edge.
  return {c3 * p3, c3 * (p3 - p6) + c4 * 12.0 * (p5 - p6)};
}

GaussianMatrix sample_wishart(std::size_t n, std::size_t d, EntryDist entries, MatrixKind kind,
                              RngStream& rng, GramMethod method) {
  if (n == 0 || d == 0) throw ParameterError("n and d must be positive");
  GaussianMatrix out{kind, entries, d, {}};
  const auto size = static_cast<Eigen::Index>(n);
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  if (kind == MatrixKind::kGoeShifted || kind == MatrixKind::kGoeNoDiag) {
    if (entries != EntryDist::kGaussian) {
      throw ParameterError("GOE ensembles need gaussian entries");
    }
    out.values = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      if (kind == MatrixKind::kGoeShifted) out.values(i, i) = std::sqrt(2.0) * rng.normal();
      for (Eigen::Index j = i + 1; j < size; ++j) {
        out.values(i, j) = out.values(j, i) = rng.normal();
      }
    }
    if (kind == MatrixKind::kGoeShifted) {
      out.values *= sqrt_d;
      out.values.diagonal().array() += static_cast<double>(d);
    }
    return out;
  }

  if (method == GramMethod::kBartlett && entries != EntryDist::kGaussian) {
    throw ParameterError("Bartlett sampling needs gaussian entries");
  }
  const bool bartlett = entries == EntryDist::kGaussian && use_bartlett(method, n, d);
  out.values = bartlett ? bartlett_gram(n, d, rng) : explicit_gram(n, d, entries, rng);
  if (kind == MatrixKind::kWishartScaledNoDiag) {
    out.values.diagonal().setZero();
    out.values /= sqrt_d;
  }
  return out;
}

Graph h_map(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols()) throw ParameterError("h_map needs a square matrix");
  const auto n = static_cast<std::size_t>(w.rows());
  Graph g(n);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
      if (w(i, j) >= 0.0) g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  return g;
}

Graph h_map(const GaussianMatrix& w) { return h_map(w.values); }

double tr_cubed(const GaussianMatrix& w) {
  const Eigen::MatrixXd sq = w.values * w.values;
  return sq.cwiseProduct(w.values.transpose()).sum();
}

Detection detect_geometry(const Graph& g, double p, double tau_threshold) {
  const double tau = signed_triangle_stat(g, p);
  return {tau >= tau_threshold, tau};
}

Calibration calibrate_tau(std::size_t n, double p, std::size_t d, std::size_t replicas,
                          const RngStream& rng, std::size_t jobs) {
  if (replicas < 100) throw ParameterError("calibration needs at least 100 replicas");
  check_probability_open(p);
  check_dimension(d);
  const auto er = harness::collect(
      [&](RngStream& r) { return signed_triangle_stat(sample_er(n, p, r), p); }, replicas,
      rng.substream(kNullPhase), "er", jobs);
  const auto geo = harness::collect(
      [&](RngStream& r) { return signed_triangle_stat(sample_rgg(n, p, d, r), p); }, replicas,
      rng.substream(kAltPhase), "rgg", jobs);
  Calibration cal{n, p, d, replicas, harness::mean_var(er), harness::mean_var(geo), 0.0};
  cal.tau_threshold = harness::weighted_midpoint(cal.er.mean, std::sqrt(cal.er.variance),
                                                 cal.geo.mean, std::sqrt(cal.geo.variance));
  return cal;
}

std::size_t estimate_dimension(const Graph& g, double p, std::span<const std::size_t> candidates,
                               const std::map<std::size_t, double>& mean_geo_by_d) {
  if (candidates.empty()) throw ParameterError("no candidate dimensions");
  std::vector<std::size_t> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  const double tau = signed_triangle_stat(g, p);
  std::size_t best = sorted.front();
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t d : sorted) {
    const auto it = mean_geo_by_d.find(d);
    if (it == mean_geo_by_d.end()) {
      throw ParameterError("calibration table has no entry for d = " + std::to_string(d));
    }
    const double gap = std::fabs(tau - it->second);
    if (gap < best_gap) {
      best_gap = gap;
      best = d;
    }
  }
  return best;
}

SparseReport sparse_triangle_experiment(std::size_t n, double c, std::size_t d,
                                        std::size_t replicas, const RngStream& rng,
                                        std::size_t jobs) {
  if (n == 0 || !(c > 0.0) || c > static_cast<double>(n)) {
    throw ParameterError("need 0 < c <= n");
  }
  check_dimension(d);
  const double p = c / static_cast<double>(n);
  SparseReport report;
  report.p = p;
  report.test = harness::power_test(
      [&](RngStream& r) { return static_cast<double>(triangle_count(sample_er(n, p, r))); },
      [&](RngStream& r) {
        return static_cast<double>(triangle_count(sample_rgg(n, p, d, r, GramMethod::kExplicit)));
      },
      replicas, rng, jobs);
  return report;
}

}  // namespace netinf::geom
