#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netinf/graph.hpp"
#include "netinf/harness.hpp"
#include "netinf/rng.hpp"

// Random geometric graphs on the unit sphere, triangle statistics and the
// Wishart / GOE ensembles they reduce to.
namespace netinf::geom {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SpherePoints {
  std::size_t n = 0;
  std::size_t d = 0;
  RowMatrix coords;  // n x d, unit rows
};

enum class EntryDist {
  kGaussian,
  kUniformScaled,  // uniform on [-sqrt 3, sqrt 3]
  kRademacher,     // +-1; atomic, so outside the log-concave universality class
};

enum class MatrixKind {
  kWishart,              // X X^T
  kGoeShifted,           // sqrt(d) M + d I, M with N(0,2) diagonal and N(0,1) off it
  kWishartScaledNoDiag,  // (X X^T - diag(X X^T)) / sqrt(d)
  kGoeNoDiag,            // zero diagonal, N(0,1) above it
};

// How a Gaussian Gram matrix is produced. Explicit multiplies an n x d matrix
// by its transpose. Bartlett draws the Cholesky factor of the Wishart law
// directly (requires d >= n) in O(n^2) draws. Auto picks Bartlett when d > n.
enum class GramMethod { kAuto, kExplicit, kBartlett };

struct GaussianMatrix {
  MatrixKind kind = MatrixKind::kWishart;
  EntryDist entries = EntryDist::kGaussian;
  std::size_t d = 0;
  Eigen::MatrixXd values;
};

std::string_view to_string(EntryDist e);
std::string_view to_string(MatrixKind k);
EntryDist parse_entry_dist(std::string_view s);
MatrixKind parse_matrix_kind(std::string_view s);

SpherePoints sample_sphere(std::size_t n, std::size_t d, RngStream& rng);

// t with P(<X1, X2> >= t) = p for independent uniform X1, X2 on S^{d-1}.
double threshold(double p, std::size_t d);

// P(<X1, X2> >= t).
double inner_product_tail(double t, std::size_t d);

Graph sample_rgg(std::size_t n, double p, std::size_t d, RngStream& rng,
                 GramMethod method = GramMethod::kAuto);

// Geometric graph on given points: edge iff <x_i, x_j> >= t.
Graph geometric_graph(const SpherePoints& points, double t);

Graph sample_er(std::size_t n, double p, RngStream& rng);

std::uint64_t triangle_count(const Graph& g);

// sum over triples i<j<k of (A_ij - p)(A_ik - p)(A_jk - p).
double signed_triangle_stat(const Graph& g, double p);

struct TriangleMoments {
  double mean = 0.0;
  double variance = 0.0;
};

TriangleMoments triangle_moments_er(std::size_t n, double p);

// GOE kinds require Gaussian entries. Bartlett is only used for Gaussian
// Wishart kinds.
GaussianMatrix sample_wishart(std::size_t n, std::size_t d, EntryDist entries, MatrixKind kind,
                              RngStream& rng, GramMethod method = GramMethod::kAuto);

// Edge {i, j} iff W_ij >= 0, i != j.
Graph h_map(const GaussianMatrix& w);
Graph h_map(const Eigen::MatrixXd& w);

double tr_cubed(const GaussianMatrix& w);

struct Detection {
  bool geometric = false;
  double statistic = 0.0;
};

Detection detect_geometry(const Graph& g, double p, double tau_threshold);

struct Calibration {
  std::size_t n = 0;
  double p = 0.0;
  std::size_t d = 0;
  std::size_t replicas = 0;
  harness::Moments er;
  harness::Moments geo;
  double tau_threshold = 0.0;
};

// Monte Carlo moments of tau under G(n, p) (substream kNullPhase) and
// G(n, p, d) (substream kAltPhase). Requires replicas >= 100.
Calibration calibrate_tau(std::size_t n, double p, std::size_t d, std::size_t replicas,
                          const RngStream& rng, std::size_t jobs = 1);

// Candidate whose calibrated mean tau is nearest tau(g); ties go to the
// smaller dimension. Throws if candidates is empty or missing from the table.
std::size_t estimate_dimension(const Graph& g, double p, std::span<const std::size_t> candidates,
                               const std::map<std::size_t, double>& mean_geo_by_d);

struct SparseReport {
  double p = 0.0;
  harness::PowerReport test;  // triangle count, null = G(n, c/n)
};

SparseReport sparse_triangle_experiment(std::size_t n, double c, std::size_t d,
                                        std::size_t replicas, const RngStream& rng,
                                        std::size_t jobs = 1);

}  // namespace netinf::geom
