#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "netinf/graph.hpp"
#include "netinf/rng.hpp"

// Growing random trees (uniform and preferential attachment) and root finding
// with the psi statistic.
namespace netinf::trees {

enum class Model { kUA, kPA };

std::string_view to_string(Model m);
Model parse_model(std::string_view s);

// A grown tree with ids in arrival order: the seed occupies 0..seed_size-1
// and vertex i > seed_size - 1 arrived i-th. Vertex 0 is the root.
struct RecordedTree {
  Tree tree;
  std::vector<Vertex> arrival;  // chronological index -> vertex id
  Model model = Model::kUA;
  std::size_t seed_size = 1;
};

// UA attaches each new vertex to a uniform existing vertex; PA to a vertex
// chosen with probability proportional to its degree. PA needs a seed with
// at least two vertices.
RecordedTree grow(Model model, std::size_t n, const Tree& seed, RngStream& rng);

// Default seeds: a single vertex for UA, a single edge for PA.
Tree default_seed(Model model);

struct Relabeled {
  Tree tree;
  Vertex hidden_root = 0;
  std::vector<Vertex> perm;  // old id -> new id
};

Relabeled relabel_uniform(const RecordedTree& rt, RngStream& rng);

// Size of the largest component of t - v, for every v in O(n).
std::vector<std::size_t> all_psi(const Tree& t);
std::size_t psi(const Tree& t, Vertex v);

// Minimizers of psi, ascending (one or two vertices).
std::vector<Vertex> centroid(const Tree& t);

struct ConfidenceSet {
  std::vector<Vertex> vertices;  // ascending by (psi, id)
  std::size_t k = 0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
};

// The min(k, n) vertices of smallest psi, ties broken by smaller id.
ConfidenceSet root_confidence_set(const Tree& t, std::size_t k,
                                  double epsilon = std::numeric_limits<double>::quiet_NaN());

enum class KBound {
  kCentroidUa,    // ceil(2.5 ln(1/eps) / eps)
  kPaUpper,       // ceil(c ln(1/eps)^2 / eps^4); c has no known value
};

std::size_t required_k(double epsilon, KBound bound, double c = 1.0);

struct MaxDegree {
  Vertex vertex = 0;
  std::size_t degree = 0;
};

// Ties go to the smallest id.
MaxDegree max_degree(const Tree& t);
inline MaxDegree max_degree(const RecordedTree& rt) { return max_degree(rt.tree); }

struct DegreeScaling {
  std::vector<std::size_t> n_values;
  std::vector<double> mean_degree;  // of vertex 0
  double slope = 0.0;               // of log mean degree against log n
};

// Each run grows one tree from the default seed and reads the degree of
// vertex 0 when it reaches each n.
DegreeScaling fixed_vertex_degree_scaling(Model model, std::span<const std::size_t> n_values,
                                          std::size_t runs, const RngStream& rng,
                                          std::size_t jobs = 1);

enum class Scoring {
  kRootOnly,        // success iff vertex 0 is in the set
  kEitherEndpoint,  // success iff vertex 0 or vertex 1 is in the set
};

struct RootFindingReport {
  Model model = Model::kUA;
  std::size_t n = 0;
  double epsilon = 0.0;
  std::size_t k = 0;
  Scoring scoring = Scoring::kRootOnly;
  std::size_t replicas = 0;
  double success_rate = 0.0;
  double standard_error = 0.0;
};

// Grows from `seed`, relabels uniformly (unless `relabel` is false), and
// scores root_confidence_set(t, k).
RootFindingReport root_finding_experiment(Model model, std::size_t n, const Tree& seed,
                                          std::size_t k, double epsilon, Scoring scoring,
                                          std::size_t replicas, const RngStream& rng,
                                          bool relabel = true, std::size_t jobs = 1);

// Exact law of the root degree at n vertices, by dynamic programming over
// attachment steps. Starts from `seed_size` vertices with root degree
// `root_degree`; entry j is P(deg = j).
std::vector<double> root_degree_law(Model model, std::size_t n, std::size_t seed_size,
                                    std::size_t root_degree);

}  // namespace netinf::trees
