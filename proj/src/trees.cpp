#include "netinf/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netinf/error.hpp"
#include "netinf/harness.hpp"

namespace netinf::trees {

std::string_view to_string(Model m) { return m == Model::kUA ? "UA" : "PA"; }

Model parse_model(std::string_view s) {
  if (s == "UA" || s == "ua") return Model::kUA;
  if (s == "PA" || s == "pa") return Model::kPA;
  throw ParameterError("unknown tree model: " + std::string(s));
}

Tree default_seed(Model model) { return model == Model::kUA ? Tree() : Tree::path(2); }

RecordedTree grow(Model model, std::size_t n, const Tree& seed, RngStream& rng) {
  if (n < seed.size()) throw ParameterError("n must be at least the seed size");
  if (model == Model::kPA && seed.size() < 2) {
    throw ParameterError("preferential attachment needs a seed with at least two vertices");
  }
  RecordedTree rt{seed, {}, model, seed.size()};
  // Every edge contributes both endpoints, so a uniform entry is a
  // degree-biased vertex.
  std::vector<Vertex> endpoints;
  if (model == Model::kPA) {
    endpoints.reserve(2 * (n - 1));
    for (const auto& [u, v] : seed.edges()) {
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  while (rt.tree.size() < n) {
    Vertex parent;
    if (model == Model::kUA) {
      parent = rng.below(rt.tree.size());
    } else {
      parent = endpoints[rng.below(endpoints.size())];
    }
    const Vertex child = rt.tree.add_leaf(parent);
    if (model == Model::kPA) {
      endpoints.push_back(parent);
      endpoints.push_back(child);
    }
  }
  rt.arrival.resize(n);
  std::iota(rt.arrival.begin(), rt.arrival.end(), Vertex{0});
  return rt;
}

Relabeled relabel_uniform(const RecordedTree& rt, RngStream& rng) {
  const std::size_t n = rt.tree.size();
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.below(i)]);
  }
  Relabeled out{rt.tree.permuted(perm), perm[rt.arrival[0]], perm};
  return out;
}

std::vector<std::size_t> all_psi(const Tree& t) {
  const std::size_t n = t.size();
  // BFS from vertex 0; parent[0] stays n.
  std::vector<Vertex> order, parent(n, n);
  std::vector<char> seen(n, 0);
  order.reserve(n);
  order.push_back(0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex w : t.neighbors(order[i])) {
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = order[i];
        order.push_back(w);
      }
    }
  }
  std::vector<std::size_t> subtree(n, 1), largest_child(n, 0);
  for (std::size_t i = n; i-- > 1;) {
    const Vertex v = order[i];
    subtree[parent[v]] += subtree[v];
    largest_child[parent[v]] = std::max(largest_child[parent[v]], subtree[v]);
  }
  std::vector<std::size_t> out(n);
  for (Vertex v = 0; v < n; ++v) out[v] = std::max(largest_child[v], n - subtree[v]);
  return out;
}

std::size_t psi(const Tree& t, Vertex v) {
  if (v >= t.size()) throw ParameterError("vertex out of range");
  const auto parts = components_after_removal(t, v);
  return parts.empty() ? 0 : parts.back();
}

std::vector<Vertex> centroid(const Tree& t) {
  const auto values = all_psi(t);
  const std::size_t best = *std::min_element(values.begin(), values.end());
  std::vector<Vertex> out;
  for (Vertex v = 0; v < values.size(); ++v) {
    if (values[v] == best) out.push_back(v);
  }
  return out;
}

ConfidenceSet root_confidence_set(const Tree& t, std::size_t k, double epsilon) {
  if (k < 1) throw ParameterError("K must be at least 1");
  const auto values = all_psi(t);
  std::vector<Vertex> order(t.size());
  std::iota(order.begin(), order.end(), Vertex{0});
  const std::size_t keep = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](Vertex a, Vertex b) {
                      return values[a] != values[b] ? values[a] < values[b] : a < b;
                    });
  order.resize(keep);
  return {std::move(order), k, epsilon};
}

std::size_t required_k(double epsilon, KBound bound, double c) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  const double log_inv = std::log(1.0 / epsilon);
  double value;
  if (bound == KBound::kCentroidUa) {
    value = 2.5 * log_inv / epsilon;
  } else {
    if (!(c > 0.0)) throw ParameterError("constant c must be positive");
    value = c * log_inv * log_inv / std::pow(epsilon, 4);
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(value)));
}

MaxDegree max_degree(const Tree& t) {
  MaxDegree best;
  for (Vertex v = 0; v < t.size(); ++v) {
    if (t.degree(v) > best.degree) best = {v, t.degree(v)};
  }
  return best;
}

DegreeScaling fixed_vertex_degree_scaling(Model model, std::span<const std::size_t> n_values,
                                          std::size_t runs, const RngStream& rng,
                                          std::size_t jobs) {
  if (n_values.size() < 2 || runs == 0) {
    throw ParameterError("need at least two n values and one run");
  }
  std::vector<std::size_t> ns(n_values.begin(), n_values.end());
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw ParameterError("n values must be increasing");
  }
  const Tree seed = default_seed(model);
  if (ns.front() < seed.size()) throw ParameterError("n values must cover the seed");

  std::vector<std::vector<double>> degree(ns.size(), std::vector<double>(runs));
  harness::for_each_replica(runs, jobs, [&](std::size_t run) {
    RngStream local = rng.replica(run);
    Tree t = seed;
    std::size_t done = seed.size();
    std::vector<Vertex> endpoints;
    for (const auto& [u, v] : seed.edges()) {
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
      while (done < ns[i]) {
        const Vertex parent = model == Model::kUA ? local.below(t.size())
                                                  : endpoints[local.below(endpoints.size())];
        const Vertex child = t.add_leaf(parent);
        if (model == Model::kPA) {
          endpoints.push_back(parent);
          endpoints.push_back(child);
        }
        ++done;
      }
      degree[i][run] = static_cast<double>(t.degree(0));
    }
  });

  DegreeScaling out;
  out.n_values = ns;
  std::vector<double> log_n, log_mean;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double mean =
        std::accumulate(degree[i].begin(), degree[i].end(), 0.0) / static_cast<double>(runs);
    out.mean_degree.push_back(mean);
    log_n.push_back(std::log(static_cast<double>(ns[i])));
    log_mean.push_back(std::log(mean));
  }
  out.slope = harness::least_squares_slope(log_n, log_mean);
  return out;
}

RootFindingReport root_finding_experiment(Model model, std::size_t n, const Tree& seed,
                                          std::size_t k, double epsilon, Scoring scoring,
                                          std::size_t replicas, const RngStream& rng,
                                          bool relabel, std::size_t jobs) {
  if (replicas == 0) throw ParameterError("replicas must be positive");
  if (scoring == Scoring::kEitherEndpoint && seed.size() < 2) {
    throw ParameterError("either-endpoint scoring needs a seed with at least two vertices");
  }
  std::vector<char> hit(replicas, 0);
  harness::for_each_replica(replicas, jobs, [&](std::size_t r) {
    RngStream local = rng.replica(r);
    const RecordedTree rt = grow(model, n, seed, local);
    Tree t = rt.tree;
    Vertex root = 0, other = 1;
    if (relabel) {
      Relabeled rl = relabel_uniform(rt, local);
      t = std::move(rl.tree);
      root = rl.hidden_root;
      if (scoring == Scoring::kEitherEndpoint) other = rl.perm[1];
    }
    const auto set = root_confidence_set(t, k, epsilon).vertices;
    const auto contains = [&](Vertex v) {
      return std::find(set.begin(), set.end(), v) != set.end();
    };
    hit[r] = contains(root) || (scoring == Scoring::kEitherEndpoint && contains(other));
  });
  RootFindingReport report{model, n, epsilon, k, scoring, replicas, 0.0, 0.0};
  const auto successes = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
  report.success_rate = successes / static_cast<double>(replicas);
  report.standard_error = std::sqrt(report.success_rate * (1.0 - report.success_rate) /
                                    static_cast<double>(replicas));
  return report;
}

std::vector<double> root_degree_law(Model model, std::size_t n, std::size_t seed_size,
                                    std::size_t root_degree) {
  if (seed_size == 0 || n < seed_size) throw ParameterError("need 1 <= seed_size <= n");
  if (model == Model::kPA && seed_size < 2) {
    throw ParameterError("preferential attachment needs a seed with at least two vertices");
  }
  if (root_degree >= seed_size) throw ParameterError("root degree exceeds seed size");
  std::vector<double> law(n, 0.0);
  law[root_degree] = 1.0;
  for (std::size_t m = seed_size; m < n; ++m) {
    // m vertices, m - 1 edges: the new vertex picks the root with
    // probability 1/m (UA) or deg/(2(m-1)) (PA).
    std::vector<double> next(n, 0.0);
    for (std::size_t d = 0; d < m; ++d) {
      if (law[d] == 0.0) continue;
      const double attach = model == Model::kUA
                                ? 1.0 / static_cast<double>(m)
                                : static_cast<double>(d) / (2.0 * static_cast<double>(m - 1));
      next[d] += law[d] * (1.0 - attach);
      next[d + 1] += law[d] * attach;
    }
    law = std::move(next);
  }
  return law;
}

}  // namespace netinf::trees
