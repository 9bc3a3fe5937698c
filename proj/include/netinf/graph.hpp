#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netinf {

// Vertices are 0-based in memory. Text formats use 1-based ids; the
// conversion happens only in parse_edge_list / serialize_edge_list.
using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

// Undirected simple graph stored as a dense symmetric bit matrix.
// Row v occupies words_per_row() 64-bit words; bit u of row v is set iff
// {u, v} is an edge. The diagonal is always clear.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);

  static Graph complete(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return m_; }
  std::size_t words_per_row() const { return words_; }

  bool has_edge(Vertex u, Vertex v) const;
  // Returns false if the edge was already present. Throws on self-loops and
  // out-of-range endpoints.
  bool add_edge(Vertex u, Vertex v);

  std::span<const std::uint64_t> row(Vertex v) const {
    return {bits_.data() + v * words_, words_};
  }

  // Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  // Graph with vertex v renamed to perm[v].
  Graph permuted(std::span<const Vertex> perm) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.bits_ == b.bits_;
  }

 private:
  void check_vertex(Vertex v) const;

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

std::size_t degree(const Graph& g, Vertex v);

// Tree stored as adjacency lists. Always connected and acyclic: it starts as
// a single vertex and grows one leaf at a time, or is validated on import.
class Tree {
 public:
  // Single vertex.
  Tree() : adjacency_(1) {}

  // Throws ParameterError unless the edges form a spanning tree on n vertices.
  static Tree from_edges(std::size_t n, std::span<const Edge> edges);
  static Tree from_graph(const Graph& g);
  static Tree path(std::size_t n);
  static Tree star(std::size_t n);  // vertex 0 is the center

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return adjacency_.size() - 1; }

  // Adds a new vertex attached to `parent`; returns its id (== old size()).
  Vertex add_leaf(Vertex parent);

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

  std::vector<Edge> edges() const;
  Graph to_graph() const;
  Tree permuted(std::span<const Vertex> perm) const;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
};

// Sizes of the components of t - v, sorted ascending. They sum to n - 1.
std::vector<std::size_t> components_after_removal(const Tree& t, Vertex v);

// Edge-list text format: first line "n m", then m lines "u v" with
// 1 <= u < v <= n and no duplicates. Errors name the offending line.
Graph parse_edge_list(std::string_view text);
std::string serialize_edge_list(const Graph& g);
std::string serialize_edge_list(const Tree& t);

}  // namespace netinf
