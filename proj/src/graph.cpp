#include "netinf/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>

#include "netinf/error.hpp"

namespace netinf {

Graph::Graph(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

Graph Graph::complete(std::size_t n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

void Graph::check_vertex(Vertex v) const {
  if (v >= n_) {
    throw ParameterError("vertex " + std::to_string(v) + " out of range for n = " +
                         std::to_string(n_));
  }
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U;
}

bool Graph::add_edge(Vertex u, Vertex v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw ParameterError("self-loop at vertex " + std::to_string(u));
  std::uint64_t& word = bits_[u * words_ + v / 64];
  const std::uint64_t mask = std::uint64_t{1} << (v % 64);
  if (word & mask) return false;
  word |= mask;
  bits_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
  ++m_;
  return true;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n_; ++u) {
    auto r = row(u);
    for (std::size_t w = (u + 1) / 64; w < words_; ++w) {
      std::uint64_t bits = r[w];
      if (w == (u + 1) / 64) bits &= ~std::uint64_t{0} << ((u + 1) % 64);
      while (bits) {
        const int b = std::countr_zero(bits);
        out.emplace_back(u, w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }
  return out;
}

Graph Graph::permuted(std::span<const Vertex> perm) const {
  if (perm.size() != n_) throw ParameterError("permutation size mismatch");
  Graph g(n_);
  for (const auto& [u, v] : edges()) g.add_edge(perm[u], perm[v]);
  return g;
}

std::size_t degree(const Graph& g, Vertex v) {
  if (v >= g.size()) throw ParameterError("vertex out of range");
  std::size_t d = 0;
  for (std::uint64_t w : g.row(v)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

// ---------------------------------------------------------------------------
// Tree

Tree Tree::from_edges(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw ParameterError("tree must have at least one vertex");
  if (edges.size() != n - 1) {
    throw ParameterError("tree on " + std::to_string(n) + " vertices needs " +
                         std::to_string(n - 1) + " edges, got " +
                         std::to_string(edges.size()));
  }
  // Union-find rejects cycles; n - 1 acyclic edges imply connectivity.
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  Tree t;
  t.adjacency_.assign(n, {});
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw ParameterError("tree edge endpoint out of range");
    if (u == v) throw ParameterError("self-loop in tree");
    const Vertex ru = find(u), rv = find(v);
    if (ru == rv) throw ParameterError("edges contain a cycle");
    parent[ru] = rv;
    t.adjacency_[u].push_back(v);
    t.adjacency_[v].push_back(u);
  }
  return t;
}

Tree Tree::from_graph(const Graph& g) {
  const auto e = g.edges();
  return from_edges(g.size(), e);
}

Tree Tree::path(std::size_t n) {
  Tree t;
  for (std::size_t i = 1; i < n; ++i) t.add_leaf(i - 1);
  return t;
}

Tree Tree::star(std::size_t n) {
  Tree t;
  for (std::size_t i = 1; i < n; ++i) t.add_leaf(0);
  return t;
}

Vertex Tree::add_leaf(Vertex parent) {
  if (parent >= adjacency_.size()) throw ParameterError("parent out of range");
  const Vertex v = adjacency_.size();
  adjacency_.push_back({parent});
  adjacency_[parent].push_back(v);
  return v;
}

std::vector<Edge> Tree::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < adjacency_.size(); ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Graph Tree::to_graph() const {
  Graph g(size());
  for (const auto& [u, v] : edges()) g.add_edge(u, v);
  return g;
}

Tree Tree::permuted(std::span<const Vertex> perm) const {
  if (perm.size() != size()) throw ParameterError("permutation size mismatch");
  std::vector<Edge> e;
  e.reserve(edge_count());
  for (const auto& [u, v] : edges()) e.emplace_back(perm[u], perm[v]);
  return from_edges(size(), e);
}

std::vector<std::size_t> components_after_removal(const Tree& t, Vertex v) {
  if (v >= t.size()) throw ParameterError("vertex out of range");
  std::vector<std::size_t> sizes;
  std::vector<char> seen(t.size(), 0);
  seen[v] = 1;
  std::vector<Vertex> stack;
  for (Vertex start : t.neighbors(v)) {
    std::size_t count = 0;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      ++count;
      for (Vertex y : t.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    sizes.push_back(count);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// ---------------------------------------------------------------------------
// Edge-list text format

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::size_t parse_count(std::string_view field, std::size_t line_no) {
  std::size_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  while (!lines.empty() && split_fields(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "missing header line \"n m\"");

  const auto header = split_fields(lines[0]);
  if (header.size() != 2) throw ParseError(1, "header must be \"n m\"");
  const std::size_t n = parse_count(header[0], 1);
  const std::size_t m = parse_count(header[1], 1);
  if (n > 0 && m > n * (n - 1) / 2) throw ParseError(1, "more edges than vertex pairs");
  if (lines.size() - 1 < m) {
    throw ParseError(lines.size() + 1, "expected " + std::to_string(m) +
                                           " edge lines, found " +
                                           std::to_string(lines.size() - 1));
  }
  if (lines.size() - 1 > m) throw ParseError(m + 2, "unexpected line after the last edge");

  Graph g(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 2) throw ParseError(line_no, "edge line must be \"u v\"");
    const std::size_t u = parse_count(fields[0], line_no);
    const std::size_t v = parse_count(fields[1], line_no);
    if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    if (u < 1 || v < 1 || u > n || v > n) {
      throw ParseError(line_no, "vertex out of range 1.." + std::to_string(n));
    }
    if (u > v) throw ParseError(line_no, "expected u < v");
    if (!g.add_edge(u - 1, v - 1)) {
      throw ParseError(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
  }
  return g;
}

namespace {

std::string format_edges(std::size_t n, const std::vector<Edge>& edges) {
  std::string out = std::to_string(n) + " " + std::to_string(edges.size()) + "\n";
  for (const auto& [u, v] : edges) {
    out += std::to_string(u + 1);
    out += ' ';
    out += std::to_string(v + 1);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string serialize_edge_list(const Graph& g) { return format_edges(g.size(), g.edges()); }

std::string serialize_edge_list(const Tree& t) { return format_edges(t.size(), t.edges()); }

}  // namespace netinf
