#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isinglb {

using Vertex = int;

/// Undirected edge, always stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on vertices 0..p-1. Immutable after construction;
/// the edge list is kept sorted so equality and serialization are canonical.
class Graph {
 public:
  Graph() = default;

  /// Throws ArgumentError on p < 1, self-loops or endpoints out of range.
  /// Duplicate edges (in either orientation) collapse to one.
  Graph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Sorted neighbor list of v.
  std::span<const Vertex> neighbors(Vertex v) const;
  int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
  bool has_edge(Vertex a, Vertex b) const;

  Graph with_edge(Vertex a, Vertex b) const;
  Graph without_edge(Vertex a, Vertex b) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.num_vertices_ == b.num_vertices_ && a.edges_ == b.edges_;
  }

 private:
  int num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
};

/// Parses the edge-list format: first non-comment line is p, then one "u v"
/// per line. Blank lines and lines starting with '#' are skipped.
Graph parse_graph(std::string_view text);

/// Canonical writer: "p\n" followed by "u v\n" for u < v in lexicographic order.
std::string format_graph(const Graph& g);

Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path);

/// |E Δ E'|. Throws DimensionError when the vertex counts differ.
std::size_t hamming_distance(const Graph& g, const Graph& h);

/// Length of the shortest cycle, or nullopt for a forest.
std::optional<int> girth(const Graph& g);

}  // namespace isinglb
