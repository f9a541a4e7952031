#include "isinglb/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <limits>
#include <queue>
#include <sstream>

#include "isinglb/error.hpp"

namespace isinglb {

Graph::Graph(int num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices) {
  if (num_vertices < 1) {
    throw ArgumentError("graph needs at least one vertex, got p=" +
                        std::to_string(num_vertices));
  }
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v >= num_vertices) {
      throw ArgumentError("edge (" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + ") out of range for p=" +
                          std::to_string(num_vertices));
    }
    if (e.u == e.v) {
      throw ArgumentError("self-loop at vertex " + std::to_string(e.u));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  std::vector<std::size_t> degree(num_vertices_, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(num_vertices_ + 1, 0);
  for (int v = 0; v < num_vertices_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (int v = 0; v < num_vertices_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
  if (v < 0 || v >= num_vertices_) {
    throw ArgumentError("vertex " + std::to_string(v) + " out of range");
  }
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a == b) return false;
  return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

Graph Graph::with_edge(Vertex a, Vertex b) const {
  std::vector<Edge> edges = edges_;
  edges.emplace_back(a, b);
  return Graph(num_vertices_, std::move(edges));
}

Graph Graph::without_edge(Vertex a, Vertex b) const {
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  const Edge target(a, b);
  std::copy_if(edges_.begin(), edges_.end(), std::back_inserter(edges),
               [&](const Edge& e) { return e != target; });
  return Graph(num_vertices_, std::move(edges));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Parses whitespace-separated integers; fails on anything else.
bool parse_ints(std::string_view s, std::vector<long long>& out) {
  out.clear();
  while (true) {
    s = trim(s);
    if (s.empty()) return true;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc()) return false;
    const std::size_t used = static_cast<std::size_t>(ptr - s.data());
    if (used < s.size() && s[used] != ' ' && s[used] != '\t' && s[used] != '\r') {
      return false;
    }
    out.push_back(value);
    s.remove_prefix(used);
  }
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::optional<int> p;
  std::vector<Edge> edges;
  std::vector<long long> fields;
  int line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!parse_ints(line, fields)) {
      throw ParseError("malformed line '" + std::string(line) + "'", line_no);
    }
    if (!p) {
      if (fields.size() != 1 || fields[0] < 1 ||
          fields[0] > std::numeric_limits<int>::max()) {
        throw ParseError("expected a positive vertex count", line_no);
      }
      p = static_cast<int>(fields[0]);
      continue;
    }
    if (fields.size() != 2) {
      throw ParseError("expected 'u v', got '" + std::string(line) + "'", line_no);
    }
    const long long u = fields[0];
    const long long v = fields[1];
    if (u < 0 || v < 0 || u >= *p || v >= *p) {
      throw ParseError("vertex out of range for p=" + std::to_string(*p), line_no);
    }
    if (u == v) {
      throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (!p) throw ParseError("missing vertex count", 0);
  return Graph(*p, std::move(edges));
}

std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.num_vertices()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write graph file '" + path + "'");
  out << format_graph(g);
}

std::size_t hamming_distance(const Graph& g, const Graph& h) {
  if (g.num_vertices() != h.num_vertices()) {
    throw DimensionError("hamming_distance: p=" + std::to_string(g.num_vertices()) +
                         " vs p=" + std::to_string(h.num_vertices()));
  }
  std::vector<Edge> diff;
  std::set_symmetric_difference(g.edges().begin(), g.edges().end(), h.edges().begin(),
                                h.edges().end(), std::back_inserter(diff));
  return diff.size();
}

std::optional<int> girth(const Graph& g) {
  // BFS from every root; a non-tree edge (u,w) closes a cycle of length at
  // most dist[u] + dist[w] + 1, and the minimum over all roots is exact.
  const int p = g.num_vertices();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(p);
  std::vector<Vertex> parent(p);
  std::queue<Vertex> queue;
  for (Vertex root = 0; root < p; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    parent[root] = -1;
    queue.push(root);
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop();
      if (2 * dist[u] + 1 >= best) break;
      for (Vertex w : g.neighbors(u)) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push(w);
        } else if (parent[u] != w) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
    queue = {};
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

}  // namespace isinglb
