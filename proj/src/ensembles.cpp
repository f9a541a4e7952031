#include "isinglb/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "isinglb/bounds.hpp"
#include "isinglb/error.hpp"

namespace isinglb {

namespace {

// p^nu, t_nu and d_nu are floored with this slack so exact powers such as
// 16^0.25 = 2 are not lost to rounding.
constexpr double kFloorSlack = 1e-9;

int floor_count(double x) { return static_cast<int>(std::floor(x + kFloorSlack)); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw ArgumentError("lambda must be finite and positive, got " + num(lambda));
  }
}

void require_nu(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw ArgumentError("nu must lie in (0, 1), got " + num(nu));
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

/// Block counts implied by the parameters: alpha blocks with k long paths.
struct Layout {
  int alpha = 0;
  int k = 0;
  double real_k = 0.0;
  int block_size = 0;
};

Layout path_restricted_layout(const EnsembleParams& q) {
  Layout l;
  l.alpha = q.p / (q.eta + 1);
  l.block_size = q.eta + 1;
  return l;
}

Layout path_length_layout(const EnsembleParams& q) {
  Layout l;
  l.alpha = floor_count(std::pow(q.p, q.nu));
  l.real_k = (std::pow(q.p, 1.0 - q.nu) - (q.eta + 1)) / q.gamma;
  l.k = floor_count(l.real_k);
  l.block_size = l.k * q.gamma + q.eta + 1;
  return l;
}

Layout girth_layout(const EnsembleParams& q) {
  Layout l;
  l.alpha = floor_count(std::pow(q.p, q.nu));
  l.real_k = std::min(static_cast<double>(q.degree), std::pow(q.p, 1.0 - q.nu) / q.girth);
  l.k = floor_count(l.real_k);
  l.block_size = l.k * (q.girth - 2) + 2;
  return l;
}

Layout dregular_layout(const EnsembleParams& q) {
  Layout l;
  l.alpha = q.p / (q.degree + 1);
  l.block_size = q.degree + 1;
  return l;
}

Layout edge_bounded_layout(const EnsembleParams& q) {
  Layout l;
  l.alpha = 1;
  l.block_size = largest_clique_within(q.max_edges);
  return l;
}

Layout layout_of(GraphClass c, const EnsembleParams& q) {
  switch (c) {
    case GraphClass::kPathRestricted: return path_restricted_layout(q);
    case GraphClass::kPathLength: return path_length_layout(q);
    case GraphClass::kGirth: return girth_layout(q);
    case GraphClass::kDRegular: return dregular_layout(q);
    case GraphClass::kEdgeBounded: return edge_bounded_layout(q);
  }
  throw ArgumentError("unknown graph class");
}

void check_fits(const Layout& l, int p, const char* what) {
  if (static_cast<long long>(l.alpha) * l.block_size > p) {
    throw ArgumentError(std::string(what) + ": alpha * block_size = " + std::to_string(l.alpha) +
                        " * " + std::to_string(l.block_size) + " exceeds p = " +
                        std::to_string(p));
  }
}

/// Adds a path s - v_1 - ... - v_len - t through `len` fresh vertices.
void add_path(std::vector<Edge>& edges, Vertex s, Vertex t, Vertex& next, int len) {
  Vertex prev = s;
  for (int i = 0; i < len; ++i) {
    edges.emplace_back(prev, next);
    prev = next++;
  }
  edges.emplace_back(prev, t);
}

/// Fills members / removed_edges from the center and blocks.
void make_members(HardEnsemble& e) {
  e.members.clear();
  e.removed_edges.clear();
  if (e.kind == EnsembleKind::kConnectivity) {
    for (const BlockLayout& b : e.blocks) e.removed_edges.emplace_back(b.s, b.t);
  } else {
    for (const BlockLayout& b : e.blocks) {
      for (const Edge& edge : e.center.edges()) {
        if (edge.u >= b.first && edge.u < b.first + b.size) e.removed_edges.push_back(edge);
      }
    }
  }
  for (const Edge& r : e.removed_edges) e.members.push_back(e.center.without_edge(r.u, r.v));
}

HardEnsemble assemble(GraphClass c, EnsembleKind kind, const EnsembleParams& q, double lambda,
                      const Layout& l, std::vector<Edge> edges) {
  HardEnsemble e;
  e.graph_class = c;
  e.kind = kind;
  e.params = q;
  e.lambda = lambda;
  e.center = Graph(q.p, std::move(edges));
  for (int b = 0; b < l.alpha; ++b) {
    const Vertex first = b * l.block_size;
    e.blocks.push_back({first, l.block_size, first, first + 1});
  }
  e.paths_per_block = l.k;
  e.real_paths = l.real_k;
  e.leftover_vertices = q.p - l.alpha * l.block_size;
  make_members(e);
  e.rho = certified_radius(e);
  return e;
}

}  // namespace

std::string to_string(GraphClass c) {
  switch (c) {
    case GraphClass::kPathRestricted: return "PATH_RESTRICTED";
    case GraphClass::kPathLength: return "PATH_LENGTH";
    case GraphClass::kGirth: return "GIRTH";
    case GraphClass::kDRegular: return "DREGULAR";
    case GraphClass::kEdgeBounded: return "EDGE_BOUNDED";
  }
  return "UNKNOWN";
}

std::string to_string(EnsembleKind k) {
  return k == EnsembleKind::kConnectivity ? "CONNECTIVITY" : "HAMMING1";
}

GraphClass parse_graph_class(std::string_view s) {
  std::string key(s);
  std::transform(key.begin(), key.end(), key.begin(), [](char ch) {
    return ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  });
  for (GraphClass c : {GraphClass::kPathRestricted, GraphClass::kPathLength, GraphClass::kGirth,
                       GraphClass::kDRegular, GraphClass::kEdgeBounded}) {
    if (to_string(c) == key) return c;
  }
  throw ArgumentError("unknown graph class '" + std::string(s) + "'");
}

EnsembleKind parse_ensemble_kind(std::string_view s) {
  std::string key(s);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](char ch) { return static_cast<char>(std::toupper(static_cast<unsigned char>(ch))); });
  if (key == "CONNECTIVITY") return EnsembleKind::kConnectivity;
  if (key == "HAMMING1") return EnsembleKind::kHamming1;
  throw ArgumentError("unknown ensemble kind '" + std::string(s) + "'");
}

HardEnsemble build_path_restricted(int p, int eta, double lambda, EnsembleKind kind) {
  require_lambda(lambda);
  if (eta < 1) throw ArgumentError("path-restricted: eta must be >= 1");
  EnsembleParams q;
  q.p = p;
  q.eta = eta;
  const Layout l = path_restricted_layout(q);
  if (l.alpha < 1) {
    throw ArgumentError("path-restricted: needs p >= eta + 1 for one block (p=" +
                        std::to_string(p) + ", eta=" + std::to_string(eta) + ")");
  }
  std::vector<Edge> edges;
  for (int b = 0; b < l.alpha; ++b) {
    const Vertex s = b * l.block_size;
    const Vertex t = s + 1;
    edges.emplace_back(s, t);
    for (Vertex c = s + 2; c < s + l.block_size; ++c) {
      edges.emplace_back(s, c);
      edges.emplace_back(t, c);
    }
  }
  return assemble(GraphClass::kPathRestricted, kind, q, lambda, l, std::move(edges));
}

HardEnsemble build_path_length(int p, int eta, int gamma, double nu, double lambda,
                               EnsembleKind kind) {
  require_lambda(lambda);
  require_nu(nu);
  if (eta < 1) throw ArgumentError("path-length: eta must be >= 1");
  if (gamma < 1) throw ArgumentError("path-length: gamma must be >= 1");
  if (p < 2) throw ArgumentError("path-length: p must be >= 2");
  EnsembleParams q;
  q.p = p;
  q.eta = eta;
  q.gamma = gamma;
  q.nu = nu;
  const Layout l = path_length_layout(q);
  if (l.k < 1) {
    throw ArgumentError("path-length: t_nu = " + num(l.real_k) +
                        " < 1 (needs p^{1-nu} >= eta + 1 + gamma)");
  }
  if (l.alpha < 1) throw ArgumentError("path-length: floor(p^nu) must be >= 1");
  check_fits(l, p, "path-length");
  std::vector<Edge> edges;
  for (int b = 0; b < l.alpha; ++b) {
    const Vertex s = b * l.block_size;
    const Vertex t = s + 1;
    edges.emplace_back(s, t);
    Vertex next = s + 2;
    for (; next < s + eta + 1; ++next) {
      edges.emplace_back(s, next);
      edges.emplace_back(t, next);
    }
    for (int i = 0; i < l.k; ++i) add_path(edges, s, t, next, gamma);
  }
  return assemble(GraphClass::kPathLength, kind, q, lambda, l, std::move(edges));
}

HardEnsemble build_girth(int p, int g, int d, double nu, double lambda, EnsembleKind kind) {
  require_lambda(lambda);
  require_nu(nu);
  if (g < 3) throw ArgumentError("girth: g must be >= 3");
  if (d < 1) throw ArgumentError("girth: d must be >= 1");
  if (p < 2) throw ArgumentError("girth: p must be >= 2");
  EnsembleParams q;
  q.p = p;
  q.girth = g;
  q.degree = d;
  q.nu = nu;
  const Layout l = girth_layout(q);
  if (l.k < 1) {
    throw ArgumentError("girth: d_nu = " + num(l.real_k) + " < 1 (needs p^{1-nu} >= g)");
  }
  if (l.alpha < 1) throw ArgumentError("girth: floor(p^nu) must be >= 1");
  check_fits(l, p, "girth");
  std::vector<Edge> edges;
  for (int b = 0; b < l.alpha; ++b) {
    const Vertex s = b * l.block_size;
    const Vertex t = s + 1;
    edges.emplace_back(s, t);
    Vertex next = s + 2;
    for (int i = 0; i < l.k; ++i) add_path(edges, s, t, next, g - 2);
  }
  return assemble(GraphClass::kGirth, kind, q, lambda, l, std::move(edges));
}

HardEnsemble build_dregular(int p, int d, double lambda) {
  require_lambda(lambda);
  if (d < 1) throw ArgumentError("dregular: d must be >= 1");
  if (d + 1 > p) {
    throw ArgumentError("dregular: d + 1 = " + std::to_string(d + 1) + " exceeds p = " +
                        std::to_string(p));
  }
  EnsembleParams q;
  q.p = p;
  q.degree = d;
  const Layout l = dregular_layout(q);
  std::vector<Edge> edges;
  for (int b = 0; b < l.alpha; ++b) {
    const Vertex first = b * l.block_size;
    for (Vertex u = first; u < first + l.block_size; ++u) {
      for (Vertex v = u + 1; v < first + l.block_size; ++v) edges.emplace_back(u, v);
    }
  }
  return assemble(GraphClass::kDRegular, EnsembleKind::kHamming1, q, lambda, l, std::move(edges));
}

HardEnsemble build_edge_bounded(int p, int k, double lambda) {
  require_lambda(lambda);
  if (k < 9) throw HypothesisError("edge-bounded: k must be >= 9, got " + std::to_string(k));
  EnsembleParams q;
  q.p = p;
  q.max_edges = k;
  const Layout l = edge_bounded_layout(q);
  if (l.block_size > p) {
    throw ArgumentError("edge-bounded: clique size m = " + std::to_string(l.block_size) +
                        " exceeds p = " + std::to_string(p));
  }
  std::vector<Edge> edges;
  for (Vertex u = 0; u < l.block_size; ++u) {
    for (Vertex v = u + 1; v < l.block_size; ++v) edges.emplace_back(u, v);
  }
  return assemble(GraphClass::kEdgeBounded, EnsembleKind::kHamming1, q, lambda, l,
                  std::move(edges));
}

std::uint64_t expected_member_count(const HardEnsemble& e) {
  const EnsembleParams& q = e.params;
  const Layout l = layout_of(e.graph_class, q);
  const std::uint64_t alpha = static_cast<std::uint64_t>(l.alpha);
  const std::uint64_t k = static_cast<std::uint64_t>(l.k);
  const bool conn = e.kind == EnsembleKind::kConnectivity;
  switch (e.graph_class) {
    case GraphClass::kPathRestricted:
      return conn ? alpha : alpha * (2 * q.eta - 1);
    case GraphClass::kPathLength:
      return conn ? alpha : alpha * (k * (q.gamma + 1) + 2 * q.eta - 1);
    case GraphClass::kGirth:
      return conn ? alpha : alpha * (k * (q.girth - 1) + 1);
    case GraphClass::kDRegular:
      return alpha * choose2(q.degree + 1);
    case GraphClass::kEdgeBounded:
      return choose2(l.block_size);
  }
  return 0;
}

double certified_radius(const HardEnsemble& e) {
  const EnsembleParams& q = e.params;
  switch (e.graph_class) {
    case GraphClass::kDRegular: return clique_kl_radius(e.lambda, q.degree);
    case GraphClass::kEdgeBounded: return edge_bounded_kl_radius(e.lambda, q.max_edges);
    default: break;
  }
  if (e.kind == EnsembleKind::kHamming1) return kl_upper_bound_hamming1(e.lambda);
  const Layout l = layout_of(e.graph_class, q);
  switch (e.graph_class) {
    case GraphClass::kPathRestricted: return path_restricted_kl_radius(e.lambda, q.eta);
    case GraphClass::kPathLength: return path_length_kl_radius(e.lambda, q.eta, q.gamma, l.k);
    case GraphClass::kGirth: return girth_kl_radius(e.lambda, q.girth, l.k);
    default: break;
  }
  throw ArgumentError("no certified radius for this ensemble");
}

namespace {

class Auditor {
 public:
  Auditor(const HardEnsemble& e, const ValidationOptions& opts) : e_(e), opts_(opts) {}

  ValidationReport run() {
    const bool shapes_ok = check_shapes();
    check_distinct();
    check_count();
    check_rho();
    if (shapes_ok) {
      for (std::size_t i = 0; i < e_.members.size(); ++i) {
        guarded(i, "structure", [&] { check_structure(i); });
        guarded(i, "class", [&] { check_class(i); });
      }
      guarded(std::nullopt, "kl", [&] { check_kl(); });
    }
    return std::move(report_);
  }

 private:
  void add(std::string check, std::optional<std::size_t> member, std::string detail) {
    report_.violations.push_back({std::move(check), member, std::move(detail)});
  }

  template <typename F>
  void guarded(std::optional<std::size_t> member, const char* check, F&& f) {
    try {
      f();
    } catch (const Error& err) {
      add(check, member, std::string("check aborted: ") + err.what());
    }
  }

  bool check_shapes() {
    bool ok = true;
    if (e_.members.size() != e_.removed_edges.size()) {
      add("structure", std::nullopt,
          std::to_string(e_.members.size()) + " members but " +
              std::to_string(e_.removed_edges.size()) + " removed edges");
      ok = false;
    }
    for (std::size_t i = 0; i < e_.members.size(); ++i) {
      if (e_.members[i].num_vertices() != e_.num_vertices()) {
        add("structure", i, "vertex count differs from the center");
        ok = false;
      }
    }
    return ok;
  }

  void check_distinct() {
    std::map<std::vector<Edge>, std::size_t> seen;
    for (std::size_t i = 0; i < e_.members.size(); ++i) {
      const Graph& m = e_.members[i];
      if (m == e_.center) add("distinct", i, "member equals the center");
      std::vector<Edge> key(m.edges().begin(), m.edges().end());
      key.emplace_back(m.num_vertices(), m.num_vertices() + 1);  // p as part of the key
      const auto [it, inserted] = seen.emplace(std::move(key), i);
      if (!inserted) add("distinct", i, "duplicate of member " + std::to_string(it->second));
    }
  }

  void check_count() {
    const std::uint64_t expected = expected_member_count(e_);
    if (e_.members.size() != expected) {
      add("count", std::nullopt,
          "|T| = " + std::to_string(e_.members.size()) + ", expected " + std::to_string(expected));
    }
  }

  void check_rho() {
    const double expected = certified_radius(e_);
    if (!(std::abs(e_.rho - expected) <= 1e-12 * std::max(1.0, expected))) {
      add("rho", std::nullopt, "rho = " + num(e_.rho) + ", formula gives " + num(expected));
    }
  }

  void check_structure(std::size_t i) {
    const Graph& m = e_.members[i];
    const Edge r = e_.removed_edges[i];
    if (!e_.center.has_edge(r.u, r.v)) {
      add("structure", i, "removed edge is not in the center");
      return;
    }
    if (!(m == e_.center.without_edge(r.u, r.v))) {
      add("structure", i, "member is not the center minus its removed edge");
      return;
    }
    if (hamming_distance(m, e_.center) != 1) add("structure", i, "Hamming distance is not 1");
    if (e_.kind != EnsembleKind::kConnectivity) return;

    const auto block = std::find_if(e_.blocks.begin(), e_.blocks.end(), [&](const BlockLayout& b) {
      return Edge(b.s, b.t) == r;
    });
    if (block == e_.blocks.end()) {
      add("structure", i, "removed edge is not a block's main (s,t) edge");
      return;
    }
    const EnsembleParams& q = e_.params;
    auto require_paths = [&](int max_len, int needed) {
      if (needed <= 0) return;
      const int got =
          max_disjoint_paths(m, block->s, block->t, max_len, opts_.search_budget).count;
      if (got < needed) {
        add("structure", i,
            "(s,t) has " + std::to_string(got) + " disjoint paths of length <= " +
                std::to_string(max_len) + ", expected " + std::to_string(needed));
      }
    };
    switch (e_.graph_class) {
      case GraphClass::kPathRestricted:
        require_paths(2, q.eta - 1);
        break;
      case GraphClass::kPathLength:
        require_paths(2, q.eta - 1);
        require_paths(q.gamma + 1, q.eta - 1 + e_.paths_per_block);
        break;
      case GraphClass::kGirth:
        require_paths(q.girth - 1, e_.paths_per_block);
        break;
      default:
        add("structure", i, "connectivity ensembles are not defined for this class");
    }
  }

  void check_class(std::size_t i) {
    const Graph& m = e_.members[i];
    const EnsembleParams& q = e_.params;
    const int p = m.num_vertices();
    switch (e_.graph_class) {
      case GraphClass::kPathRestricted:
      case GraphClass::kPathLength: {
        const bool bounded = e_.graph_class == GraphClass::kPathLength;
        const int max_len = bounded ? q.gamma : kUnboundedLength;
        for (Vertex a = 0; a < p; ++a) {
          if (m.degree(a) == 0) continue;
          for (Vertex b = a + 1; b < p; ++b) {
            if (m.degree(b) == 0) continue;
            const std::uint64_t n = count_simple_paths(m, a, b, max_len, opts_.search_budget);
            if (n > static_cast<std::uint64_t>(q.eta)) {
              add("class", i,
                  "pair (" + std::to_string(a) + "," + std::to_string(b) + ") has " +
                      std::to_string(n) + " simple paths" +
                      (bounded ? " of length <= " + std::to_string(q.gamma) : std::string()) +
                      ", limit eta = " + std::to_string(q.eta));
              return;  // one witness per member keeps the report readable
            }
          }
        }
        break;
      }
      case GraphClass::kGirth: {
        const auto g = girth(m);
        if (g && *g < q.girth) {
          add("class", i, "girth " + std::to_string(*g) + " < " + std::to_string(q.girth));
        }
        for (Vertex v = 0; v < p; ++v) {
          if (m.degree(v) > q.degree) {
            add("class", i,
                "vertex " + std::to_string(v) + " has degree " + std::to_string(m.degree(v)) +
                    " > d = " + std::to_string(q.degree));
            break;
          }
        }
        break;
      }
      case GraphClass::kDRegular:
        for (Vertex v = 0; v < p; ++v) {
          const int deg = m.degree(v);
          if (deg != 0 && deg != q.degree && deg != q.degree - 1) {
            add("class", i,
                "vertex " + std::to_string(v) + " has degree " + std::to_string(deg) +
                    ", expected " + std::to_string(q.degree - 1) + " or " +
                    std::to_string(q.degree));
            break;
          }
        }
        break;
      case GraphClass::kEdgeBounded: {
        const auto edges = static_cast<long long>(m.num_edges());
        if (2 * edges < q.max_edges || edges > q.max_edges) {
          add("class", i,
              std::to_string(edges) + " edges outside [k/2, k] for k = " +
                  std::to_string(q.max_edges));
        }
        break;
      }
    }
  }

  void check_kl() {
    if (e_.num_vertices() > opts_.kl_check_max_p) return;
    report_.kl_checked = true;
    const IsingModel center(e_.center, e_.lambda);
    for (std::size_t i = 0; i < e_.members.size(); ++i) {
      const IsingModel member(e_.members[i], e_.lambda);
      const double to = kl_exact(member, center, opts_.limits);
      const double from = kl_exact(center, member, opts_.limits);
      report_.max_kl_to_center = std::max(report_.max_kl_to_center, to);
      report_.max_kl_from_center = std::max(report_.max_kl_from_center, from);
      if (to > e_.rho + opts_.kl_tolerance) {
        add("kl", i, "D(member || center) = " + num(to) + " > rho = " + num(e_.rho));
      }
      if (from > e_.rho + opts_.kl_tolerance) {
        add("kl", i, "D(center || member) = " + num(from) + " > rho = " + num(e_.rho));
      }
    }
  }

  const HardEnsemble& e_;
  const ValidationOptions& opts_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_ensemble(const HardEnsemble& e, const ValidationOptions& opts) {
  return Auditor(e, opts).run();
}

double max_member_kl(const HardEnsemble& e, const EnumerationLimits& limits) {
  const IsingModel center(e.center, e.lambda);
  double worst = 0.0;
  for (const Graph& m : e.members) {
    worst = std::max(worst, kl_exact(IsingModel(m, e.lambda), center, limits));
  }
  return worst;
}

namespace {

nlohmann::json params_json(GraphClass c, const EnsembleParams& q) {
  nlohmann::json j;
  j["p"] = q.p;
  switch (c) {
    case GraphClass::kPathRestricted:
      j["eta"] = q.eta;
      break;
    case GraphClass::kPathLength:
      j["eta"] = q.eta;
      j["gamma"] = q.gamma;
      j["nu"] = q.nu;
      break;
    case GraphClass::kGirth:
      j["g"] = q.girth;
      j["d"] = q.degree;
      j["nu"] = q.nu;
      break;
    case GraphClass::kDRegular:
      j["d"] = q.degree;
      break;
    case GraphClass::kEdgeBounded:
      j["k"] = q.max_edges;
      break;
  }
  return j;
}

EnsembleParams params_from_json(const nlohmann::json& j) {
  EnsembleParams q;
  q.p = j.at("p").get<int>();
  q.eta = j.value("eta", 0);
  q.gamma = j.value("gamma", 0);
  q.girth = j.value("g", 0);
  q.degree = j.value("d", 0);
  q.max_edges = j.value("k", 0);
  q.nu = j.value("nu", 0.0);
  return q;
}

std::string member_file(std::size_t i) { return "member_" + std::to_string(i) + ".edgelist"; }

}  // namespace

nlohmann::json manifest_json(const HardEnsemble& e) {
  nlohmann::json j;
  j["class_tag"] = to_string(e.graph_class);
  j["kind"] = to_string(e.kind);
  j["lambda"] = e.lambda;
  j["rho"] = e.rho;
  j["params"] = params_json(e.graph_class, e.params);
  j["counts"] = {{"vertices", e.num_vertices()},
                 {"members", e.members.size()},
                 {"expected_members", expected_member_count(e)},
                 {"blocks", e.blocks.size()},
                 {"paths_per_block", e.paths_per_block},
                 {"leftover_vertices", e.leftover_vertices}};
  j["real_paths"] = e.real_paths;
  nlohmann::json blocks = nlohmann::json::array();
  for (const BlockLayout& b : e.blocks) {
    blocks.push_back({{"first", b.first}, {"size", b.size}, {"s", b.s}, {"t", b.t}});
  }
  j["blocks"] = blocks;
  nlohmann::json removed = nlohmann::json::array();
  for (const Edge& r : e.removed_edges) removed.push_back({r.u, r.v});
  j["removed_edges"] = removed;
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < e.members.size(); ++i) files.push_back(member_file(i));
  j["members"] = files;
  j["center"] = "center.edgelist";
  return j;
}

void write_ensemble(const HardEnsemble& e, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ArgumentError("cannot create directory '" + dir + "': " + ec.message());
  const fs::path root(dir);
  write_graph_file(e.center, (root / "center.edgelist").string());
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    write_graph_file(e.members[i], (root / member_file(i)).string());
  }
  std::ofstream out(root / "manifest.json", std::ios::binary);
  if (!out) throw ArgumentError("cannot write manifest in '" + dir + "'");
  out << manifest_json(e).dump(2) << '\n';
}

HardEnsemble read_ensemble(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::ifstream in(root / "manifest.json", std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + (root / "manifest.json").string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("manifest.json: ") + err.what(), 0);
  }
  try {
    HardEnsemble e;
    e.graph_class = parse_graph_class(j.at("class_tag").get<std::string>());
    e.kind = parse_ensemble_kind(j.at("kind").get<std::string>());
    e.lambda = j.at("lambda").get<double>();
    e.rho = j.at("rho").get<double>();
    e.params = params_from_json(j.at("params"));
    e.real_paths = j.value("real_paths", 0.0);
    const auto& counts = j.at("counts");
    e.paths_per_block = counts.value("paths_per_block", 0);
    e.leftover_vertices = counts.value("leftover_vertices", 0);
    for (const auto& b : j.at("blocks")) {
      e.blocks.push_back({b.at("first").get<int>(), b.at("size").get<int>(), b.at("s").get<int>(),
                          b.at("t").get<int>()});
    }
    for (const auto& r : j.at("removed_edges")) {
      e.removed_edges.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
    }
    e.center = read_graph_file((root / j.value("center", "center.edgelist")).string());
    for (const auto& f : j.at("members")) {
      e.members.push_back(read_graph_file((root / f.get<std::string>()).string()));
    }
    return e;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("manifest.json: ") + err.what(), 0);
  }
}

}  // namespace isinglb
