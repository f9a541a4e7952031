#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "isinglb/graph.hpp"
#include "isinglb/ising.hpp"
#include "isinglb/paths.hpp"

namespace isinglb {

enum class GraphClass { kPathRestricted, kPathLength, kGirth, kDRegular, kEdgeBounded };

/// kConnectivity removes the main (s, t) edge of one block per member;
/// kHamming1 removes any single edge.
enum class EnsembleKind { kConnectivity, kHamming1 };

std::string to_string(GraphClass c);  ///< "PATH_RESTRICTED", ...
std::string to_string(EnsembleKind k);  ///< "CONNECTIVITY" / "HAMMING1"
GraphClass parse_graph_class(std::string_view s);  ///< accepts "path-restricted" too
EnsembleKind parse_ensemble_kind(std::string_view s);

/// Construction parameters; only the fields of the ensemble's class are set.
struct EnsembleParams {
  int p = 0;
  int eta = 0;        ///< path-restricted, path-length
  int gamma = 0;      ///< path-length
  int girth = 0;      ///< girth: g
  int degree = 0;     ///< girth: max degree d; dregular: d
  int max_edges = 0;  ///< edge-bounded: k
  double nu = 0.0;    ///< path-length, girth

  friend bool operator==(const EnsembleParams&, const EnsembleParams&) = default;
};

/// A block occupies vertices [first, first + size). s and t are its main
/// endpoints (the first two vertices of the block).
struct BlockLayout {
  Vertex first = 0;
  int size = 0;
  Vertex s = 0;
  Vertex t = 0;

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

/// Center graph G0, the hypothesis family T and the KL radius rho certified
/// by the closed-form bounds. members[i] == center minus removed_edges[i].
struct HardEnsemble {
  GraphClass graph_class = GraphClass::kPathRestricted;
  EnsembleKind kind = EnsembleKind::kConnectivity;
  EnsembleParams params;
  double lambda = 0.0;
  double rho = 0.0;
  Graph center;
  std::vector<Graph> members;
  std::vector<Edge> removed_edges;
  std::vector<BlockLayout> blocks;
  int paths_per_block = 0;    ///< extra long paths per block (path-length, girth)
  double real_paths = 0.0;    ///< t_nu or d_nu before flooring
  int leftover_vertices = 0;  ///< isolated vertices outside every block

  int num_vertices() const { return center.num_vertices(); }
  friend bool operator==(const HardEnsemble&, const HardEnsemble&) = default;
};

/// alpha = floor(p / (eta + 1)) blocks of an (s, t) edge plus eta - 1 common
/// neighbours. rho = 2 lambda / (1 + cosh(2 lambda)^{eta-1}) (connectivity) or
/// lambda tanh lambda (hamming1).
HardEnsemble build_path_restricted(int p, int eta, double lambda, EnsembleKind kind);

/// alpha = floor(p^nu) blocks; each adds k = floor(t_nu) disjoint (s, t) paths
/// of length gamma + 1 to the path-restricted block.
HardEnsemble build_path_length(int p, int eta, int gamma, double nu, double lambda,
                               EnsembleKind kind);

/// alpha = floor(p^nu) blocks of an (s, t) edge plus k = floor(d_nu) disjoint
/// (s, t) paths of length g - 1.
HardEnsemble build_girth(int p, int g, int d, double nu, double lambda, EnsembleKind kind);

/// floor(p / (d + 1)) disjoint (d+1)-cliques; members drop one edge each.
HardEnsemble build_dregular(int p, int d, double lambda);

/// One clique K_m with C(m, 2) <= k maximal; members drop one edge each.
HardEnsemble build_edge_bounded(int p, int k, double lambda);

/// |T| implied by the construction's closed-form count.
std::uint64_t expected_member_count(const HardEnsemble& e);

/// rho recomputed from the bounds-module formula for e's class and kind.
double certified_radius(const HardEnsemble& e);

struct ValidationOptions {
  int kl_check_max_p = 12;  ///< exact KL checks run only up to this p
  double kl_tolerance = 1e-9;
  EnumerationLimits limits;
  std::uint64_t search_budget = kDefaultSearchBudget;
};

struct Violation {
  std::string check;  ///< "distinct", "structure", "class", "count", "rho", "kl"
  std::optional<std::size_t> member;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool kl_checked = false;
  double max_kl_to_center = 0.0;  ///< max over members of D(member || center)
  double max_kl_from_center = 0.0;  ///< max over members of D(center || member)

  bool ok() const { return violations.empty(); }
};

/// Mechanized audit of every property the construction promises. Never
/// throws on a bad ensemble; problems are listed as violations.
ValidationReport validate_ensemble(const HardEnsemble& e, const ValidationOptions& opts = {});

/// max over members of D(f_member || f_center), by enumeration.
double max_member_kl(const HardEnsemble& e, const EnumerationLimits& limits = {});

/// manifest.json contents (class_tag, kind, params, rho, lambda, counts, ...).
nlohmann::json manifest_json(const HardEnsemble& e);

/// Writes center.edgelist, member_<i>.edgelist and manifest.json into dir,
/// creating it if needed. Output is byte-identical for equal ensembles.
void write_ensemble(const HardEnsemble& e, const std::string& dir);
HardEnsemble read_ensemble(const std::string& dir);

}  // namespace isinglb
