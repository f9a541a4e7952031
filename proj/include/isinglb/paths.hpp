#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "isinglb/graph.hpp"

namespace isinglb {

/// Path-length argument meaning "no length limit".
inline constexpr int kUnboundedLength = std::numeric_limits<int>::max();

inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;

/// Witness that two vertices are joined by internally disjoint short paths.
/// Each path is the full vertex sequence from endpoint_a to endpoint_b.
struct PathCertificate {
  Vertex endpoint_a = 0;
  Vertex endpoint_b = 0;
  std::vector<std::vector<Vertex>> paths;
};

/// Number of simple a-b paths with at most max_len edges. Exhaustive DFS;
/// throws BudgetError when more than `budget` search nodes are visited.
std::uint64_t count_simple_paths(const Graph& g, Vertex a, Vertex b,
                                 int max_len = kUnboundedLength,
                                 std::uint64_t budget = 100'000'000);

struct DisjointPaths {
  int count = 0;
  PathCertificate certificate;
  std::uint64_t nodes_explored = 0;
};

/// Maximum number of internally vertex-disjoint a-b paths, each with at most
/// max_len edges, together with a certificate. Exact: candidate paths are
/// enumerated, then a memoized set-packing search picks the largest family.
/// Neighbors are explored in ascending id so the certificate is deterministic.
DisjointPaths max_disjoint_paths(const Graph& g, Vertex a, Vertex b, int max_len,
                                 std::uint64_t budget = kDefaultSearchBudget);

enum class CertificateIssue {
  kNone,
  kTooFewPaths,
  kBadEndpoints,
  kVertexOutOfRange,
  kNotAnEdge,
  kNotSimple,
  kTooLong,
  kSharedInterior,
  kDuplicatePath,
};

std::string to_string(CertificateIssue issue);

struct CertificateCheck {
  bool valid = false;
  CertificateIssue issue = CertificateIssue::kNone;
  std::string detail;

  explicit operator bool() const noexcept { return valid; }
};

/// True iff cert holds >= d distinct paths, all valid in g, pairwise
/// internally disjoint, each with at most max_len edges.
CertificateCheck verify_certificate(const Graph& g, const PathCertificate& cert,
                                    int max_len, int d);

}  // namespace isinglb
