#include "isinglb/paths.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <set>
#include <unordered_map>

#include "isinglb/error.hpp"

namespace isinglb {
namespace {

void check_endpoints(const Graph& g, Vertex a, Vertex b, int max_len) {
  const int p = g.num_vertices();
  if (a < 0 || a >= p || b < 0 || b >= p) {
    throw ArgumentError("endpoint out of range for p=" + std::to_string(p));
  }
  if (a == b) throw ArgumentError("path endpoints must differ");
  if (max_len < 1) throw ArgumentError("max_len must be positive");
}

// BFS distances to `target` in g with `excluded` deleted; -1 if unreachable.
std::vector<int> distances_to(const Graph& g, Vertex target, Vertex excluded) {
  std::vector<int> dist(g.num_vertices(), -1);
  std::queue<Vertex> queue;
  dist[target] = 0;
  queue.push(target);
  while (!queue.empty()) {
    const Vertex u = queue.front();
    queue.pop();
    for (Vertex w : g.neighbors(u)) {
      if (w == excluded || dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      queue.push(w);
    }
  }
  return dist;
}

class BudgetCounter {
 public:
  BudgetCounter(std::uint64_t budget, const char* what) : budget_(budget), what_(what) {}

  void tick() {
    if (++used_ > budget_) {
      throw BudgetError(std::string(what_) + ": search budget of " +
                        std::to_string(budget_) + " nodes exhausted");
    }
  }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
  const char* what_;
};

// Walks every simple a-b path of length <= max_len, calling visit(path) on
// arrival at b. `path` holds the vertices from a to b inclusive.
template <typename Visit>
void enumerate_simple_paths(const Graph& g, Vertex a, Vertex b, int max_len,
                            BudgetCounter& budget, Visit&& visit) {
  const std::vector<int> dist = distances_to(g, b, a);
  std::vector<char> on_path(g.num_vertices(), 0);
  std::vector<Vertex> path{a};
  on_path[a] = 1;

  // Explicit stack of (vertex, next neighbor index) keeps deep paths safe.
  std::vector<std::size_t> next_index{0};
  while (!path.empty()) {
    const Vertex u = path.back();
    const auto nbrs = g.neighbors(u);
    std::size_t& i = next_index.back();
    bool descended = false;
    while (i < nbrs.size()) {
      const Vertex w = nbrs[i++];
      if (on_path[w]) continue;
      const int len = static_cast<int>(path.size());  // edges after stepping to w
      if (len > max_len) continue;
      if (w == b) {
        budget.tick();
        path.push_back(b);
        visit(path);
        path.pop_back();
        continue;
      }
      if (dist[w] < 0 || len + dist[w] > max_len) continue;
      budget.tick();
      path.push_back(w);
      on_path[w] = 1;
      next_index.push_back(0);
      descended = true;
      break;
    }
    if (!descended) {
      on_path[u] = 0;
      path.pop_back();
      next_index.pop_back();
    }
  }
}

using Bits = std::vector<std::uint64_t>;

bool intersects(const Bits& x, const Bits& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] & y[i]) return true;
  }
  return false;
}

bool is_subset(const Bits& x, const Bits& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] & ~y[i]) return false;
  }
  return true;
}

int count_free(const Bits& mask, const Bits& used) {
  int n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) n += std::popcount(mask[i] & ~used[i]);
  return n;
}

struct StateKey {
  std::size_t group;
  Bits used;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ k.group;
    for (std::uint64_t w : k.used) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct Candidate {
  std::vector<Vertex> path;
  Bits interior;
};

// Maximum set packing over candidate interiors, branching on the a-side
// neighbor each path leaves through. Values are memoized per (group, used).
class PackingSearch {
 public:
  struct Group {
    Bits first;  // the shared first interior vertex
    std::vector<const Candidate*> members;
  };

  PackingSearch(std::vector<Group> groups, Bits b_side, std::size_t words,
                BudgetCounter& budget)
      : groups_(std::move(groups)), b_side_(std::move(b_side)), words_(words),
        budget_(budget) {
    suffix_a_.assign(groups_.size() + 1, Bits(words_, 0));
    for (std::size_t gi = groups_.size(); gi-- > 0;) {
      for (std::size_t w = 0; w < words_; ++w) {
        suffix_a_[gi][w] = suffix_a_[gi + 1][w] | groups_[gi].first[w];
      }
    }
  }

  int solve(std::size_t gi, const Bits& used) {
    if (gi == groups_.size()) return 0;
    const int bound =
        std::min(count_free(suffix_a_[gi], used), count_free(b_side_, used));
    if (bound == 0) return 0;
    StateKey key{gi, used};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    budget_.tick();

    int best = solve(gi + 1, used);
    if (best < bound && !intersects(groups_[gi].first, used)) {
      Bits next(words_);
      for (const Candidate* c : groups_[gi].members) {
        if (intersects(c->interior, used)) continue;
        for (std::size_t w = 0; w < words_; ++w) next[w] = used[w] | c->interior[w];
        best = std::max(best, 1 + solve(gi + 1, next));
        if (best == bound) break;
      }
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

  // Replays the memoized optimum, preferring the earliest candidate.
  std::vector<const Candidate*> reconstruct() {
    std::vector<const Candidate*> chosen;
    Bits used(words_, 0);
    Bits next(words_);
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
      const int target = solve(gi, used);
      if (target == 0) break;
      for (const Candidate* c : groups_[gi].members) {
        if (intersects(c->interior, used)) continue;
        for (std::size_t w = 0; w < words_; ++w) next[w] = used[w] | c->interior[w];
        if (1 + solve(gi + 1, next) == target) {
          chosen.push_back(c);
          used = next;
          break;
        }
      }
    }
    return chosen;
  }

 private:
  std::vector<Group> groups_;
  Bits b_side_;
  std::size_t words_;
  std::vector<Bits> suffix_a_;
  std::unordered_map<StateKey, int, StateKeyHash> memo_;
  BudgetCounter& budget_;
};

// Drops candidates whose interior strictly contains another's interior (or
// repeats an earlier one): swapping in the smaller path never hurts a packing.
std::vector<Candidate> minimal_candidates(std::vector<Candidate> all) {
  constexpr std::size_t kMaxFiltered = 20'000;
  if (all.size() > kMaxFiltered) return all;
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto size_of = [&](std::size_t i) { return all[i].path.size(); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return size_of(x) < size_of(y); });
  std::vector<char> keep(all.size(), 1);
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    for (std::size_t j : kept) {
      if (is_subset(all[j].interior, all[i].interior)) {
        keep[i] = 0;
        break;
      }
    }
    if (keep[i]) kept.push_back(i);
  }
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (keep[i]) out.push_back(std::move(all[i]));
  }
  return out;
}

}  // namespace

std::uint64_t count_simple_paths(const Graph& g, Vertex a, Vertex b, int max_len,
                                 std::uint64_t budget) {
  check_endpoints(g, a, b, max_len);
  BudgetCounter counter(budget, "count_simple_paths");
  std::uint64_t count = 0;
  enumerate_simple_paths(g, a, b, max_len, counter,
                         [&](const std::vector<Vertex>&) { ++count; });
  return count;
}

DisjointPaths max_disjoint_paths(const Graph& g, Vertex a, Vertex b, int max_len,
                                 std::uint64_t budget) {
  check_endpoints(g, a, b, max_len);
  BudgetCounter counter(budget, "max_disjoint_paths");

  DisjointPaths result;
  result.certificate.endpoint_a = a;
  result.certificate.endpoint_b = b;

  // Compact index for every vertex that shows up as an interior vertex.
  std::vector<int> compact(g.num_vertices(), -1);
  int universe = 0;
  std::vector<std::vector<Vertex>> raw;
  bool direct = false;
  enumerate_simple_paths(g, a, b, max_len, counter, [&](const std::vector<Vertex>& path) {
    if (path.size() == 2) {
      direct = true;
      return;
    }
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      if (compact[path[i]] < 0) compact[path[i]] = universe++;
    }
    raw.push_back(path);
  });

  const std::size_t words = (static_cast<std::size_t>(universe) + 63) / 64;
  std::vector<Candidate> all;
  all.reserve(raw.size());
  for (auto& path : raw) {
    Bits interior(words, 0);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const int bit = compact[path[i]];
      interior[bit / 64] |= std::uint64_t{1} << (bit % 64);
    }
    all.push_back({std::move(path), std::move(interior)});
  }
  std::vector<Candidate> candidates = minimal_candidates(std::move(all));

  // Group by the vertex each path leaves a through, in ascending vertex id;
  // within a group, keep enumeration (DFS) order.
  std::vector<PackingSearch::Group> groups;
  std::vector<int> group_of(g.num_vertices(), -1);
  for (Vertex u : g.neighbors(a)) {
    if (u == b || compact[u] < 0) continue;
    group_of[u] = static_cast<int>(groups.size());
    Bits first(words, 0);
    first[compact[u] / 64] |= std::uint64_t{1} << (compact[u] % 64);
    groups.push_back({std::move(first), {}});
  }
  Bits b_side(words, 0);
  for (const Candidate& c : candidates) {
    groups[group_of[c.path[1]]].members.push_back(&c);
    const int last = compact[c.path[c.path.size() - 2]];
    b_side[last / 64] |= std::uint64_t{1} << (last % 64);
  }
  std::erase_if(groups, [](const PackingSearch::Group& grp) { return grp.members.empty(); });

  PackingSearch search(std::move(groups), std::move(b_side), words, counter);
  const int packed = search.solve(0, Bits(words, 0));
  const std::vector<const Candidate*> chosen = search.reconstruct();

  if (direct) result.certificate.paths.push_back({a, b});
  for (const Candidate* c : chosen) result.certificate.paths.push_back(c->path);
  result.count = (direct ? 1 : 0) + packed;
  result.nodes_explored = counter.used();
  return result;
}

std::string to_string(CertificateIssue issue) {
  switch (issue) {
    case CertificateIssue::kNone: return "none";
    case CertificateIssue::kTooFewPaths: return "too-few-paths";
    case CertificateIssue::kBadEndpoints: return "bad-endpoints";
    case CertificateIssue::kVertexOutOfRange: return "vertex-out-of-range";
    case CertificateIssue::kNotAnEdge: return "not-an-edge";
    case CertificateIssue::kNotSimple: return "not-simple";
    case CertificateIssue::kTooLong: return "too-long";
    case CertificateIssue::kSharedInterior: return "shared-interior";
    case CertificateIssue::kDuplicatePath: return "duplicate-path";
  }
  return "unknown";
}

CertificateCheck verify_certificate(const Graph& g, const PathCertificate& cert,
                                    int max_len, int d) {
  const auto fail = [](CertificateIssue issue, std::string detail) {
    return CertificateCheck{false, issue, std::move(detail)};
  };
  const int p = g.num_vertices();
  const Vertex a = cert.endpoint_a;
  const Vertex b = cert.endpoint_b;
  if (a < 0 || a >= p || b < 0 || b >= p || a == b) {
    return fail(CertificateIssue::kBadEndpoints, "endpoints invalid for this graph");
  }
  if (static_cast<int>(cert.paths.size()) < d) {
    return fail(CertificateIssue::kTooFewPaths,
                std::to_string(cert.paths.size()) + " paths, need " + std::to_string(d));
  }
  std::vector<int> owner(p, -1);
  int direct_paths = 0;
  for (std::size_t k = 0; k < cert.paths.size(); ++k) {
    const auto& path = cert.paths[k];
    const std::string where = "path " + std::to_string(k);
    if (path.size() < 2 || path.front() != a || path.back() != b) {
      return fail(CertificateIssue::kBadEndpoints, where + " does not run from a to b");
    }
    for (Vertex v : path) {
      if (v < 0 || v >= p) return fail(CertificateIssue::kVertexOutOfRange, where);
    }
    if (static_cast<long long>(path.size()) - 1 > max_len) {
      return fail(CertificateIssue::kTooLong, where + " has " +
                                                  std::to_string(path.size() - 1) +
                                                  " edges, limit " + std::to_string(max_len));
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!g.has_edge(path[i], path[i + 1])) {
        return fail(CertificateIssue::kNotAnEdge,
                    where + " uses non-edge (" + std::to_string(path[i]) + "," +
                        std::to_string(path[i + 1]) + ")");
      }
    }
    if (path.size() == 2 && ++direct_paths > 1) {
      return fail(CertificateIssue::kDuplicatePath, "direct edge listed twice");
    }
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const Vertex v = path[i];
      if (v == a || v == b) {
        return fail(CertificateIssue::kNotSimple, where + " revisits an endpoint");
      }
      if (owner[v] == static_cast<int>(k)) {
        return fail(CertificateIssue::kNotSimple,
                    where + " repeats vertex " + std::to_string(v));
      }
      if (owner[v] >= 0) {
        return fail(CertificateIssue::kSharedInterior,
                    "paths " + std::to_string(owner[v]) + " and " + std::to_string(k) +
                        " share vertex " + std::to_string(v));
      }
      owner[v] = static_cast<int>(k);
    }
  }
  return CertificateCheck{true, CertificateIssue::kNone, {}};
}

}  // namespace isinglb
