#pragma once

// Internal helpers for brute-force enumeration over {-1,+1}^p. A state is a
// bitmask; bit v set means x_v = -1.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "isinglb/error.hpp"
#include "isinglb/graph.hpp"
#include "isinglb/ising.hpp"

namespace isinglb::detail {

class StateSpace {
 public:
  explicit StateSpace(const Graph& g)
      : p_(g.num_vertices()), m_(static_cast<int>(g.num_edges())), higher_(p_, 0) {
    for (const Edge& e : g.edges()) higher_[e.u] |= std::uint32_t{1} << e.v;
  }

  int num_vertices() const { return p_; }
  int num_edges() const { return m_; }

  /// Number of edges whose endpoints disagree in `state`.
  int disagreements(std::uint32_t state) const {
    int k = 0;
    for (int v = 0; v < p_; ++v) {
      const std::uint32_t flip = (state >> v) & 1U ? ~state : state;
      k += std::popcount(higher_[v] & flip);
    }
    return k;
  }

  /// sum x_i x_j over edges.
  int agreement(std::uint32_t state) const { return m_ - 2 * disagreements(state); }

  /// States with vertex 0 pinned to +1; global flip symmetry covers the rest.
  std::uint32_t half_count() const { return std::uint32_t{1} << (p_ - 1); }

 private:
  int p_;
  int m_;
  std::vector<std::uint32_t> higher_;
};

inline void check_capacity(int p, int cap, const char* what) {
  const int limit = cap < kMaxEnumerableVertices ? cap : kMaxEnumerableVertices;
  if (p > limit) {
    throw CapacityError(std::string(what) + ": p=" + std::to_string(p) +
                        " exceeds enumeration cap " + std::to_string(limit));
  }
}

/// log(sum_i exp(x_i)) with running-max shift; -inf for an empty/all -inf input.
inline double log_sum_exp(const std::vector<double>& xs) {
  double mx = -INFINITY;
  for (double x : xs) mx = x > mx ? x : mx;
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace isinglb::detail
