#include "isinglb/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>
#include <string>

#include "isinglb/error.hpp"
#include "state_space.hpp"

namespace isinglb {

using detail::StateSpace;

IsingModel::IsingModel(Graph graph, double lambda) : graph_(std::move(graph)), lambda_(lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw ArgumentError("lambda must be finite and positive, got " + std::to_string(lambda));
  }
}

namespace {

// Counts of pinned half-space states by number of disagreeing edges.
std::vector<std::uint64_t> disagreement_histogram(const StateSpace& space) {
  std::vector<std::uint64_t> counts(space.num_edges() + 1, 0);
  const std::uint32_t half = space.half_count();
  for (std::uint32_t i = 0; i < half; ++i) ++counts[space.disagreements(i << 1)];
  return counts;
}

// Each state weighs exp(lambda (m - 2k)); factoring out the k = 0 maximum
// leaves terms exp(-2 lambda k) <= 1, so the sum never overflows.
double scaled_half_partition(const std::vector<std::uint64_t>& counts, double lambda) {
  double z = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] != 0) z += static_cast<double>(counts[k]) * std::exp(-2.0 * lambda * k);
  }
  return z;
}

double log_partition_from_histogram(const std::vector<std::uint64_t>& counts, int num_edges,
                                    double lambda) {
  return std::log(2.0) + lambda * num_edges + std::log(scaled_half_partition(counts, lambda));
}

}  // namespace

double log_partition(const IsingModel& m, const EnumerationLimits& limits) {
  detail::check_capacity(m.num_vertices(), limits.max_inference_vertices, "log_partition");
  const StateSpace space(m.graph());
  return log_partition_from_histogram(disagreement_histogram(space), space.num_edges(),
                                      m.lambda());
}

ExactInference infer_exact(const IsingModel& m, const EnumerationLimits& limits) {
  const int p = m.num_vertices();
  detail::check_capacity(p, limits.max_inference_vertices, "infer_exact");
  const StateSpace space(m.graph());
  const int edges = space.num_edges();
  const std::size_t pairs = static_cast<std::size_t>(p) * (p - 1) / 2;

  // pair_base[s] + (t - s - 1) indexes the pair (s, t), s < t.
  std::vector<std::size_t> pair_base(p, 0);
  for (int s = 1; s < p; ++s) pair_base[s] = pair_base[s - 1] + (p - s);

  std::vector<std::uint64_t> counts(edges + 1, 0);
  std::vector<std::uint64_t> unequal((edges + 1) * pairs, 0);
  const std::uint32_t all = p == 32 ? ~0U : (std::uint32_t{1} << p) - 1;
  const std::uint32_t half = space.half_count();
  for (std::uint32_t i = 0; i < half; ++i) {
    const std::uint32_t state = i << 1;
    const int k = space.disagreements(state);
    ++counts[k];
    std::uint64_t* row = unequal.data() + static_cast<std::size_t>(k) * pairs;
    for (int s = 0; s + 1 < p; ++s) {
      const std::uint32_t higher = all & ~((std::uint32_t{2} << s) - 1);
      std::uint32_t differs = ((state >> s) & 1U ? ~state : state) & higher;
      while (differs != 0) {
        const int t = std::countr_zero(differs);
        differs &= differs - 1;
        ++row[pair_base[s] + (t - s - 1)];
      }
    }
  }

  const double lambda = m.lambda();
  std::vector<double> weight(edges + 1);
  for (int k = 0; k <= edges; ++k) weight[k] = std::exp(-2.0 * lambda * k);
  const double z = scaled_half_partition(counts, lambda);

  ExactInference out;
  out.num_vertices = p;
  out.log_partition = std::log(2.0) + lambda * edges + std::log(z);
  out.correlations.assign(static_cast<std::size_t>(p) * p, 0.0);
  for (int s = 0; s < p; ++s) {
    out.correlations[static_cast<std::size_t>(s) * p + s] = 1.0;
    for (int t = s + 1; t < p; ++t) {
      const std::size_t pair = pair_base[s] + (t - s - 1);
      double mass = 0.0;
      for (int k = 0; k <= edges; ++k) {
        const std::uint64_t c = unequal[static_cast<std::size_t>(k) * pairs + pair];
        if (c != 0) mass += static_cast<double>(c) * weight[k];
      }
      const double corr = 1.0 - 2.0 * (mass / z);
      out.correlations[static_cast<std::size_t>(s) * p + t] = corr;
      out.correlations[static_cast<std::size_t>(t) * p + s] = corr;
    }
  }
  return out;
}

double kl_exact(const IsingModel& m1, const IsingModel& m2, const EnumerationLimits& limits) {
  if (m1.num_vertices() != m2.num_vertices()) {
    throw DimensionError("kl_exact: p=" + std::to_string(m1.num_vertices()) + " vs p=" +
                         std::to_string(m2.num_vertices()));
  }
  detail::check_capacity(m1.num_vertices(), limits.max_inference_vertices, "kl_exact");
  const StateSpace s1(m1.graph());
  const StateSpace s2(m2.graph());
  const int e1 = s1.num_edges();
  const int e2 = s2.num_edges();

  // Joint histogram of (disagreements under G1, disagreements under G2).
  std::vector<std::uint64_t> joint(static_cast<std::size_t>(e1 + 1) * (e2 + 1), 0);
  const std::uint32_t half = s1.half_count();
  for (std::uint32_t i = 0; i < half; ++i) {
    const std::uint32_t state = i << 1;
    ++joint[static_cast<std::size_t>(s1.disagreements(state)) * (e2 + 1) +
            s2.disagreements(state)];
  }
  std::vector<std::uint64_t> c1(e1 + 1, 0);
  std::vector<std::uint64_t> c2(e2 + 1, 0);
  for (int k1 = 0; k1 <= e1; ++k1) {
    for (int k2 = 0; k2 <= e2; ++k2) {
      const std::uint64_t c = joint[static_cast<std::size_t>(k1) * (e2 + 1) + k2];
      c1[k1] += c;
      c2[k2] += c;
    }
  }
  const double l1 = m1.lambda();
  const double l2 = m2.lambda();
  const double log_z1 = log_partition_from_histogram(c1, e1, l1);
  const double log_z2 = log_partition_from_histogram(c2, e2, l2);

  double kl = 0.0;
  for (int k1 = 0; k1 <= e1; ++k1) {
    const double energy1 = l1 * (e1 - 2 * k1);
    const double prob1 = std::exp(energy1 - log_z1);
    if (prob1 == 0.0) continue;
    for (int k2 = 0; k2 <= e2; ++k2) {
      const std::uint64_t c = joint[static_cast<std::size_t>(k1) * (e2 + 1) + k2];
      if (c == 0) continue;
      const double energy2 = l2 * (e2 - 2 * k2);
      const double log_ratio = (energy1 - energy2) + (log_z2 - log_z1);
      kl += 2.0 * static_cast<double>(c) * prob1 * log_ratio;
    }
  }
  // True KL is non-negative; only rounding can push it below zero.
  return std::max(kl, 0.0);
}

double symmetric_kl_edge_form(const IsingModel& m1, const IsingModel& m2,
                              const EnumerationLimits& limits) {
  if (m1.num_vertices() != m2.num_vertices()) {
    throw DimensionError("symmetric_kl_edge_form: p=" + std::to_string(m1.num_vertices()) +
                         " vs p=" + std::to_string(m2.num_vertices()));
  }
  const ExactInference i1 = infer_exact(m1, limits);
  const ExactInference i2 = infer_exact(m2, limits);
  std::vector<Edge> support;
  std::set_union(m1.graph().edges().begin(), m1.graph().edges().end(),
                 m2.graph().edges().begin(), m2.graph().edges().end(),
                 std::back_inserter(support));
  double total = 0.0;
  for (const Edge& e : support) {
    const double theta1 = m1.graph().has_edge(e.u, e.v) ? m1.lambda() : 0.0;
    const double theta2 = m2.graph().has_edge(e.u, e.v) ? m2.lambda() : 0.0;
    if (theta1 == theta2) continue;
    total += (theta1 - theta2) * (i1.correlation(e.u, e.v) - i2.correlation(e.u, e.v));
  }
  return total;
}

int agreement(const Graph& g, std::span<const std::int8_t> spins) {
  if (static_cast<int>(spins.size()) != g.num_vertices()) {
    throw DimensionError("agreement: spin vector has " + std::to_string(spins.size()) +
                         " entries, graph has p=" + std::to_string(g.num_vertices()));
  }
  int total = 0;
  for (const Edge& e : g.edges()) total += spins[e.u] * spins[e.v];
  return total;
}

}  // namespace isinglb
