#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isinglb/graph.hpp"

namespace isinglb {

/// Zero-field ferromagnetic Ising model with a uniform coupling on every edge:
/// f(x) ∝ exp(lambda * sum_{(i,j) in E} x_i x_j) over x in {-1,+1}^p.
class IsingModel {
 public:
  /// Throws ArgumentError unless lambda is finite and positive.
  IsingModel(Graph graph, double lambda);

  const Graph& graph() const noexcept { return graph_; }
  double lambda() const noexcept { return lambda_; }
  int num_vertices() const noexcept { return graph_.num_vertices(); }

  friend bool operator==(const IsingModel&, const IsingModel&) = default;

 private:
  Graph graph_;
  double lambda_;
};

/// Caps on brute-force enumeration. Configuration, not constants: the CLI
/// overrides both from ISING_LB_MAX_P.
struct EnumerationLimits {
  int max_inference_vertices = 24;
  int max_sampling_vertices = 20;
};

/// Hard ceiling regardless of configuration (state indices are 32-bit).
inline constexpr int kMaxEnumerableVertices = 30;

struct ExactInference {
  int num_vertices = 0;
  double log_partition = 0.0;  ///< natural log of Z
  std::vector<double> correlations;  ///< row-major p×p, E[x_s x_t]

  double correlation(Vertex s, Vertex t) const {
    return correlations[static_cast<std::size_t>(s) * num_vertices + t];
  }
};

/// Brute-force log Z and the full pair-correlation matrix. Throws
/// CapacityError when p exceeds limits.max_inference_vertices.
ExactInference infer_exact(const IsingModel& m, const EnumerationLimits& limits = {});

/// log Z only; cheaper than infer_exact (no pair statistics).
double log_partition(const IsingModel& m, const EnumerationLimits& limits = {});

/// D(f_m1 || f_m2) in nats, by enumeration of sum f1 log(f1/f2).
double kl_exact(const IsingModel& m1, const IsingModel& m2,
                const EnumerationLimits& limits = {});

/// sum over edge pairs of (theta1 - theta2)(E_1[x_s x_t] - E_2[x_s x_t]).
/// With a shared lambda this is the edge-difference expansion of the
/// symmetric divergence D(f1||f2) + D(f2||f1).
double symmetric_kl_edge_form(const IsingModel& m1, const IsingModel& m2,
                              const EnumerationLimits& limits = {});

/// sum_{(i,j) in E} x_i x_j for one configuration.
int agreement(const Graph& g, std::span<const std::int8_t> spins);

}  // namespace isinglb
