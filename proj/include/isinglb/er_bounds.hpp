#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "isinglb/bounds.hpp"
#include "isinglb/graph.hpp"

namespace isinglb {

// Sample-complexity lower bounds for G(p, c/p) in the dense regime, plus
// structural diagnostics on sampled graphs. Entropies are in bits, every
// lambda-dependent quantity in nats.

struct ERParams {
  int p = 0;
  double c = 0.0;             ///< edge probability is c / p
  double lambda = 0.0;
  double p_avg_target = 0.01;
  double epsilon = 0.5;       ///< typicality slack
};

enum class ERRegime { kHighLambda, kLowLambda };

std::string_view to_string(ERRegime r);

/// -q log2 q - (1-q) log2 (1-q), with 0 log 0 = 0. ArgumentError outside [0,1].
double binary_entropy(double q);

struct ERConcentration {
  LogScaled b_p;  ///< (p/3) exp(-p/36)
  LogScaled r_c;  ///< 2 exp(-c^2 epsilon^2 / 36)
};

/// Only p, c and epsilon are read. No validation: the forms are defined for
/// any positive p.
ERConcentration er_concentration_constants(const ERParams& params);

struct ERQuantities {
  ERParams params;
  double density = 0.0;       ///< c / p
  double entropy_bits = 0.0;  ///< H(c/p)
  double gamma = 0.0;         ///< c^2 / (6p)
  ERConcentration constants;
  /// Denominator of n1, in order: "mixing-term" (4 lambda p/3) e^{-p/36},
  /// "tail-term" 4 e^{-p^{3/2}/144}, "correlation-term"
  /// 4 lambda / (9 (1 + cosh(2 lambda)^gamma)).
  std::vector<BoundTerm> denominator_terms;
  std::size_t dominant_term = 0;  ///< largest denominator term
  LogScaled n1;
  double n2 = 0.0;
  LogScaled lower_bound;          ///< max(n1, n2)
  ERRegime regime = ERRegime::kLowLambda;
  bool dense = false;             ///< c >= p^{3/4}
  /// The O(1/p) corrections have unstated constants and are taken as zero.
  bool asymptotic_slack_dropped = true;
};

/// n1 and n2 with the O(1/p) terms set to zero. Throws HypothesisError when
/// p_avg_target > 1/90 and ArgumentError for p < 2, c/p outside (0,1),
/// non-positive lambda or p_avg_target, or epsilon outside (0,1).
ERQuantities er_lower_bound(const ERParams& params);

/// kHighLambda iff lambda >= sqrt(p) / c. Requires p >= 1, c > 0, lambda > 0.
ERRegime er_regime(const ERParams& params);

/// Sample size scale that governs the regime.
std::string_view regime_sample_scale(ERRegime r);

/// Each of the C(p,2) pairs independently with probability c/p, scanned in
/// lexicographic order from one SplitMix64 stream. Requires c/p in [0,1).
Graph sample_er_graph(int p, double c, std::uint64_t seed);

struct ERDiagnostics {
  int p = 0;
  int part_size = 0;          ///< |A| = |B| = |C| = floor(p/3)
  int leftover_vertices = 0;  ///< p - 3 part_size, in no part
  double c = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;         ///< threshold on n_{a,c}; c^2/(6p) unless overridden
  bool gamma_overridden = false;

  double average_degree = 0.0;
  bool typical = false;       ///< |average_degree - c| <= epsilon c

  /// histogram[k] = number of pairs (a,c) in A x C with exactly k common
  /// neighbours in B.
  std::vector<std::uint64_t> histogram;
  std::uint64_t pairs = 0;
  double mean_common = 0.0;
  double expected_common = 0.0;      ///< c^2 / (3p)
  double common_lower_threshold = 0.0;  ///< c^2/(3p) - sqrt(4 p log p)
  std::uint64_t pairs_at_or_below_threshold = 0;

  std::uint64_t m_ac = 0;            ///< pairs with n_{a,c} >= gamma
  double connected_fraction = 0.0;   ///< m_ac / pairs
  double m_ac_threshold = 0.0;       ///< pairs / 2
  bool m_ac_above_threshold = false;
};

/// A, B, C are the consecutive vertex ranges of size floor(p/3); vertices
/// past 3 floor(p/3) are ignored and counted. epsilon must lie in (0,1).
ERDiagnostics er_structure_diagnostics(const Graph& g, double c,
                                       std::optional<double> gamma_override = std::nullopt,
                                       double epsilon = 0.5);

nlohmann::json to_json(const ERQuantities& q);
nlohmann::json to_json(const ERDiagnostics& d);

}  // namespace isinglb
