#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace isinglb {

// Structural correlation and KL bounds.

/// log((1 + t^l) / (1 - t^l)) with t = tanh(lambda): the factor one path of
/// length l contributes to the connectivity bounds. Accurate for tiny and
/// large lambda; +inf only when t^l rounds to 1 in extended arithmetic.
double log_path_ratio(double lambda, int l);

/// Lower bound on E[x_a x_b] when a, b are joined by d internally disjoint
/// paths of length <= l: 1 - 2 / (1 + R^d), R = (1 + t^l) / (1 - t^l).
/// Throws ArgumentError unless lambda, l and d are positive.
double corr_lower_bound_ld(double lambda, int l, int d);

struct LogScaled {
  double value = 0.0;      ///< may underflow to 0 or overflow to inf
  double log_value = 0.0;  ///< natural log of the exact value; -inf for 0
};

/// 2 lambda |E Δ E'| / (1 + R^d); equals |E Δ E'| * lambda * (1 - corr_lower_bound_ld).
LogScaled kl_upper_bound_ld(double lambda, int l, int d, std::uint64_t sym_diff_size);

/// lambda tanh(lambda): KL bound for models differing in a single edge.
double kl_upper_bound_hamming1(double lambda);

/// 2 lambda / (1 + exp(log_product)), where log_product is the log of the
/// product of path factors; shared by every connectivity ensemble.
LogScaled connectivity_kl_radius(double lambda, double log_product);

/// Radii certified for the hard ensembles, in nats.
double path_restricted_kl_radius(double lambda, int eta);
double path_length_kl_radius(double lambda, int eta, int gamma, double paths);
double girth_kl_radius(double lambda, int g, double paths);
/// min(2 lambda d e^lambda / e^{lambda d}, lambda tanh lambda).
double clique_kl_radius(double lambda, int d);
/// min(2 lambda e^lambda (sqrt(2k)+1) / e^{lambda (sqrt(2k)-1)}, lambda tanh lambda).
double edge_bounded_kl_radius(double lambda, int k);

// Fano thresholds.

struct FanoThreshold {
  double value = 0.0;
  bool vacuous = false;  ///< value <= 0: no sample size is ruled out
};

/// ((1 - delta) log|G| - log 2) / p: below this many samples any estimator
/// over a class of size |G| has maximum error at least delta.
FanoThreshold fano_counting_threshold(double log_class_size, int p, double delta);
FanoThreshold fano_counting_threshold(std::uint64_t class_size, int p, double delta);

struct FanoInputs {
  std::uint64_t hypothesis_count = 2;  ///< |T|
  double rho = 0.0;                    ///< KL radius around the center, nats
  double delta = 0.5;                  ///< target error
};

/// ((1 - delta) log|T| - log 2) / rho for a family inside one KL ball.
FanoThreshold fano_single_center_threshold(const FanoInputs& in);

/// 1 - (n rho + log 2) / log|T|: lower bound on the average error of any
/// estimator under the uniform prior on T. Returned as-is (may be negative).
double fano_single_center_floor(std::uint64_t hypothesis_count, double rho, double n);

// Sample-complexity thresholds for the structured graph classes. Each report
// carries the two terms of max{., .}, hamming-term first.

struct BoundTerm {
  std::string name;
  double value = 0.0;      ///< +inf when overflow is set
  double log_value = 0.0;  ///< natural log of the term; -inf for a zero term
  bool overflow = false;
};

struct BoundReport {
  std::string bound;  ///< "path-restricted", "path-length", ...
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::pair<std::string, double>> derived;  ///< t_nu, d_nu, ...
  std::vector<BoundTerm> terms;
  std::size_t winning_term = 0;  ///< first maximal term
  double delta = 0.0;
  double n_threshold = 0.0;      ///< (1 - delta) * max(terms)
  double log_n_threshold = 0.0;
  bool overflow = false;
  bool vacuous = false;          ///< n_threshold <= 0

  const BoundTerm& winner() const { return terms.at(winning_term); }
};

/// Paths-restricted class: at most eta simple paths between any pair.
/// Requires eta >= 1 and 2 (eta + 1) <= p.
BoundReport threshold_path_restricted(int p, int eta, double lambda, double delta);

/// Class with at most eta paths of length <= gamma; t_nu = (p^{1-nu} - (eta+1)) / gamma.
/// Requires eta, gamma >= 1 and t_nu >= 1.
BoundReport threshold_path_length(int p, int eta, int gamma, double nu, double lambda,
                                  double delta);

/// Girth >= g, max degree <= d; d_nu = min(d, p^{1-nu} / g) must be >= 1.
BoundReport threshold_girth(int p, int g, int d, double nu, double lambda, double delta);

/// Approximately d-regular graphs. Requires d >= 2, p >= 2.
BoundReport threshold_dregular(int p, int d, double lambda, double delta);

/// Graphs with at most k edges. Requires k >= 9 and the clique K_m,
/// C(m,2) <= k, to fit in p vertices.
BoundReport threshold_edge_bounded(int p, int k, double lambda, double delta);

/// Largest m with C(m, 2) <= k.
int largest_clique_within(std::int64_t k);

nlohmann::json to_json(const BoundReport& r);

}  // namespace isinglb
