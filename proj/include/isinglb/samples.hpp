#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isinglb/ising.hpp"

namespace isinglb {

/// n spin vectors in {-1,+1}^p, stored row-major, plus the seed and generator
/// that produced them.
class SampleSet {
 public:
  SampleSet() = default;

  /// Throws DimensionError if spins.size() != n * p and ArgumentError on any
  /// entry other than +1 / -1. n = 0 is allowed.
  SampleSet(int num_vertices, std::size_t num_samples, std::vector<std::int8_t> spins,
            std::uint64_t seed, std::string generator);

  int num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_samples() const noexcept { return num_samples_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& generator() const noexcept { return generator_; }

  std::span<const std::int8_t> sample(std::size_t i) const {
    return {spins_.data() + i * static_cast<std::size_t>(num_vertices_),
            static_cast<std::size_t>(num_vertices_)};
  }
  std::span<const std::int8_t> spins() const noexcept { return spins_; }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  int num_vertices_ = 0;
  std::size_t num_samples_ = 0;
  std::vector<std::int8_t> spins_;
  std::uint64_t seed_ = 0;
  std::string generator_;
};

/// Header "n p seed generator-id", then one line of space-separated ±1 per sample.
std::string format_samples(const SampleSet& s);
SampleSet parse_samples(std::string_view text);
SampleSet read_samples_file(const std::string& path);
void write_samples_file(const SampleSet& s, const std::string& path);

/// Inverse-CDF sampler over the enumerated state space. Building the table is
/// the expensive part; draws are a binary search each.
class ExactSampler {
 public:
  /// Throws CapacityError when p exceeds limits.max_sampling_vertices.
  explicit ExactSampler(const IsingModel& m, const EnumerationLimits& limits = {});

  /// Draw i uses its own stream SplitMix64(mix(seed ^ i)), so any subset of
  /// draws can be regenerated independently.
  SampleSet sample(std::size_t n, std::uint64_t seed) const;

 private:
  int num_vertices_;
  std::vector<double> cumulative_;  // over states with vertex 0 pinned to +1
};

SampleSet sample_exact(const IsingModel& m, std::size_t n, std::uint64_t seed,
                       const EnumerationLimits& limits = {});

/// Single-chain Gibbs sampler with systematic scan 0..p-1. The chain starts
/// from a uniformly random state, runs burn_in sweeps, then records one state
/// every `thinning` sweeps. Throws ArgumentError if burn_in or thinning < 1.
SampleSet gibbs_sample(const IsingModel& m, std::size_t n, std::size_t burn_in,
                       std::size_t thinning, std::uint64_t seed);

/// sum over samples of log f(x) = lambda * agree(x) - log Z.
double log_likelihood(const IsingModel& m, const SampleSet& s,
                      const EnumerationLimits& limits = {});
double log_likelihood(const IsingModel& m, const SampleSet& s, double log_partition);

/// S[s][t] = sum over samples of x_s x_t, row-major p×p. Sufficient for the
/// likelihood of every model on the same vertex set.
std::vector<std::int64_t> pair_statistics(const SampleSet& s);

/// Mean of x_s x_t over the samples (0 when there are none).
double empirical_correlation(const SampleSet& s, Vertex a, Vertex b);

}  // namespace isinglb
