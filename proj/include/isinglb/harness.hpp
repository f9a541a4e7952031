#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "isinglb/ensembles.hpp"
#include "isinglb/ising.hpp"
#include "isinglb/samples.hpp"

namespace isinglb {

// Empirical hardness experiments: draw a hypothesis from an ensemble, sample
// from it exactly, decode by maximum likelihood and compare the error rate
// against the single-centre Fano floor.

/// Parameters for building an ensemble in place of loading one from disk.
struct EnsembleSpec {
  GraphClass graph_class = GraphClass::kDRegular;
  EnsembleKind kind = EnsembleKind::kHamming1;
  EnsembleParams params;
};

/// Dispatches to the matching build_* function.
HardEnsemble build_ensemble(const EnsembleSpec& spec, double lambda);

/// Reads {"class", "kind", "p", "eta", "gamma", "g", "d", "k", "nu"}; kind
/// defaults to HAMMING1 for dregular and edge-bounded, CONNECTIVITY otherwise.
EnsembleSpec parse_ensemble_spec(const nlohmann::json& j);

enum class ErrorMetric { kAvg, kMax };
enum class Decoder { kMlExact };

std::string_view to_string(ErrorMetric m);
ErrorMetric parse_error_metric(std::string_view s);

struct ExperimentConfig {
  std::string ensemble_path;               ///< directory written by write_ensemble
  std::optional<EnsembleSpec> inline_spec;  ///< used when ensemble_path is empty
  std::optional<double> lambda;            ///< required for inline specs
  std::vector<std::size_t> sample_sizes;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  Decoder decoder = Decoder::kMlExact;
  ErrorMetric metric = ErrorMetric::kAvg;
  unsigned threads = 1;
};

/// Relative ensemble paths resolve against base_dir. Throws ArgumentError on
/// missing or malformed fields, trials < 1 or any n < 1.
ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);

/// Exact maximum-likelihood decoder over a fixed candidate list sharing one
/// lambda. Candidate log partition functions are computed once.
class MLDecoder {
 public:
  /// Throws CapacityError if any candidate exceeds the inference cap and
  /// DimensionError if the candidates disagree on p.
  MLDecoder(std::vector<Graph> candidates, double lambda, const EnumerationLimits& limits = {});

  /// Index of the most likely candidate; ties go to the lowest index, so an
  /// empty sample set decodes to 0.
  std::size_t decode(const SampleSet& samples) const;

  /// Log-likelihood of every candidate, in candidate order.
  std::vector<double> log_likelihoods(const SampleSet& samples) const;

  std::size_t size() const noexcept { return candidates_.size(); }

 private:
  std::vector<Graph> candidates_;
  double lambda_;
  std::vector<double> log_partitions_;
};

/// One-shot form of MLDecoder::decode.
std::size_t ml_decode(std::span<const Graph> candidates, const SampleSet& samples,
                      double lambda, const EnumerationLimits& limits = {});

struct BinomialInterval {
  double low = 0.0;
  double high = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for errors / trials at normal quantile z.
BinomialInterval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = kZ95);

/// Wilson half-width at z = 1, used as the standard error of p_hat.
double wilson_standard_error(std::uint64_t errors, std::uint64_t trials);

struct ExperimentRow {
  std::size_t n = 0;
  std::uint64_t trials = 0;  ///< AVG: draws; MAX: draws per hypothesis
  std::uint64_t errors = 0;  ///< AVG: all errors; MAX: errors of the worst hypothesis
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double fano_floor_certified = 0.0;
  double fano_floor_exact = 0.0;
  std::size_t worst_hypothesis = 0;  ///< MAX only
  double wall_seconds = 0.0;         ///< never serialized
};

struct ExperimentResult {
  std::string graph_class;
  std::string kind;
  int p = 0;
  double lambda = 0.0;
  std::uint64_t hypotheses = 0;
  double rho_certified = 0.0;
  double rho_exact = 0.0;  ///< max over T of D(member || center)
  ErrorMetric metric = ErrorMetric::kAvg;
  std::uint64_t seed = 0;
  std::vector<ExperimentRow> rows;
};

/// Loads or builds the ensemble, requires validate_ensemble to pass, then
/// for each n runs the configured trials. Trial t at sample-size index i
/// uses seed derive_seed(seed, {i, t}) (MAX mode adds the hypothesis index),
/// so results do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const EnumerationLimits& limits = {});

/// Same, on an ensemble already in memory.
ExperimentResult run_experiment(const HardEnsemble& ensemble, const ExperimentConfig& cfg,
                                const EnumerationLimits& limits = {});

inline constexpr std::string_view kCsvHeader =
    "n,trials,errors,p_hat,ci_low,ci_high,fano_floor_certified,fano_floor_exact";

/// Deterministic renderings; wall time is left out of both.
std::string format_csv(const ExperimentResult& r);
nlohmann::json to_json(const ExperimentResult& r);

/// Shortest round-trip decimal form, used for every number written to CSV.
std::string format_number(double x);

}  // namespace isinglb
