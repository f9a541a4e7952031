#include "isinglb/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "isinglb/bounds.hpp"
#include "isinglb/error.hpp"
#include "isinglb/rng.hpp"

namespace isinglb {

namespace {

using nlohmann::json;

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ArgumentError(std::string("config: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ArgumentError(std::string("config: field '") + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

}  // namespace

HardEnsemble build_ensemble(const EnsembleSpec& spec, double lambda) {
  const EnsembleParams& q = spec.params;
  switch (spec.graph_class) {
    case GraphClass::kPathRestricted:
      return build_path_restricted(q.p, q.eta, lambda, spec.kind);
    case GraphClass::kPathLength:
      return build_path_length(q.p, q.eta, q.gamma, q.nu, lambda, spec.kind);
    case GraphClass::kGirth:
      return build_girth(q.p, q.girth, q.degree, q.nu, lambda, spec.kind);
    case GraphClass::kDRegular:
      if (spec.kind != EnsembleKind::kHamming1) {
        throw ArgumentError("dregular ensembles are HAMMING1 only");
      }
      return build_dregular(q.p, q.degree, lambda);
    case GraphClass::kEdgeBounded:
      if (spec.kind != EnsembleKind::kHamming1) {
        throw ArgumentError("edge-bounded ensembles are HAMMING1 only");
      }
      return build_edge_bounded(q.p, q.max_edges, lambda);
  }
  throw ArgumentError("unknown graph class");
}

EnsembleSpec parse_ensemble_spec(const json& j) {
  if (!j.is_object()) throw ArgumentError("config: inline ensemble must be an object");
  EnsembleSpec s;
  s.graph_class = parse_graph_class(field<std::string>(j, "class"));
  const bool hamming_only =
      s.graph_class == GraphClass::kDRegular || s.graph_class == GraphClass::kEdgeBounded;
  s.kind = parse_ensemble_kind(
      field_or<std::string>(j, "kind", hamming_only ? "HAMMING1" : "CONNECTIVITY"));
  s.params.p = field<int>(j, "p");
  s.params.eta = field_or<int>(j, "eta", 0);
  s.params.gamma = field_or<int>(j, "gamma", 0);
  s.params.girth = field_or<int>(j, "g", 0);
  s.params.degree = field_or<int>(j, "d", 0);
  s.params.max_edges = field_or<int>(j, "k", 0);
  s.params.nu = field_or<double>(j, "nu", 0.0);
  return s;
}

std::string_view to_string(ErrorMetric m) { return m == ErrorMetric::kAvg ? "AVG" : "MAX"; }

ErrorMetric parse_error_metric(std::string_view s) {
  if (s == "AVG" || s == "avg") return ErrorMetric::kAvg;
  if (s == "MAX" || s == "max") return ErrorMetric::kMax;
  throw ArgumentError("unknown error metric '" + std::string(s) + "'");
}

ExperimentConfig parse_experiment_config(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ArgumentError("config: top level must be an object");
  ExperimentConfig cfg;
  if (!j.contains("ensemble")) throw ArgumentError("config: missing field 'ensemble'");
  const json& ens = j.at("ensemble");
  if (ens.is_string()) {
    std::filesystem::path path = ens.get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    cfg.ensemble_path = path.lexically_normal().string();
  } else {
    cfg.inline_spec = parse_ensemble_spec(ens);
  }
  if (j.contains("lambda")) cfg.lambda = field<double>(j, "lambda");
  if (cfg.inline_spec && !cfg.lambda) throw ArgumentError("config: inline ensembles need 'lambda'");

  const auto sizes = field<std::vector<long long>>(j, "sample_sizes");
  if (sizes.empty()) throw ArgumentError("config: 'sample_sizes' is empty");
  for (long long n : sizes) {
    if (n < 1) throw ArgumentError("config: every sample size must be >= 1");
    cfg.sample_sizes.push_back(static_cast<std::size_t>(n));
  }
  const long long trials = field<long long>(j, "trials");
  if (trials < 1) throw ArgumentError("config: 'trials' must be >= 1");
  cfg.trials = static_cast<std::size_t>(trials);
  cfg.seed = field<std::uint64_t>(j, "seed");
  const std::string decoder = field_or<std::string>(j, "decoder", "ML_EXACT");
  if (decoder != "ML_EXACT") throw ArgumentError("config: unknown decoder '" + decoder + "'");
  cfg.metric = parse_error_metric(field_or<std::string>(j, "metric", "AVG"));
  const long long threads = field_or<long long>(j, "threads", 1);
  if (threads < 1) throw ArgumentError("config: 'threads' must be >= 1");
  cfg.threads = static_cast<unsigned>(threads);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& err) {
    throw ParseError(path + ": " + err.what(), 0);
  }
  return parse_experiment_config(j, std::filesystem::path(path).parent_path().string());
}

MLDecoder::MLDecoder(std::vector<Graph> candidates, double lambda, const EnumerationLimits& limits)
    : candidates_(std::move(candidates)), lambda_(lambda) {
  if (candidates_.empty()) throw ArgumentError("ML decoder needs at least one candidate");
  const int p = candidates_.front().num_vertices();
  log_partitions_.reserve(candidates_.size());
  for (const Graph& g : candidates_) {
    if (g.num_vertices() != p) {
      throw DimensionError("ML decoder: candidates have p=" + std::to_string(p) + " and p=" +
                           std::to_string(g.num_vertices()));
    }
    log_partitions_.push_back(log_partition(IsingModel(g, lambda), limits));
  }
}

std::vector<double> MLDecoder::log_likelihoods(const SampleSet& samples) const {
  const int p = candidates_.front().num_vertices();
  if (samples.num_vertices() != p) {
    throw DimensionError("ML decoder: samples have p=" + std::to_string(samples.num_vertices()) +
                         ", candidates p=" + std::to_string(p));
  }
  // log f_G(X^n) = lambda sum_{(s,t) in E} sum_i x_s x_t - n log Z_G.
  const std::vector<std::int64_t> stats = pair_statistics(samples);
  const double n = static_cast<double>(samples.num_samples());
  std::vector<double> out(candidates_.size());
  for (std::size_t j = 0; j < candidates_.size(); ++j) {
    std::int64_t agree = 0;
    for (const Edge& e : candidates_[j].edges()) {
      agree += stats[static_cast<std::size_t>(e.u) * p + e.v];
    }
    out[j] = lambda_ * static_cast<double>(agree) - n * log_partitions_[j];
  }
  return out;
}

std::size_t MLDecoder::decode(const SampleSet& samples) const {
  const std::vector<double> ll = log_likelihoods(samples);
  std::size_t best = 0;
  for (std::size_t j = 1; j < ll.size(); ++j) {
    if (ll[j] > ll[best]) best = j;
  }
  return best;
}

std::size_t ml_decode(std::span<const Graph> candidates, const SampleSet& samples, double lambda,
                      const EnumerationLimits& limits) {
  return MLDecoder(std::vector<Graph>(candidates.begin(), candidates.end()), lambda, limits)
      .decode(samples);
}

BinomialInterval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z) {
  if (trials == 0) throw ArgumentError("Wilson interval needs at least one trial");
  if (errors > trials) throw ArgumentError("Wilson interval: errors exceed trials");
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (ph + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
  // The endpoints are exactly 0 at zero errors and 1 at all errors; rounding
  // would otherwise leave them a few ulps inside.
  return {errors == 0 ? 0.0 : std::max(0.0, centre - half),
          errors == trials ? 1.0 : std::min(1.0, centre + half)};
}

double wilson_standard_error(std::uint64_t errors, std::uint64_t trials) {
  const BinomialInterval ci = wilson_interval(errors, trials, 1.0);
  return (ci.high - ci.low) / 2.0;
}

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers with fixed
// contiguous chunks; body must only write to slot i of its output.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ExperimentResult run_experiment(const HardEnsemble& e, const ExperimentConfig& cfg,
                                const EnumerationLimits& limits) {
  if (cfg.sample_sizes.empty()) throw ArgumentError("experiment needs at least one sample size");
  if (cfg.trials < 1) throw ArgumentError("experiment needs at least one trial");
  if (e.members.size() < 2) throw ArgumentError("experiment needs at least two hypotheses");
  const std::size_t count = e.members.size();

  // Capacity problems surface here, before validation would turn them into
  // violations.
  const MLDecoder decoder(e.members, e.lambda, limits);
  std::vector<ExactSampler> samplers;
  samplers.reserve(count);
  for (const Graph& g : e.members) samplers.emplace_back(IsingModel(g, e.lambda), limits);

  ValidationOptions opts;
  opts.limits = limits;
  opts.kl_check_max_p = e.num_vertices();
  const ValidationReport audit = validate_ensemble(e, opts);
  if (!audit.ok()) {
    const Violation& v = audit.violations.front();
    throw ArgumentError("ensemble failed validation (" + v.check + "): " + v.detail);
  }

  ExperimentResult r;
  r.graph_class = to_string(e.graph_class);
  r.kind = to_string(e.kind);
  r.p = e.num_vertices();
  r.lambda = e.lambda;
  r.hypotheses = count;
  r.rho_certified = e.rho;
  r.rho_exact = audit.max_kl_to_center;
  r.metric = cfg.metric;
  r.seed = cfg.seed;

  for (std::size_t i = 0; i < cfg.sample_sizes.size(); ++i) {
    const std::size_t n = cfg.sample_sizes[i];
    const auto start = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.n = n;
    row.trials = cfg.trials;
    if (cfg.metric == ErrorMetric::kAvg) {
      std::vector<std::uint8_t> wrong(cfg.trials, 0);
      parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        SplitMix64 rng(derive_seed(cfg.seed, {i, t}));
        const std::size_t truth = rng.below(count);
        wrong[t] = decoder.decode(samplers[truth].sample(n, rng.next())) != truth;
      });
      for (std::uint8_t w : wrong) row.errors += w;
    } else {
      std::vector<std::uint8_t> wrong(count * cfg.trials, 0);
      parallel_for(wrong.size(), cfg.threads, [&](std::size_t k) {
        const std::size_t truth = k / cfg.trials;
        const std::size_t t = k % cfg.trials;
        const std::uint64_t seed = derive_seed(cfg.seed, {i, truth, t});
        wrong[k] = decoder.decode(samplers[truth].sample(n, seed)) != truth;
      });
      for (std::size_t j = 0; j < count; ++j) {
        std::uint64_t errs = 0;
        for (std::size_t t = 0; t < cfg.trials; ++t) errs += wrong[j * cfg.trials + t];
        if (errs > row.errors || j == 0) {
          row.errors = errs;
          row.worst_hypothesis = j;
        }
      }
    }
    row.p_hat = static_cast<double>(row.errors) / static_cast<double>(row.trials);
    const BinomialInterval ci = wilson_interval(row.errors, row.trials);
    row.ci_low = ci.low;
    row.ci_high = ci.high;
    const double nd = static_cast<double>(n);
    row.fano_floor_certified = fano_single_center_floor(count, r.rho_certified, nd);
    row.fano_floor_exact = fano_single_center_floor(count, r.rho_exact, nd);
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.rows.push_back(row);
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const EnumerationLimits& limits) {
  HardEnsemble e;
  if (!cfg.ensemble_path.empty()) {
    e = read_ensemble(cfg.ensemble_path);
    if (cfg.lambda && *cfg.lambda != e.lambda) {
      throw ArgumentError("config lambda " + format_number(*cfg.lambda) +
                          " differs from the ensemble's lambda " + format_number(e.lambda));
    }
  } else if (cfg.inline_spec) {
    if (!cfg.lambda) throw ArgumentError("inline ensembles need a lambda");
    e = build_ensemble(*cfg.inline_spec, *cfg.lambda);
  } else {
    throw ArgumentError("config names no ensemble");
  }
  return run_experiment(e, cfg, limits);
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_csv(const ExperimentResult& r) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const ExperimentRow& row : r.rows) {
    os << row.n << ',' << row.trials << ',' << row.errors << ',' << format_number(row.p_hat) << ','
       << format_number(row.ci_low) << ',' << format_number(row.ci_high) << ','
       << format_number(row.fano_floor_certified) << ',' << format_number(row.fano_floor_exact)
       << '\n';
  }
  return os.str();
}

json to_json(const ExperimentResult& r) {
  json rows = json::array();
  for (const ExperimentRow& row : r.rows) {
    json item = {{"n", row.n},
                 {"trials", row.trials},
                 {"errors", row.errors},
                 {"p_hat", row.p_hat},
                 {"ci_low", row.ci_low},
                 {"ci_high", row.ci_high},
                 {"fano_floor_certified", row.fano_floor_certified},
                 {"fano_floor_exact", row.fano_floor_exact}};
    if (r.metric == ErrorMetric::kMax) item["worst_hypothesis"] = row.worst_hypothesis;
    rows.push_back(std::move(item));
  }
  return {{"class", r.graph_class},
          {"kind", r.kind},
          {"p", r.p},
          {"lambda", r.lambda},
          {"hypotheses", r.hypotheses},
          {"rho_certified", r.rho_certified},
          {"rho_exact", r.rho_exact},
          {"metric", to_string(r.metric)},
          {"decoder", "ML_EXACT"},
          {"seed", r.seed},
          {"confidence_interval", "wilson-95"},
          {"rows", rows}};
}

}  // namespace isinglb
