#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <vector>

#include "isinglb/ensembles.hpp"
#include "isinglb/error.hpp"
#include "isinglb/harness.hpp"
#include "isinglb/samples.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using namespace isinglb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

ExperimentConfig config(std::vector<std::size_t> sizes, std::size_t trials, std::uint64_t seed,
                        ErrorMetric metric = ErrorMetric::kAvg) {
  ExperimentConfig cfg;
  cfg.sample_sizes = std::move(sizes);
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.metric = metric;
  return cfg;
}

}  // namespace

TEST_CASE("Wilson interval matches high-precision evaluation") {
  // mpmath, 30 digits.
  const BinomialInterval a = wilson_interval(3, 10);
  CHECK_THAT(a.low, WithinRel(0.107791267406301033916036517513904, 1e-13));
  CHECK_THAT(a.high, WithinRel(0.603221852538854647894375853303428, 1e-13));
  const BinomialInterval b = wilson_interval(0, 20);
  CHECK(b.low == 0.0);
  CHECK_THAT(b.high, WithinRel(0.161125158052819354664367409458693, 1e-13));
  const BinomialInterval c = wilson_interval(281, 1000, 1.0);
  CHECK_THAT(wilson_standard_error(281, 1000),
             WithinRel((0.295427406347865814089264906749493 - 0.267010156089696623473172655687998) / 2,
                       1e-12));
  CHECK_THAT(c.low, WithinRel(0.267010156089696623473172655687998, 1e-13));
  CHECK_THROWS_AS(wilson_interval(0, 0), ArgumentError);
  CHECK_THROWS_AS(wilson_interval(5, 4), ArgumentError);
}

TEST_CASE("Wilson interval contains p_hat, stays in [0,1] and mirrors") {
  for (std::uint64_t n : {1, 7, 50, 1000}) {
    for (std::uint64_t e = 0; e <= n; e += std::max<std::uint64_t>(1, n / 13)) {
      const BinomialInterval ci = wilson_interval(e, n);
      const double ph = static_cast<double>(e) / static_cast<double>(n);
      CHECK(ci.low >= 0.0);
      CHECK(ci.high <= 1.0);
      CHECK(ci.low <= ph);
      CHECK(ci.high >= ph);
      const BinomialInterval mirror = wilson_interval(n - e, n);
      CHECK_THAT(ci.low, WithinAbs(1.0 - mirror.high, 1e-12));
    }
  }
}

TEST_CASE("ML decoder agrees with a naive likelihood oracle") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 3 + static_cast<int>(rng.below(5));
    const double lambda = 0.2 + rng.uniform();
    std::vector<Graph> candidates;
    for (int j = 0; j < 4; ++j) candidates.push_back(oracle::random_graph(rng, p, 0.5));
    const SampleSet s = sample_exact(IsingModel(candidates[rng.below(4)], lambda), 25, rng.next());
    const MLDecoder dec(candidates, lambda);
    const std::vector<double> ll = dec.log_likelihoods(s);
    std::size_t best = 0;
    long double best_ll = -INFINITY;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      long double total = 0.0L;
      const long double lz = oracle::log_z(candidates[j], lambda);
      for (std::size_t i = 0; i < s.num_samples(); ++i) {
        total += lambda * agreement(candidates[j], s.sample(i)) - lz;
      }
      CHECK_THAT(ll[j], WithinRel(static_cast<double>(total), 1e-12));
      CHECK_THAT(ll[j], WithinRel(log_likelihood(IsingModel(candidates[j], lambda), s), 1e-12));
      if (total > best_ll + 1e-9L) {
        best_ll = total;
        best = j;
      }
    }
    CHECK(dec.decode(s) == best);
  }
}

TEST_CASE("ML decoder tie rule and errors") {
  const Graph path(3, {{0, 1}, {1, 2}});
  const Graph other(3, {{0, 2}});
  const SampleSet none(3, 0, {}, 0, "splitmix64");
  CHECK(ml_decode(std::vector<Graph>{other, path}, none, 0.5) == 0);
  const SampleSet some = sample_exact(IsingModel(path, 0.5), 20, 4);
  CHECK(ml_decode(std::vector<Graph>{path, path, other}, some, 0.5) == 0);
  CHECK_THROWS_AS(MLDecoder({path, Graph(4, {})}, 0.5), DimensionError);
  CHECK_THROWS_AS(MLDecoder({}, 0.5), ArgumentError);
  EnumerationLimits tiny;
  tiny.max_inference_vertices = 2;
  CHECK_THROWS_AS(MLDecoder({path}, 0.5, tiny), CapacityError);
  CHECK_THROWS_AS(MLDecoder({path}, 0.5).decode(SampleSet(2, 0, {}, 0, "x")), DimensionError);
}

TEST_CASE("separated hypotheses decode correctly") {
  const HardEnsemble e = build_dregular(8, 3, 2.0);
  const MLDecoder dec(e.members, e.lambda);
  int correct = 0;
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    for (std::uint64_t t = 0; t < 10; ++t) {
      correct += dec.decode(sample_exact(IsingModel(e.members[i], e.lambda), 2000, t * 97 + i)) == i;
    }
  }
  CHECK(correct >= static_cast<int>(e.members.size()) * 10 * 95 / 100);
}

TEST_CASE("indistinguishable hypotheses give chance-level error") {
  const HardEnsemble e = build_dregular(12, 3, 1e-6);
  const ExperimentResult r = run_experiment(e, config({1, 5}, 2000, 3));
  const double chance = 1.0 - 1.0 / static_cast<double>(e.members.size());
  for (const ExperimentRow& row : r.rows) {
    CHECK(std::abs(row.p_hat - chance) <= 4.0 * wilson_standard_error(row.errors, row.trials));
  }
}

TEST_CASE("error vanishes far above the threshold") {
  const HardEnsemble e = build_dregular(8, 3, 0.5);
  const ExperimentResult r = run_experiment(e, config({3000}, 100, 5));
  CHECK(r.rows[0].errors <= 2);
}

TEST_CASE("empirical error respects the Fano floor below the threshold") {
  const HardEnsemble e = build_dregular(12, 3, 0.5);
  const ExperimentResult r = run_experiment(e, config({1, 4, 8, 14, 20, 26}, 500, 11));
  CHECK(r.hypotheses == 18);
  CHECK(r.rho_exact <= r.rho_certified);
  for (const ExperimentRow& row : r.rows) {
    CHECK(row.fano_floor_exact >= row.fano_floor_certified);
    CHECK(row.p_hat >= row.fano_floor_exact - 3.0 * wilson_standard_error(row.errors, row.trials));
  }
}

TEST_CASE("worst-case error dominates average error") {
  const HardEnsemble e = build_dregular(8, 3, 0.4);
  const ExperimentResult avg = run_experiment(e, config({2, 10, 40}, 600, 21));
  const ExperimentResult max = run_experiment(e, config({2, 10, 40}, 100, 21, ErrorMetric::kMax));
  for (std::size_t i = 0; i < avg.rows.size(); ++i) {
    CHECK(max.rows[i].ci_high >= avg.rows[i].ci_low);
    CHECK(max.rows[i].worst_hypothesis < e.members.size());
  }
}

TEST_CASE("experiments are reproducible and independent of the thread count") {
  const HardEnsemble e = build_dregular(8, 3, 0.2);
  ExperimentConfig cfg = config({5, 10}, 200, 99);
  const std::string one = format_csv(run_experiment(e, cfg));
  cfg.threads = 4;
  const ExperimentResult four = run_experiment(e, cfg);
  CHECK(format_csv(four) == one);
  CHECK(four.rows[0].p_hat > 0.2);
  cfg.seed = 100;
  CHECK(format_csv(run_experiment(e, cfg)) != one);

  cfg.metric = ErrorMetric::kMax;
  CHECK(to_json(run_experiment(e, cfg)).dump() == to_json(run_experiment(e, cfg)).dump());
}

TEST_CASE("CSV layout") {
  const HardEnsemble e = build_dregular(8, 3, 0.3);
  const std::string csv = format_csv(run_experiment(e, config({3}, 10, 1)));
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n3,10,", 0) == 0);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("experiments reject invalid or oversized ensembles") {
  HardEnsemble e = build_dregular(8, 3, 0.5);
  EnumerationLimits small;
  small.max_inference_vertices = 6;
  CHECK_THROWS_AS(run_experiment(e, config({1}, 1, 0), small), CapacityError);
  e.members[1] = e.members[0];
  CHECK_THROWS_AS(run_experiment(e, config({1}, 1, 0)), ArgumentError);
}

TEST_CASE("config parsing") {
  const json good = {{"ensemble", {{"class", "dregular"}, {"p", 8}, {"d", 3}}},
                     {"lambda", 0.5},
                     {"sample_sizes", {1, 2}},
                     {"trials", 3},
                     {"seed", 4}};
  const ExperimentConfig cfg = parse_experiment_config(good);
  REQUIRE(cfg.inline_spec);
  CHECK(cfg.inline_spec->graph_class == GraphClass::kDRegular);
  CHECK(cfg.inline_spec->kind == EnsembleKind::kHamming1);
  CHECK(cfg.metric == ErrorMetric::kAvg);
  CHECK(run_experiment(cfg).rows.size() == 2);

  for (const char* key : {"lambda", "sample_sizes", "trials", "seed", "ensemble"}) {
    json bad = good;
    bad.erase(key);
    CHECK_THROWS_AS(parse_experiment_config(bad), ArgumentError);
  }
  json zero_n = good;
  zero_n["sample_sizes"] = {0};
  CHECK_THROWS_AS(parse_experiment_config(zero_n), ArgumentError);
  json zero_trials = good;
  zero_trials["trials"] = 0;
  CHECK_THROWS_AS(parse_experiment_config(zero_trials), ArgumentError);
  json decoder = good;
  decoder["decoder"] = "GREEDY";
  CHECK_THROWS_AS(parse_experiment_config(decoder), ArgumentError);
  json wrong_type = good;
  wrong_type["trials"] = "many";
  CHECK_THROWS_AS(parse_experiment_config(wrong_type), ArgumentError);
}

TEST_CASE("config files resolve ensemble paths relative to themselves") {
  const auto root = scratch::dir("harness_cfg");
  std::filesystem::create_directories(root);
  write_ensemble(build_dregular(8, 3, 0.5), (root / "ens").string());
  scratch::spit(root / "cfg.json",
                R"({"ensemble": "ens", "sample_sizes": [2], "trials": 5, "seed": 1})");
  const ExperimentConfig cfg = load_experiment_config((root / "cfg.json").string());
  CHECK(cfg.ensemble_path == (root / "ens").lexically_normal().string());
  CHECK(run_experiment(cfg).hypotheses == 12);

  scratch::spit(root / "clash.json",
                R"({"ensemble": "ens", "lambda": 0.7, "sample_sizes": [2], "trials": 5, "seed": 1})");
  CHECK_THROWS_AS(run_experiment(load_experiment_config((root / "clash.json").string())),
                  ArgumentError);
  scratch::spit(root / "broken.json", "{");
  CHECK_THROWS_AS(load_experiment_config((root / "broken.json").string()), ParseError);
}
