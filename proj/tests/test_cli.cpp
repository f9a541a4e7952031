#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "isinglb/bounds.hpp"
#include "isinglb/cli.hpp"
#include "isinglb/ensembles.hpp"
#include "isinglb/graph.hpp"
#include "scratch.hpp"

using namespace isinglb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli_main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json run_json(const std::vector<std::string>& args) {
  const Run r = run(args);
  INFO(r.err);
  REQUIRE(r.code == kExitOk);
  return json::parse(r.out);
}

/// Sets ISING_LB_MAX_P for one scope.
struct CapGuard {
  explicit CapGuard(const char* value) { ::setenv("ISING_LB_MAX_P", value, 1); }
  ~CapGuard() { ::unsetenv("ISING_LB_MAX_P"); }
};

std::filesystem::path edge_file(const std::filesystem::path& root) {
  std::filesystem::create_directories(root);
  const auto path = root / "edge.el";
  scratch::spit(path, "2\n0 1\n");
  return path;
}

}  // namespace

TEST_CASE("exact corr on a single edge is tanh(lambda)") {
  const auto g = edge_file(scratch::dir("cli_corr")).string();
  const json j = run_json({"exact", "corr", "--graph", g, "--lambda", "1"});
  CHECK_THAT(j["correlations"][0][1].get<double>(), WithinAbs(std::tanh(1.0), 1e-15));
  const json pair = run_json({"exact", "corr", "--graph", g, "--lambda", "1", "--pair", "1", "0"});
  CHECK_THAT(pair["correlation"].get<double>(), WithinAbs(std::tanh(1.0), 1e-15));

  const Run csv = run({"--format", "csv", "exact", "corr", "--graph", g, "--lambda", "1"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.rfind("s,t,correlation\n0,1,0.76159415595576", 0) == 0);
  const Run trailing = run({"exact", "corr", "--graph", g, "--lambda", "1", "--format", "csv"});
  CHECK(trailing.out == csv.out);
}

TEST_CASE("exact z and kl") {
  const auto root = scratch::dir("cli_kl");
  const auto g = edge_file(root).string();
  scratch::spit(root / "empty.el", "2\n");
  const json z = run_json({"exact", "z", "--graph", g, "--lambda", "0.5"});
  CHECK_THAT(z["log_partition"].get<double>(),
             WithinRel(std::log(4.0 * std::cosh(0.5)), 1e-14));
  const json kl = run_json(
      {"exact", "kl", "--graph1", g, "--graph2", (root / "empty.el").string(), "--lambda", "0.5"});
  CHECK_THAT(kl["kl_forward"].get<double>(),
             WithinAbs(0.5 * std::tanh(0.5) - std::log(std::cosh(0.5)), 1e-14));
  CHECK_THAT(kl["symmetric"].get<double>(),
             WithinAbs(kl["symmetric_edge_form"].get<double>(), 1e-12));
}

TEST_CASE("bound subcommands print the library reports") {
  const json pr = run_json({"bound", "path-restricted", "--p", "1000", "--eta", "3", "--lambda",
                            "0.2", "--delta", "0.1"});
  CHECK(pr == to_json(threshold_path_restricted(1000, 3, 0.2, 0.1)));
  const json dr = run_json({"bound", "dregular", "--p", "500", "--d", "10", "--lambda", "0.3"});
  CHECK(dr == to_json(threshold_dregular(500, 10, 0.3, 0.5)));
  const json h1 = run_json({"bound", "hamming1", "--lambda", "0.7"});
  CHECK(h1["kl_upper_bound"].get<double>() == kl_upper_bound_hamming1(0.7));
  const json ld = run_json({"bound", "ld-corr", "--lambda", "0.4", "--l", "2", "--d", "3"});
  CHECK(ld["corr_lower_bound"].get<double>() == corr_lower_bound_ld(0.4, 2, 3));
  const json fano = run_json(
      {"bound", "fano", "--count", "18", "--rho", "0.05", "--delta", "0.3", "--n", "10"});
  CHECK(fano["floor"].get<double>() == fano_single_center_floor(18, 0.05, 10));
  CHECK(fano["form"] == "single-center");

  CHECK(run({"bound", "fano", "--count", "18", "--rho", "0.1", "--p", "4"}).code == kExitUsage);
  CHECK(run({"bound", "edge-bounded", "--p", "20", "--k", "5", "--lambda", "1"}).code ==
        kExitUsage);
  CHECK(run({"bound", "dregular", "--p", "500", "--d", "10", "--lambda", "0.3", "--delta", "1"})
            .code == kExitUsage);
}

TEST_CASE("construct writes a manifest and one file per member") {
  const auto out = scratch::dir("cli_construct");
  const json m = run_json({"construct", "dregular", "--p", "12", "--d", "3", "--out", out.string()});
  CHECK(m["counts"]["members"] == 18);
  std::size_t members = 0;
  for (const auto& entry : std::filesystem::directory_iterator(out)) {
    members += entry.path().filename().string().rfind("member_", 0) == 0;
  }
  CHECK(members == 18);
  CHECK(std::filesystem::exists(out / "manifest.json"));
  CHECK(std::filesystem::exists(out / "center.edgelist"));
  CHECK(read_ensemble(out.string()) == build_dregular(12, 3, 0.5));

  const json v = run_json({"verify", "ensemble", "--dir", out.string()});
  CHECK(v["ok"] == true);
  CHECK(v["violations"].empty());

  // A member replaced by the centre breaks the Hamming-1 structure.
  std::filesystem::copy_file(out / "center.edgelist", out / "member_0.edgelist",
                             std::filesystem::copy_options::overwrite_existing);
  const Run bad = run({"verify", "ensemble", "--dir", out.string()});
  CHECK(bad.code == kExitFailure);
  CHECK(json::parse(bad.out)["ok"] == false);

  CHECK(run({"construct", "nonsense", "--p", "12", "--out", out.string()}).code == kExitUsage);
  CHECK(run({"construct", "dregular", "--p", "12", "--d", "3", "--kind", "CONNECTIVITY", "--out",
             out.string()})
            .code == kExitUsage);
}

TEST_CASE("verify ld-connect reports a certificate and enforces --d") {
  const auto root = scratch::dir("cli_ld");
  std::filesystem::create_directories(root);
  // Three internally disjoint paths of length 2 between 0 and 4.
  scratch::spit(root / "g.el", "5\n0 1\n1 4\n0 2\n2 4\n0 3\n3 4\n");
  const std::string g = (root / "g.el").string();
  const json j = run_json({"verify", "ld-connect", "--graph", g, "--a", "0", "--b", "4", "--l", "2"});
  CHECK(j["paths"] == 3);
  CHECK(j["certificate_valid"] == true);
  CHECK(run({"verify", "ld-connect", "--graph", g, "--a", "0", "--b", "4", "--l", "2", "--d", "4"})
            .code == kExitFailure);
  CHECK(run({"verify", "ld-connect", "--graph", g, "--a", "0", "--b", "4", "--l", "2", "--budget",
             "1"})
            .code == kExitCapacity);
  CHECK(run({"verify", "ld-connect", "--graph", g, "--a", "0", "--b", "0", "--l", "2"}).code ==
        kExitUsage);
}

TEST_CASE("exit codes for usage and capacity errors") {
  const auto g = edge_file(scratch::dir("cli_codes")).string();
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"exact"}).code == kExitUsage);
  CHECK(run({"exact", "z", "--graph", g}).code == kExitUsage);
  CHECK(run({"exact", "z", "--graph", g, "--lambda", "abc"}).code == kExitUsage);
  CHECK(run({"exact", "z", "--graph", g, "--lambda", "-1"}).code == kExitUsage);
  CHECK(run({"exact", "z", "--graph", "/nonexistent/g.el", "--lambda", "1"}).code == kExitUsage);
  CHECK(run({"--format", "xml", "exact", "z", "--graph", g, "--lambda", "1"}).code == kExitUsage);
  CHECK(run({"er", "bound", "--p", "100", "--c", "32", "--lambda", "1", "--p-avg", "0.5"}).code ==
        kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  {
    const CapGuard cap("1");
    const Run r = run({"exact", "z", "--graph", g, "--lambda", "1"});
    CHECK(r.code == kExitCapacity);
    CHECK(r.err.find("cap") != std::string::npos);
  }
  {
    const CapGuard cap("zero");
    CHECK(run({"exact", "z", "--graph", g, "--lambda", "1"}).code == kExitUsage);
  }
}

TEST_CASE("ISING_LB_MAX_P raises and lowers both caps") {
  CHECK(limits_from_environment().max_inference_vertices == EnumerationLimits{}.max_inference_vertices);
  const CapGuard cap("26");
  const EnumerationLimits l = limits_from_environment();
  CHECK(l.max_inference_vertices == 26);
  CHECK(l.max_sampling_vertices == 26);
}

TEST_CASE("er subcommands") {
  const json b = run_json({"er", "bound", "--p", "100", "--c", "32", "--lambda", "0.5"});
  CHECK_THAT(b["n2"].get<double>(), WithinRel(21.9312503498189770296009438119718557318, 1e-13));
  CHECK(b["asymptotic_slack_dropped"] == true);
  const json r = run_json({"er", "regime", "--p", "100", "--c", "50", "--lambda", "0.2"});
  CHECK(r["regime"] == "HIGH_LAMBDA");
  const json d = run_json({"er", "diagnose", "--p", "30", "--c", "10", "--seed", "3"});
  CHECK(d["pairs"] == 100);
  CHECK(run({"er", "diagnose", "--c", "10"}).code == kExitUsage);
  const Run s = run({"er", "sample", "--p", "20", "--c", "5", "--seed", "8"});
  CHECK(parse_graph(s.out).num_vertices() == 20);
}

TEST_CASE("sampling and experiment commands are byte-for-byte reproducible") {
  const auto root = scratch::dir("cli_determinism");
  std::filesystem::create_directories(root);
  scratch::spit(root / "tri.el", "3\n0 1\n1 2\n0 2\n");
  const std::string tri = (root / "tri.el").string();
  for (const char* method : {"exact", "gibbs"}) {
    for (const char* name : {"a.txt", "b.txt"}) {
      REQUIRE(run({"exact", "sample", "--graph", tri, "--lambda", "0.4", "--n", "50", "--seed",
                   "17", "--method", method, "--out", (root / name).string()})
                  .code == kExitOk);
    }
    CHECK(scratch::slurp(root / "a.txt") == scratch::slurp(root / "b.txt"));
  }

  for (const char* name : {"g1.el", "g2.el"}) {
    run({"er", "sample", "--p", "40", "--c", "6", "--seed", "5", "--out", (root / name).string()});
  }
  CHECK(scratch::slurp(root / "g1.el") == scratch::slurp(root / "g2.el"));

  scratch::spit(root / "cfg.json",
                R"({"ensemble": {"class": "dregular", "p": 8, "d": 3}, "lambda": 0.3,
                    "sample_sizes": [2, 6], "trials": 50, "seed": 12, "threads": 2})");
  for (const char* name : {"r1.csv", "r2.csv"}) {
    const Run r = run({"--format", "csv", "simulate", "--config", (root / "cfg.json").string(),
                       "--out", (root / name).string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.empty());
    CHECK(r.err.find("wall_seconds") != std::string::npos);
  }
  const std::string csv = scratch::slurp(root / "r1.csv");
  CHECK(csv == scratch::slurp(root / "r2.csv"));
  CHECK(csv.rfind("n,trials,errors,p_hat,ci_low,ci_high,fano_floor_certified,fano_floor_exact\n",
                  0) == 0);
  const json j = run_json({"simulate", "--config", (root / "cfg.json").string(), "--threads", "1"});
  CHECK(j["confidence_interval"] == "wilson-95");
  CHECK(j["rows"].size() == 2);
}
