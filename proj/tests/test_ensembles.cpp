#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "isinglb/bounds.hpp"
#include "isinglb/ensembles.hpp"
#include "isinglb/error.hpp"
#include "isinglb/paths.hpp"
#include "scratch.hpp"

using namespace isinglb;
using Catch::Matchers::WithinRel;

namespace {

constexpr auto kConn = EnsembleKind::kConnectivity;
constexpr auto kHam = EnsembleKind::kHamming1;

using scratch::slurp;

std::size_t count_checks(const ValidationReport& r, const std::string& check) {
  return static_cast<std::size_t>(std::count_if(r.violations.begin(), r.violations.end(),
                                                [&](const Violation& v) { return v.check == check; }));
}

}  // namespace

TEST_CASE("path-restricted construction") {
  const HardEnsemble conn = build_path_restricted(10, 4, 0.5, kConn);
  CHECK(conn.blocks.size() == 2);
  CHECK(conn.members.size() == 2);
  CHECK(conn.leftover_vertices == 0);
  CHECK(conn.center.num_edges() == 2 * 7);
  CHECK_THAT(conn.rho, WithinRel(1.0 / (1 + std::pow(std::cosh(1.0), 3)), 1e-14));
  for (std::size_t i = 0; i < conn.members.size(); ++i) {
    const BlockLayout& b = conn.blocks[i];
    CHECK(conn.removed_edges[i] == Edge(b.s, b.t));
    CHECK(max_disjoint_paths(conn.members[i], b.s, b.t, 2).count == 3);
    CHECK(count_simple_paths(conn.center, b.s, b.t) == 4);
  }
  CHECK(build_path_restricted(10, 4, 0.5, kHam).members.size() == 14);
  CHECK(build_path_restricted(11, 4, 0.5, kConn).leftover_vertices == 1);
  CHECK_THROWS_AS(build_path_restricted(4, 4, 0.5, kConn), ArgumentError);
  CHECK_THROWS_AS(build_path_restricted(10, 0, 0.5, kConn), ArgumentError);
  CHECK_THROWS_AS(build_path_restricted(10, 2, 0.0, kConn), ArgumentError);
}

TEST_CASE("path-restricted blocks with eta >= 3 exceed eta paths between common neighbours") {
  // Two common neighbours c, c' of an intact block are joined by
  // 2 eta - 2 simple paths, so the literal class check flags eta >= 3.
  const HardEnsemble e = build_path_restricted(10, 4, 0.5, kConn);
  CHECK(count_simple_paths(e.center, 2, 3) == 6);
  const ValidationReport r = validate_ensemble(e);
  CHECK(count_checks(r, "class") == e.members.size());
  CHECK(r.violations.size() == e.members.size());

  for (int eta : {1, 2}) {
    for (EnsembleKind kind : {kConn, kHam}) {
      const ValidationReport ok = validate_ensemble(build_path_restricted(10, eta, 0.5, kind));
      CHECK(ok.ok());
      CHECK(ok.kl_checked);
    }
  }
}

TEST_CASE("path-length construction") {
  // p = 14, nu = 0.3: alpha = floor(2.207) = 2, t_nu = (6.34 - 3) / 2 -> k = 1.
  const HardEnsemble e = build_path_length(14, 2, 2, 0.3, 0.5, kConn);
  REQUIRE(e.blocks.size() == 2);
  CHECK(e.paths_per_block == 1);
  CHECK_THAT(e.real_paths, WithinRel((std::pow(14.0, 0.7) - 3) / 2, 1e-14));
  const int k = e.paths_per_block;
  CHECK(e.blocks[0].size == k * 2 + 2 + 1);
  CHECK(e.center.num_edges() == 2u * (k * 3 + 2 * 2 - 1));
  for (const BlockLayout& b : e.blocks) CHECK(count_simple_paths(e.center, b.s, b.t, 2) == 2);
  CHECK(build_path_length(14, 2, 2, 0.3, 0.5, kHam).members.size() == 2u * (3 + 3));

  // eta = 3, gamma = 3, p = 400, nu = 0.25: alpha = 4, t_nu = (89.44 - 4) / 3 -> k = 28.
  const HardEnsemble big = build_path_length(400, 3, 3, 0.25, 0.2, kConn);
  CHECK(big.blocks.size() == 4);
  CHECK(big.paths_per_block == 28);
  CHECK(big.blocks[0].size == 28 * 3 + 3 + 1);
  CHECK(big.center.num_edges() == 4u * (28 * 4 + 2 * 3 - 1));
  for (const BlockLayout& b : big.blocks) CHECK(count_simple_paths(big.center, b.s, b.t, 3) == 3);

  CHECK_THROWS_AS(build_path_length(14, 2, 2, 0.5, 0.5, kConn), ArgumentError);
}

TEST_CASE("girth construction") {
  const HardEnsemble e = build_girth(16, 4, 3, 0.25, 0.5, kConn);
  REQUIRE(e.blocks.size() == 2);
  CHECK(e.paths_per_block == 2);
  CHECK(e.blocks[0].size == 2 * 2 + 2);
  CHECK(e.center.num_edges() == 2u * (2 * 3 + 1));
  CHECK(girth(e.center) == 4);
  CHECK(girth(e.members[0].without_edge(e.blocks[1].s, e.blocks[1].t)) == 2 * (4 - 1));
  for (const BlockLayout& b : e.blocks) CHECK(e.center.degree(b.s) == e.paths_per_block + 1);
  CHECK(build_girth(16, 4, 3, 0.25, 0.5, kHam).members.size() == 2u * (2 * 3 + 1));

  for (int g : {3, 5, 6}) {
    const HardEnsemble h = build_girth(200, g, 3, 0.4, 0.5, kConn);
    CHECK(girth(h.center) == g);
  }
  CHECK_THROWS_AS(build_girth(14, 4, 3, 0.5, 0.5, kConn), ArgumentError);
}

TEST_CASE("girth blocks with k = d paths push endpoint degree to d + 1") {
  // d_nu = min(2, 10 / 3) = 2 paths plus the direct edge.
  const HardEnsemble e = build_girth(100, 3, 2, 0.5, 0.5, kHam);
  CHECK(e.paths_per_block == 2);
  const ValidationReport r = validate_ensemble(e);
  CHECK(count_checks(r, "class") == e.members.size());
  CHECK(validate_ensemble(build_girth(16, 4, 3, 0.25, 0.5, kConn)).ok());
}

TEST_CASE("dregular construction") {
  const HardEnsemble e = build_dregular(12, 3, 0.5);
  CHECK(e.kind == kHam);
  CHECK(e.blocks.size() == 3);
  CHECK(e.members.size() == 18);
  CHECK(18 >= 12 * 3 / 4);
  for (const Graph& m : e.members) {
    int low = 0;
    for (Vertex v = 0; v < 12; ++v) low += m.degree(v) == 2;
    CHECK(low == 2);
  }
  const HardEnsemble small = build_dregular(12, 3, 0.1);
  CHECK(0.6 * std::exp(0.1) / std::exp(0.3) > 0.1 * std::tanh(0.1));
  CHECK_THAT(small.rho, WithinRel(0.1 * std::tanh(0.1), 1e-15));
  const HardEnsemble odd = build_dregular(14, 3, 0.5);
  CHECK(odd.leftover_vertices == 2);
  CHECK(odd.members.size() == 18);
  CHECK(validate_ensemble(odd).ok());
  CHECK_THROWS_AS(build_dregular(3, 3, 0.5), ArgumentError);
}

TEST_CASE("edge-bounded construction") {
  CHECK(build_edge_bounded(8, 10, 0.5).blocks[0].size == 5);
  const HardEnsemble e = build_edge_bounded(8, 9, 0.5);
  CHECK(e.blocks[0].size == 4);
  CHECK(e.members.size() == 6);
  CHECK(e.leftover_vertices == 4);
  for (const Graph& m : e.members) {
    CHECK(m.num_edges() == 5);
    CHECK(2 * m.num_edges() >= 9);
  }
  CHECK_THROWS_AS(build_edge_bounded(8, 8, 0.5), HypothesisError);
  CHECK_THROWS_AS(build_edge_bounded(4, 10, 0.5), ArgumentError);
}

TEST_CASE("member counts match the closed forms") {
  for (int p = 4; p <= 30; p += 3) {
    for (int eta = 1; 2 * (eta + 1) <= p; ++eta) {
      const int alpha = p / (eta + 1);
      CHECK(build_path_restricted(p, eta, 0.3, kConn).members.size() == std::size_t(alpha));
      CHECK(build_path_restricted(p, eta, 0.3, kHam).members.size() ==
            std::size_t(alpha * (2 * eta - 1)));
    }
    for (int d = 1; d + 1 <= p; ++d) {
      const HardEnsemble e = build_dregular(p, d, 0.3);
      CHECK(e.members.size() == std::size_t((p / (d + 1)) * (d + 1) * d / 2));
      CHECK(expected_member_count(e) == e.members.size());
    }
  }
  for (int k = 9; k <= 60; ++k) {
    const int m = largest_clique_within(k);
    const HardEnsemble e = build_edge_bounded(20, k, 0.3);
    CHECK(e.members.size() == std::size_t(m * (m - 1) / 2));
    CHECK(2 * e.members.size() >= std::size_t(k));
  }
}

TEST_CASE("fresh ensembles validate cleanly") {
  const std::vector<HardEnsemble> all{
      build_path_restricted(12, 2, 0.7, kConn), build_path_restricted(12, 2, 0.7, kHam),
      build_path_length(14, 2, 2, 0.3, 0.7, kConn), build_path_length(14, 2, 2, 0.3, 0.7, kHam),
      build_girth(16, 4, 3, 0.25, 0.7, kConn), build_girth(16, 4, 3, 0.25, 0.7, kHam),
      build_dregular(12, 3, 0.7), build_edge_bounded(8, 10, 0.7)};
  ValidationOptions opts;
  opts.kl_check_max_p = 16;
  for (const HardEnsemble& e : all) {
    const ValidationReport r = validate_ensemble(e, opts);
    INFO(to_string(e.graph_class) << " " << to_string(e.kind));
    for (const Violation& v : r.violations) INFO(v.check << ": " << v.detail);
    CHECK(r.ok());
    CHECK(r.kl_checked);
    CHECK(r.max_kl_to_center <= e.rho + 1e-9);
    CHECK(r.max_kl_to_center > 0.0);
  }
}

TEST_CASE("validation negative controls") {
  // eta = 1 blocks are single edges: D(empty || edge) = log cosh 2 > rho / 2 = 1.
  HardEnsemble halved = build_path_restricted(12, 1, 2.0, kConn);
  halved.rho /= 2;
  const ValidationReport r = validate_ensemble(halved);
  CHECK(count_checks(r, "rho") == 1);
  CHECK(count_checks(r, "kl") > 0);

  HardEnsemble dup = build_dregular(12, 3, 0.5);
  dup.members.push_back(dup.members[3]);
  dup.removed_edges.push_back(dup.removed_edges[3]);
  const ValidationReport d = validate_ensemble(dup);
  CHECK(count_checks(d, "distinct") == 1);
  CHECK(count_checks(d, "count") == 1);

  HardEnsemble wrong = build_path_restricted(12, 2, 0.5, kConn);
  wrong.members[0] = wrong.center;
  CHECK(count_checks(validate_ensemble(wrong), "distinct") == 1);

  HardEnsemble big = build_dregular(16, 3, 0.5);
  CHECK_FALSE(validate_ensemble(big).kl_checked);
}

TEST_CASE("single-centre Fano threshold recovers the theorem terms") {
  // log|T| / rho dominates the theorem's connectivity term when |T| is at
  // least the theorem's size argument and rho is the certified radius.
  for (double lambda : {0.2, 0.8, 1.5}) {
    for (double delta : {0.0, 0.3}) {
      const HardEnsemble pr = build_path_restricted(40, 3, lambda, kConn);
      const double fano = fano_single_center_threshold({pr.members.size(), pr.rho, delta}).value +
                          std::log(2.0) / pr.rho;
      const BoundReport t1 = threshold_path_restricted(40, 3, lambda, delta);
      CHECK(fano >= (1 - delta) * t1.terms[1].value * (1 - 1e-12));

      const HardEnsemble dr = build_dregular(40, 4, lambda);
      const double fano_d = fano_single_center_threshold({dr.members.size(), dr.rho, delta}).value +
                            std::log(2.0) / dr.rho;
      CHECK(fano_d >= threshold_dregular(40, 4, lambda, delta).n_threshold * (1 - 1e-12));

      const HardEnsemble eb = build_edge_bounded(20, 30, lambda);
      const double fano_e = fano_single_center_threshold({eb.members.size(), eb.rho, delta}).value +
                            std::log(2.0) / eb.rho;
      CHECK(fano_e >= threshold_edge_bounded(20, 30, lambda, delta).n_threshold * (1 - 1e-12));
    }
  }
}

TEST_CASE("ensemble directories are deterministic and round-trip") {
  const auto a = scratch::dir("ens_a");
  const auto b = scratch::dir("ens_b");
  write_ensemble(build_girth(16, 4, 3, 0.25, 0.5, kHam), a.string());
  write_ensemble(build_girth(16, 4, 3, 0.25, 0.5, kHam), b.string());
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    ++files;
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
  CHECK(files == 2 * 7 + 2);
  const HardEnsemble back = read_ensemble(a.string());
  CHECK(back == build_girth(16, 4, 3, 0.25, 0.5, kHam));
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["class_tag"] == "GIRTH");
  CHECK(manifest["kind"] == "HAMMING1");
  CHECK(manifest["counts"]["members"] == 14);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  CHECK_THROWS_AS(read_ensemble(a.string()), ArgumentError);
}

TEST_CASE("class and kind names parse") {
  CHECK(parse_graph_class("path-restricted") == GraphClass::kPathRestricted);
  CHECK(parse_graph_class("EDGE_BOUNDED") == GraphClass::kEdgeBounded);
  CHECK(parse_ensemble_kind("hamming1") == kHam);
  CHECK_THROWS_AS(parse_graph_class("tree"), ArgumentError);
}
