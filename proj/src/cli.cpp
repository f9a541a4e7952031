#include "isinglb/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "isinglb/bounds.hpp"
#include "isinglb/ensembles.hpp"
#include "isinglb/er_bounds.hpp"
#include "isinglb/error.hpp"
#include "isinglb/graph.hpp"
#include "isinglb/harness.hpp"
#include "isinglb/paths.hpp"
#include "isinglb/samples.hpp"

namespace isinglb {

namespace {

using nlohmann::json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string csv_number(double x) { return std::isfinite(x) ? format_number(x) : ""; }

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ArgumentError("cannot write '" + path + "'");
  file << text;
  if (!file) throw ArgumentError("failed writing '" + path + "'");
}

std::string report_csv(const BoundReport& r) {
  std::ostringstream os;
  os << "bound,delta,n_threshold,log_n_threshold,winning_term,overflow,vacuous\n"
     << r.bound << ',' << format_number(r.delta) << ',' << csv_number(r.n_threshold) << ','
     << csv_number(r.log_n_threshold) << ',' << r.winner().name << ',' << r.overflow << ','
     << r.vacuous << '\n';
  return os.str();
}

json violations_json(const ValidationReport& v) {
  json list = json::array();
  for (const Violation& x : v.violations) {
    list.push_back({{"check", x.check},
                    {"member", x.member ? json(*x.member) : json(nullptr)},
                    {"detail", x.detail}});
  }
  return list;
}

/// Everything the subcommand callbacks share. Each leaf command stores its
/// work in `action`; it runs after parsing so library errors are not mixed
/// with argument errors.
struct Context {
  std::ostream& out;
  std::ostream& err;
  EnumerationLimits limits;
  std::string format = "json";
  std::function<int()> action;

  bool csv() const { return format == "csv"; }

  int emit(const json& j, const std::string& csv_text) {
    if (csv()) {
      out << csv_text;
    } else {
      out << j.dump(2) << '\n';
    }
    return kExitOk;
  }
};

CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& help) {
  CLI::App* sub = parent->add_subcommand(name, help);
  sub->fallthrough();
  return sub;
}

CLI::App* group(CLI::App* parent, const std::string& name, const std::string& help) {
  CLI::App* sub = leaf(parent, name, help);
  sub->require_subcommand(1);
  return sub;
}

void add_exact(CLI::App& app, Context& ctx) {
  CLI::App* exact = group(&app, "exact", "Brute-force Ising inference");

  struct ZArgs {
    std::string graph;
    double lambda = 0.0;
  };
  auto z_args = std::make_shared<ZArgs>();
  CLI::App* z = leaf(exact, "z", "log partition function");
  z->add_option("--graph", z_args->graph, "edge-list file")->required();
  z->add_option("--lambda", z_args->lambda, "coupling")->required();
  z->callback([&ctx, z_args] {
    ctx.action = [&ctx, z_args] {
      const IsingModel m(read_graph_file(z_args->graph), z_args->lambda);
      const double lz = log_partition(m, ctx.limits);
      return ctx.emit({{"p", m.num_vertices()},
                       {"edges", m.graph().num_edges()},
                       {"lambda", m.lambda()},
                       {"log_partition", lz}},
                      "log_partition\n" + format_number(lz) + "\n");
    };
  });

  struct CorrArgs {
    std::string graph;
    double lambda = 0.0;
    std::vector<int> pair;
  };
  auto c_args = std::make_shared<CorrArgs>();
  CLI::App* corr = leaf(exact, "corr", "pair correlations E[x_s x_t]");
  corr->add_option("--graph", c_args->graph, "edge-list file")->required();
  corr->add_option("--lambda", c_args->lambda, "coupling")->required();
  corr->add_option("--pair", c_args->pair, "one pair s t")->expected(2);
  corr->callback([&ctx, c_args] {
    ctx.action = [&ctx, c_args] {
      const IsingModel m(read_graph_file(c_args->graph), c_args->lambda);
      const int p = m.num_vertices();
      const ExactInference inf = infer_exact(m, ctx.limits);
      std::ostringstream csv;
      csv << "s,t,correlation\n";
      if (!c_args->pair.empty()) {
        const int s = c_args->pair[0];
        const int t = c_args->pair[1];
        if (s < 0 || t < 0 || s >= p || t >= p) {
          throw ArgumentError("pair (" + std::to_string(s) + "," + std::to_string(t) +
                              ") out of range for p=" + std::to_string(p));
        }
        const double v = inf.correlation(s, t);
        csv << s << ',' << t << ',' << format_number(v) << '\n';
        return ctx.emit({{"s", s}, {"t", t}, {"lambda", m.lambda()}, {"correlation", v}},
                        csv.str());
      }
      json matrix = json::array();
      for (int s = 0; s < p; ++s) {
        json row = json::array();
        for (int t = 0; t < p; ++t) row.push_back(inf.correlation(s, t));
        matrix.push_back(row);
        for (int t = s + 1; t < p; ++t) {
          csv << s << ',' << t << ',' << format_number(inf.correlation(s, t)) << '\n';
        }
      }
      return ctx.emit({{"p", p}, {"lambda", m.lambda()}, {"correlations", matrix}}, csv.str());
    };
  });

  struct KlArgs {
    std::string graph1, graph2;
    double lambda = 0.0;
    double lambda2 = 0.0;
  };
  auto k_args = std::make_shared<KlArgs>();
  CLI::App* kl = leaf(exact, "kl", "KL divergence between two models");
  kl->add_option("--graph1", k_args->graph1, "first edge-list file")->required();
  kl->add_option("--graph2", k_args->graph2, "second edge-list file")->required();
  kl->add_option("--lambda", k_args->lambda, "coupling of the first model")->required();
  CLI::Option* l2 = kl->add_option("--lambda2", k_args->lambda2, "coupling of the second model");
  kl->callback([&ctx, k_args, l2] {
    ctx.action = [&ctx, k_args, l2] {
      const double lambda2 = l2->count() > 0 ? k_args->lambda2 : k_args->lambda;
      const IsingModel m1(read_graph_file(k_args->graph1), k_args->lambda);
      const IsingModel m2(read_graph_file(k_args->graph2), lambda2);
      const double fwd = kl_exact(m1, m2, ctx.limits);
      const double rev = kl_exact(m2, m1, ctx.limits);
      const double edge_form = symmetric_kl_edge_form(m1, m2, ctx.limits);
      return ctx.emit({{"kl_forward", fwd},
                       {"kl_reverse", rev},
                       {"symmetric", fwd + rev},
                       {"symmetric_edge_form", edge_form}},
                      "kl_forward,kl_reverse,symmetric,symmetric_edge_form\n" +
                          format_number(fwd) + ',' + format_number(rev) + ',' +
                          format_number(fwd + rev) + ',' + format_number(edge_form) + '\n');
    };
  });

  struct SampleArgs {
    std::string graph;
    double lambda = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string method = "exact";
    std::size_t burn_in = 1000;
    std::size_t thinning = 10;
    std::string out;
  };
  auto s_args = std::make_shared<SampleArgs>();
  CLI::App* sample = leaf(exact, "sample", "draw i.i.d. samples");
  sample->add_option("--graph", s_args->graph, "edge-list file")->required();
  sample->add_option("--lambda", s_args->lambda, "coupling")->required();
  sample->add_option("--n", s_args->n, "number of samples")->required();
  sample->add_option("--seed", s_args->seed, "64-bit seed")->required();
  sample->add_option("--method", s_args->method, "exact or gibbs")
      ->check(CLI::IsMember({"exact", "gibbs"}));
  sample->add_option("--burn-in", s_args->burn_in, "Gibbs sweeps discarded first");
  sample->add_option("--thinning", s_args->thinning, "Gibbs sweeps between samples");
  sample->add_option("--out", s_args->out, "sample file (default stdout)");
  sample->callback([&ctx, s_args] {
    ctx.action = [&ctx, s_args] {
      const IsingModel m(read_graph_file(s_args->graph), s_args->lambda);
      const SampleSet s =
          s_args->method == "gibbs"
              ? gibbs_sample(m, s_args->n, s_args->burn_in, s_args->thinning, s_args->seed)
              : sample_exact(m, s_args->n, s_args->seed, ctx.limits);
      write_text(format_samples(s), s_args->out, ctx.out);
      return kExitOk;
    };
  });
}

void add_bound(CLI::App& app, Context& ctx) {
  CLI::App* bound = group(&app, "bound", "Closed-form bounds and sample-complexity thresholds");

  struct Args {
    double lambda = 0.0, delta = 0.5, nu = 0.0, rho = 0.0, n = 0.0;
    int p = 0, eta = 0, gamma = 0, g = 0, d = 0, k = 0, l = 0;
    std::uint64_t sym_diff = 1, count = 0;
  };
  auto a = std::make_shared<Args>();

  CLI::App* ld_corr = leaf(bound, "ld-corr", "correlation lower bound for (l,d)-connected pairs");
  ld_corr->add_option("--lambda", a->lambda)->required();
  ld_corr->add_option("--l", a->l, "maximum path length")->required();
  ld_corr->add_option("--d", a->d, "number of disjoint paths")->required();
  ld_corr->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      const double v = corr_lower_bound_ld(a->lambda, a->l, a->d);
      return ctx.emit({{"lambda", a->lambda}, {"l", a->l}, {"d", a->d}, {"corr_lower_bound", v}},
                      "corr_lower_bound\n" + format_number(v) + "\n");
    };
  });

  CLI::App* ld_kl = leaf(bound, "ld-kl", "KL upper bound between (l,d)-connected models");
  ld_kl->add_option("--lambda", a->lambda)->required();
  ld_kl->add_option("--l", a->l, "maximum path length")->required();
  ld_kl->add_option("--d", a->d, "number of disjoint paths")->required();
  ld_kl->add_option("--sym-diff", a->sym_diff, "size of the edge symmetric difference");
  ld_kl->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      const LogScaled v = kl_upper_bound_ld(a->lambda, a->l, a->d, a->sym_diff);
      return ctx.emit({{"lambda", a->lambda},
                       {"l", a->l},
                       {"d", a->d},
                       {"sym_diff", a->sym_diff},
                       {"kl_upper_bound", number_or_null(v.value)},
                       {"log_kl_upper_bound", number_or_null(v.log_value)}},
                      "kl_upper_bound,log_kl_upper_bound\n" + csv_number(v.value) + ',' +
                          csv_number(v.log_value) + "\n");
    };
  });

  CLI::App* h1 = leaf(bound, "hamming1", "KL upper bound for a single differing edge");
  h1->add_option("--lambda", a->lambda)->required();
  h1->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      const double v = kl_upper_bound_hamming1(a->lambda);
      return ctx.emit({{"lambda", a->lambda}, {"kl_upper_bound", v}},
                      "kl_upper_bound\n" + format_number(v) + "\n");
    };
  });

  auto threshold = [&ctx](CLI::App* sub, std::function<BoundReport()> run) {
    sub->callback([&ctx, run] {
      ctx.action = [&ctx, run] {
        const BoundReport r = run();
        return ctx.emit(to_json(r), report_csv(r));
      };
    });
  };

  CLI::App* pr = leaf(bound, "path-restricted", "threshold for the path-restricted class");
  pr->add_option("--p", a->p)->required();
  pr->add_option("--eta", a->eta)->required();
  pr->add_option("--lambda", a->lambda)->required();
  pr->add_option("--delta", a->delta);
  threshold(pr, [a] { return threshold_path_restricted(a->p, a->eta, a->lambda, a->delta); });

  CLI::App* pl = leaf(bound, "path-length", "threshold for the bounded path-length class");
  pl->add_option("--p", a->p)->required();
  pl->add_option("--eta", a->eta)->required();
  pl->add_option("--gamma", a->gamma)->required();
  pl->add_option("--nu", a->nu)->required();
  pl->add_option("--lambda", a->lambda)->required();
  pl->add_option("--delta", a->delta);
  threshold(pl, [a] {
    return threshold_path_length(a->p, a->eta, a->gamma, a->nu, a->lambda, a->delta);
  });

  CLI::App* gi = leaf(bound, "girth", "threshold for the girth class");
  gi->add_option("--p", a->p)->required();
  gi->add_option("--g", a->g)->required();
  gi->add_option("--d", a->d)->required();
  gi->add_option("--nu", a->nu)->required();
  gi->add_option("--lambda", a->lambda)->required();
  gi->add_option("--delta", a->delta);
  threshold(gi,
            [a] { return threshold_girth(a->p, a->g, a->d, a->nu, a->lambda, a->delta); });

  CLI::App* dr = leaf(bound, "dregular", "threshold for approximately d-regular graphs");
  dr->add_option("--p", a->p)->required();
  dr->add_option("--d", a->d)->required();
  dr->add_option("--lambda", a->lambda)->required();
  dr->add_option("--delta", a->delta);
  threshold(dr, [a] { return threshold_dregular(a->p, a->d, a->lambda, a->delta); });

  CLI::App* eb = leaf(bound, "edge-bounded", "threshold for graphs with at most k edges");
  eb->add_option("--p", a->p)->required();
  eb->add_option("--k", a->k)->required();
  eb->add_option("--lambda", a->lambda)->required();
  eb->add_option("--delta", a->delta);
  threshold(eb, [a] { return threshold_edge_bounded(a->p, a->k, a->lambda, a->delta); });

  CLI::App* fano = leaf(bound, "fano", "Fano thresholds and the single-centre error floor");
  fano->add_option("--count", a->count, "number of hypotheses")->required();
  fano->add_option("--delta", a->delta);
  CLI::Option* rho = fano->add_option("--rho", a->rho, "KL radius (single-centre form)");
  CLI::Option* p = fano->add_option("--p", a->p, "variables per sample (counting form)");
  CLI::Option* n = fano->add_option("--n", a->n, "sample size for the error floor");
  rho->excludes(p);
  n->needs(rho);
  fano->callback([&ctx, a, rho, p, n] {
    ctx.action = [&ctx, a, rho, p, n] {
      if (rho->count() == 0 && p->count() == 0) throw ArgumentError("fano needs --rho or --p");
      FanoThreshold t;
      json j = {{"count", a->count}, {"delta", a->delta}};
      if (rho->count() > 0) {
        t = fano_single_center_threshold({a->count, a->rho, a->delta});
        j["form"] = "single-center";
        j["rho"] = a->rho;
      } else {
        t = fano_counting_threshold(a->count, a->p, a->delta);
        j["form"] = "counting";
        j["p"] = a->p;
      }
      j["threshold"] = number_or_null(t.value);
      j["vacuous"] = t.vacuous;
      std::string csv = "form,threshold,vacuous,floor\n" + j["form"].get<std::string>() + ',' +
                        csv_number(t.value) + ',' + std::to_string(t.vacuous) + ',';
      if (n->count() > 0) {
        const double floor = fano_single_center_floor(a->count, a->rho, a->n);
        j["n"] = a->n;
        j["floor"] = floor;
        csv += format_number(floor);
      }
      return ctx.emit(j, csv + "\n");
    };
  });
}

void add_construct(CLI::App& app, Context& ctx) {
  struct Args {
    std::string graph_class, kind, out;
    EnsembleParams params;
    double lambda = 0.5;
  };
  auto a = std::make_shared<Args>();
  CLI::App* c = leaf(&app, "construct", "Build a hard ensemble and write it to a directory");
  c->add_option("class", a->graph_class,
                "path-restricted, path-length, girth, dregular or edge-bounded")
      ->required();
  c->add_option("--p", a->params.p)->required();
  c->add_option("--eta", a->params.eta);
  c->add_option("--gamma", a->params.gamma);
  c->add_option("--g", a->params.girth);
  c->add_option("--d", a->params.degree);
  c->add_option("--k", a->params.max_edges);
  c->add_option("--nu", a->params.nu);
  c->add_option("--kind", a->kind, "CONNECTIVITY or HAMMING1");
  c->add_option("--lambda", a->lambda, "coupling (default 0.5)");
  c->add_option("--out", a->out, "output directory")->required();
  c->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      json spec = {{"class", a->graph_class}, {"p", a->params.p},     {"eta", a->params.eta},
                   {"gamma", a->params.gamma}, {"g", a->params.girth}, {"d", a->params.degree},
                   {"k", a->params.max_edges}, {"nu", a->params.nu}};
      if (!a->kind.empty()) spec["kind"] = a->kind;
      const HardEnsemble e = build_ensemble(parse_ensemble_spec(spec), a->lambda);
      write_ensemble(e, a->out);
      std::ostringstream csv;
      csv << "class,kind,p,members,rho\n"
          << to_string(e.graph_class) << ',' << to_string(e.kind) << ',' << e.num_vertices() << ','
          << e.members.size() << ',' << format_number(e.rho) << '\n';
      return ctx.emit(manifest_json(e), csv.str());
    };
  });
}

void add_verify(CLI::App& app, Context& ctx) {
  CLI::App* verify = group(&app, "verify", "Check connectivity certificates and ensembles");

  struct ConnArgs {
    std::string graph;
    int a = 0, b = 0, l = 0, d = 0;
    std::uint64_t budget = kDefaultSearchBudget;
  };
  auto c = std::make_shared<ConnArgs>();
  CLI::App* conn = leaf(verify, "ld-connect", "maximum number of disjoint paths of length <= l");
  conn->add_option("--graph", c->graph, "edge-list file")->required();
  conn->add_option("--a", c->a, "first endpoint")->required();
  conn->add_option("--b", c->b, "second endpoint")->required();
  conn->add_option("--l", c->l, "maximum path length")->required();
  CLI::Option* need = conn->add_option("--d", c->d, "required number of paths");
  conn->add_option("--budget", c->budget, "search-node budget");
  conn->callback([&ctx, c, need] {
    ctx.action = [&ctx, c, need] {
      const Graph g = read_graph_file(c->graph);
      const DisjointPaths dp = max_disjoint_paths(g, c->a, c->b, c->l, c->budget);
      const CertificateCheck check = verify_certificate(g, dp.certificate, c->l, dp.count);
      const bool connected = need->count() == 0 || dp.count >= c->d;
      json j = {{"a", c->a},
                {"b", c->b},
                {"l", c->l},
                {"paths", dp.count},
                {"certificate", dp.certificate.paths},
                {"certificate_valid", check.valid},
                {"nodes_explored", dp.nodes_explored}};
      if (need->count() > 0) {
        j["required"] = c->d;
        j["connected"] = connected;
      }
      std::ostringstream csv;
      csv << "a,b,l,paths,certificate_valid\n"
          << c->a << ',' << c->b << ',' << c->l << ',' << dp.count << ',' << check.valid << '\n';
      ctx.emit(j, csv.str());
      return check.valid && connected ? kExitOk : kExitFailure;
    };
  });

  struct EnsArgs {
    std::string dir;
    int kl_max_p = 12;
  };
  auto e = std::make_shared<EnsArgs>();
  CLI::App* ens = leaf(verify, "ensemble", "audit an ensemble directory");
  ens->add_option("--dir", e->dir, "directory written by construct")->required();
  ens->add_option("--kl-max-p", e->kl_max_p, "run exact KL checks up to this p");
  ens->callback([&ctx, e] {
    ctx.action = [&ctx, e] {
      const HardEnsemble ensemble = read_ensemble(e->dir);
      ValidationOptions opts;
      opts.kl_check_max_p = e->kl_max_p;
      opts.limits = ctx.limits;
      const ValidationReport v = validate_ensemble(ensemble, opts);
      json j = {{"ok", v.ok()},
                {"class", to_string(ensemble.graph_class)},
                {"kind", to_string(ensemble.kind)},
                {"members", ensemble.members.size()},
                {"rho", ensemble.rho},
                {"kl_checked", v.kl_checked},
                {"violations", violations_json(v)}};
      if (v.kl_checked) {
        j["max_kl_to_center"] = v.max_kl_to_center;
        j["max_kl_from_center"] = v.max_kl_from_center;
      }
      std::ostringstream csv;
      csv << "check,member,detail\n";
      for (const Violation& x : v.violations) {
        csv << x.check << ',' << (x.member ? std::to_string(*x.member) : "") << ",\"" << x.detail
            << "\"\n";
      }
      ctx.emit(j, csv.str());
      return v.ok() ? kExitOk : kExitFailure;
    };
  });
}

void add_simulate(CLI::App& app, Context& ctx) {
  struct Args {
    std::string config, out;
    unsigned threads = 0;
  };
  auto a = std::make_shared<Args>();
  CLI::App* sim = leaf(&app, "simulate", "Empirical ML error against the Fano floor");
  sim->add_option("--config", a->config, "experiment JSON")->required();
  sim->add_option("--out", a->out, "result file (default stdout)");
  CLI::Option* threads = sim->add_option("--threads", a->threads, "worker threads");
  sim->callback([&ctx, a, threads] {
    ctx.action = [&ctx, a, threads] {
      ExperimentConfig cfg = load_experiment_config(a->config);
      if (threads->count() > 0) {
        if (a->threads < 1) throw ArgumentError("--threads must be >= 1");
        cfg.threads = a->threads;
      }
      const ExperimentResult r = run_experiment(cfg, ctx.limits);
      for (const ExperimentRow& row : r.rows) {
        ctx.err << "n=" << row.n << " wall_seconds=" << row.wall_seconds << '\n';
      }
      write_text(ctx.csv() ? format_csv(r) : to_json(r).dump(2) + "\n", a->out, ctx.out);
      return kExitOk;
    };
  });
}

void add_er(CLI::App& app, Context& ctx) {
  CLI::App* er = group(&app, "er", "Dense Erdos-Renyi bounds and diagnostics");

  struct Args {
    ERParams params;
    std::string graph, out;
    std::uint64_t seed = 0;
    double gamma = 0.0;
  };
  auto a = std::make_shared<Args>();

  CLI::App* bound = leaf(er, "bound", "n1, n2 and their maximum");
  bound->add_option("--p", a->params.p)->required();
  bound->add_option("--c", a->params.c, "edge probability is c/p")->required();
  bound->add_option("--lambda", a->params.lambda)->required();
  bound->add_option("--p-avg", a->params.p_avg_target, "target average error (<= 1/90)");
  bound->add_option("--epsilon", a->params.epsilon, "typicality slack");
  bound->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      const ERQuantities q = er_lower_bound(a->params);
      std::ostringstream csv;
      csv << "entropy_bits,gamma,n1,log_n1,n2,lower_bound,log_lower_bound,regime,dense\n"
          << format_number(q.entropy_bits) << ',' << format_number(q.gamma) << ','
          << csv_number(q.n1.value) << ',' << format_number(q.n1.log_value) << ','
          << format_number(q.n2) << ',' << csv_number(q.lower_bound.value) << ','
          << format_number(q.lower_bound.log_value) << ',' << to_string(q.regime) << ','
          << q.dense << '\n';
      return ctx.emit(to_json(q), csv.str());
    };
  });

  CLI::App* regime = leaf(er, "regime", "classify lambda against sqrt(p)/c");
  regime->add_option("--p", a->params.p)->required();
  regime->add_option("--c", a->params.c)->required();
  regime->add_option("--lambda", a->params.lambda)->required();
  regime->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      const ERRegime r = er_regime(a->params);
      const double edge = std::sqrt(static_cast<double>(a->params.p)) / a->params.c;
      return ctx.emit({{"p", a->params.p},
                       {"c", a->params.c},
                       {"lambda", a->params.lambda},
                       {"boundary_lambda", edge},
                       {"regime", to_string(r)},
                       {"sample_scale", regime_sample_scale(r)}},
                      "regime,boundary_lambda,sample_scale\n" + std::string(to_string(r)) + ',' +
                          format_number(edge) + ',' + std::string(regime_sample_scale(r)) + '\n');
    };
  });

  CLI::App* diag = leaf(er, "diagnose", "common-neighbour structure of one graph");
  CLI::Option* graph = diag->add_option("--graph", a->graph, "edge-list file");
  CLI::Option* p = diag->add_option("--p", a->params.p, "sample a G(p, c/p) graph instead");
  diag->add_option("--seed", a->seed, "seed for the sampled graph");
  diag->add_option("--c", a->params.c)->required();
  CLI::Option* gamma = diag->add_option("--gamma", a->gamma, "override c^2/(6p)");
  diag->add_option("--epsilon", a->params.epsilon, "typicality slack");
  graph->excludes(p);
  diag->callback([&ctx, a, graph, p, gamma] {
    ctx.action = [&ctx, a, graph, p, gamma] {
      if (graph->count() == 0 && p->count() == 0) throw ArgumentError("diagnose needs --graph or --p");
      const Graph g = graph->count() > 0 ? read_graph_file(a->graph)
                                         : sample_er_graph(a->params.p, a->params.c, a->seed);
      const ERDiagnostics d =
          er_structure_diagnostics(g, a->params.c,
                                   gamma->count() > 0 ? std::optional(a->gamma) : std::nullopt,
                                   a->params.epsilon);
      std::ostringstream csv;
      csv << "common_neighbours,pairs\n";
      for (std::size_t k = 0; k < d.histogram.size(); ++k) csv << k << ',' << d.histogram[k] << '\n';
      return ctx.emit(to_json(d), csv.str());
    };
  });

  CLI::App* sample = leaf(er, "sample", "draw a G(p, c/p) graph as an edge list");
  sample->add_option("--p", a->params.p)->required();
  sample->add_option("--c", a->params.c)->required();
  sample->add_option("--seed", a->seed)->required();
  sample->add_option("--out", a->out, "edge-list file (default stdout)");
  sample->callback([&ctx, a] {
    ctx.action = [&ctx, a] {
      write_text(format_graph(sample_er_graph(a->params.p, a->params.c, a->seed)), a->out,
                 ctx.out);
      return kExitOk;
    };
  });
}

}  // namespace

EnumerationLimits limits_from_environment() {
  EnumerationLimits limits;
  const char* raw = std::getenv("ISING_LB_MAX_P");
  if (raw == nullptr || *raw == '\0') return limits;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > kMaxEnumerableVertices) {
    throw ArgumentError("ISING_LB_MAX_P must be an integer in [1, " +
                        std::to_string(kMaxEnumerableVertices) + "], got '" + raw + "'");
  }
  limits.max_inference_vertices = static_cast<int>(v);
  limits.max_sampling_vertices = static_cast<int>(v);
  return limits;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, out, err);
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err, {}, "json", {}};
  CLI::App app("Sample-complexity lower bounds for Ising model structure learning", "isinglb");
  app.require_subcommand(1);
  app.add_option("--format", ctx.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_exact(app, ctx);
  add_bound(app, ctx);
  add_construct(app, ctx);
  add_verify(app, ctx);
  add_simulate(app, ctx);
  add_er(app, ctx);

  try {
    // CLI11 consumes arguments from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ctx.limits = limits_from_environment();
    return ctx.action ? ctx.action() : kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace isinglb
