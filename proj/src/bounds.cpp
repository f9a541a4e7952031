#include "isinglb/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "isinglb/error.hpp"

namespace isinglb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogMax = std::log(std::numeric_limits<double>::max());

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw ArgumentError("lambda must be finite and positive, got " + fmt(lambda));
  }
}

void require_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ArgumentError("delta must lie in [0, 1), got " + fmt(delta));
  }
}

void require_nu(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw ArgumentError("nu must lie in (0, 1), got " + fmt(nu));
}

void require_positive(int x, const char* name) {
  if (x < 1) throw ArgumentError(std::string(name) + " must be >= 1, got " + std::to_string(x));
}

/// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

/// log tanh(lambda) = log(1 - e^{-2 lambda}) - log(1 + e^{-2 lambda}).
double log_tanh(double lambda) {
  return std::log(-std::expm1(-2.0 * lambda)) - std::log1p(std::exp(-2.0 * lambda));
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double log_hamming_denominator(double lambda) { return std::log(lambda) + log_tanh(lambda); }

BoundTerm make_term(std::string name, double log_value) {
  BoundTerm t;
  t.name = std::move(name);
  t.log_value = log_value;
  t.overflow = log_value > kLogMax;
  t.value = t.overflow ? kInf : std::exp(log_value);
  return t;
}

/// log(size) / (lambda tanh lambda).
BoundTerm hamming_term(double size, double lambda) {
  return make_term("hamming-term", std::log(std::log(size)) - log_hamming_denominator(lambda));
}

/// (1 + e^X) / (2 lambda) * log_factor.
BoundTerm connectivity_term(double log_product, double lambda, double log_factor) {
  return make_term("connectivity-term",
                   softplus(log_product) - std::log(2.0 * lambda) + std::log(log_factor));
}

BoundReport finish(BoundReport r) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.terms.size(); ++i) {
    if (r.terms[i].log_value > r.terms[best].log_value) best = i;
  }
  r.winning_term = best;
  const BoundTerm& w = r.terms[best];
  r.log_n_threshold = std::log1p(-r.delta) + w.log_value;
  r.overflow = w.overflow;
  r.n_threshold = w.overflow ? kInf : (1.0 - r.delta) * w.value;
  r.vacuous = r.n_threshold <= 0.0;
  return r;
}

}  // namespace

double log_path_ratio(double lambda, int l) {
  require_lambda(lambda);
  require_positive(l, "path length l");
  const double log_u = l * log_tanh(lambda);  // log t^l
  return std::log1p(std::exp(log_u)) - std::log(-std::expm1(log_u));
}

double corr_lower_bound_ld(double lambda, int l, int d) {
  require_positive(d, "path count d");
  // 1 - 2/(1 + R^d) = tanh(d log R / 2).
  return std::tanh(0.5 * d * log_path_ratio(lambda, l));
}

LogScaled connectivity_kl_radius(double lambda, double log_product) {
  require_lambda(lambda);
  LogScaled out;
  out.log_value = std::log(2.0 * lambda) - softplus(log_product);
  out.value = std::exp(out.log_value);
  return out;
}

LogScaled kl_upper_bound_ld(double lambda, int l, int d, std::uint64_t sym_diff_size) {
  require_positive(d, "path count d");
  const double log_r = log_path_ratio(lambda, l);
  if (sym_diff_size == 0) return {0.0, -kInf};
  LogScaled out = connectivity_kl_radius(lambda, d * log_r);
  out.log_value += std::log(static_cast<double>(sym_diff_size));
  out.value = std::exp(out.log_value);
  return out;
}

double kl_upper_bound_hamming1(double lambda) {
  require_lambda(lambda);
  return lambda * std::tanh(lambda);
}

double path_restricted_kl_radius(double lambda, int eta) {
  require_lambda(lambda);
  require_positive(eta, "eta");
  return connectivity_kl_radius(lambda, (eta - 1) * log_cosh(2.0 * lambda)).value;
}

double path_length_kl_radius(double lambda, int eta, int gamma, double paths) {
  require_lambda(lambda);
  require_positive(eta, "eta");
  require_positive(gamma, "gamma");
  if (!(paths >= 0.0)) throw ArgumentError("path count must be non-negative");
  const double x = (eta - 1) * log_cosh(2.0 * lambda) + paths * log_path_ratio(lambda, gamma + 1);
  return connectivity_kl_radius(lambda, x).value;
}

double girth_kl_radius(double lambda, int g, double paths) {
  require_lambda(lambda);
  if (g < 3) throw ArgumentError("girth g must be >= 3, got " + std::to_string(g));
  if (!(paths >= 0.0)) throw ArgumentError("path count must be non-negative");
  return connectivity_kl_radius(lambda, paths * log_path_ratio(lambda, g - 1)).value;
}

double clique_kl_radius(double lambda, int d) {
  require_lambda(lambda);
  require_positive(d, "d");
  const double clique = std::exp(std::log(2.0 * lambda * d) + lambda - lambda * d);
  return std::min(clique, kl_upper_bound_hamming1(lambda));
}

double edge_bounded_kl_radius(double lambda, int k) {
  require_lambda(lambda);
  require_positive(k, "k");
  const double s = std::sqrt(2.0 * k);
  const double clique = std::exp(std::log(2.0 * lambda * (s + 1.0)) + lambda - lambda * (s - 1.0));
  return std::min(clique, kl_upper_bound_hamming1(lambda));
}

FanoThreshold fano_counting_threshold(double log_class_size, int p, double delta) {
  require_delta(delta);
  require_positive(p, "p");
  if (!(log_class_size >= std::log(2.0))) {
    throw ArgumentError("class size must be >= 2 (log size " + fmt(log_class_size) + ")");
  }
  const double value = ((1.0 - delta) * log_class_size - std::log(2.0)) / p;
  return {value, value <= 0.0};
}

FanoThreshold fano_counting_threshold(std::uint64_t class_size, int p, double delta) {
  if (class_size < 2) throw ArgumentError("class size must be >= 2");
  return fano_counting_threshold(std::log(static_cast<double>(class_size)), p, delta);
}

FanoThreshold fano_single_center_threshold(const FanoInputs& in) {
  require_delta(in.delta);
  if (in.hypothesis_count < 2) throw ArgumentError("hypothesis count |T| must be >= 2");
  if (!(in.rho > 0.0) || !std::isfinite(in.rho)) {
    throw ArgumentError("KL radius rho must be finite and positive, got " + fmt(in.rho));
  }
  const double log_t = std::log(static_cast<double>(in.hypothesis_count));
  const double value = ((1.0 - in.delta) * log_t - std::log(2.0)) / in.rho;
  return {value, value <= 0.0};
}

double fano_single_center_floor(std::uint64_t hypothesis_count, double rho, double n) {
  if (hypothesis_count < 2) throw ArgumentError("hypothesis count |T| must be >= 2");
  if (!(rho >= 0.0)) throw ArgumentError("KL radius rho must be non-negative");
  if (!(n >= 0.0)) throw ArgumentError("sample count must be non-negative");
  return 1.0 - (n * rho + std::log(2.0)) / std::log(static_cast<double>(hypothesis_count));
}

BoundReport threshold_path_restricted(int p, int eta, double lambda, double delta) {
  require_lambda(lambda);
  require_delta(delta);
  require_positive(eta, "eta");
  if (2 * (eta + 1) > p) {
    throw ArgumentError("path-restricted: needs 2 (eta + 1) <= p, got eta=" + std::to_string(eta) +
                        ", p=" + std::to_string(p));
  }
  BoundReport r;
  r.bound = "path-restricted";
  r.inputs = {{"p", p}, {"eta", eta}, {"lambda", lambda}, {"delta", delta}};
  r.delta = delta;
  r.terms.push_back(hamming_term(p / 2.0, lambda));
  r.terms.push_back(connectivity_term((eta - 1) * log_cosh(2.0 * lambda), lambda,
                                      std::log(p / (2.0 * (eta + 1)))));
  return finish(std::move(r));
}

BoundReport threshold_path_length(int p, int eta, int gamma, double nu, double lambda,
                                  double delta) {
  require_lambda(lambda);
  require_delta(delta);
  require_nu(nu);
  require_positive(eta, "eta");
  require_positive(gamma, "gamma");
  require_positive(p, "p");
  const double t_nu = (std::pow(p, 1.0 - nu) - (eta + 1)) / gamma;
  if (!(t_nu >= 1.0)) {
    throw ArgumentError("path-length: t_nu = " + fmt(t_nu) +
                        " < 1 (needs p^{1-nu} >= eta + 1 + gamma)");
  }
  BoundReport r;
  r.bound = "path-length";
  r.inputs = {{"p", p}, {"eta", eta}, {"gamma", gamma}, {"nu", nu}, {"lambda", lambda},
              {"delta", delta}};
  r.derived = {{"t_nu", t_nu}};
  r.delta = delta;
  r.terms.push_back(hamming_term(p / 2.0, lambda));
  const double x = (eta - 1) * log_cosh(2.0 * lambda) + t_nu * log_path_ratio(lambda, gamma + 1);
  r.terms.push_back(connectivity_term(x, lambda, nu * std::log(static_cast<double>(p))));
  return finish(std::move(r));
}

BoundReport threshold_girth(int p, int g, int d, double nu, double lambda, double delta) {
  require_lambda(lambda);
  require_delta(delta);
  require_nu(nu);
  require_positive(d, "d");
  require_positive(p, "p");
  if (g < 3) throw ArgumentError("girth: g must be >= 3, got " + std::to_string(g));
  const double d_nu = std::min(static_cast<double>(d), std::pow(p, 1.0 - nu) / g);
  if (!(d_nu >= 1.0)) {
    throw ArgumentError("girth: d_nu = " + fmt(d_nu) + " < 1 (needs p^{1-nu} >= g)");
  }
  BoundReport r;
  r.bound = "girth";
  r.inputs = {{"p", p}, {"g", g}, {"d", d}, {"nu", nu}, {"lambda", lambda}, {"delta", delta}};
  r.derived = {{"d_nu", d_nu}};
  r.delta = delta;
  r.terms.push_back(hamming_term(p / 2.0, lambda));
  r.terms.push_back(connectivity_term(d_nu * log_path_ratio(lambda, g - 1), lambda,
                                      nu * std::log(static_cast<double>(p))));
  return finish(std::move(r));
}

BoundReport threshold_dregular(int p, int d, double lambda, double delta) {
  require_lambda(lambda);
  require_delta(delta);
  if (d < 2) throw ArgumentError("dregular: d must be >= 2, got " + std::to_string(d));
  if (p < 2) throw ArgumentError("dregular: p must be >= 2, got " + std::to_string(p));
  const double log_size = std::log(p * static_cast<double>(d) / 4.0);
  BoundReport r;
  r.bound = "dregular";
  r.inputs = {{"p", p}, {"d", d}, {"lambda", lambda}, {"delta", delta}};
  r.delta = delta;
  r.terms.push_back(hamming_term(p * static_cast<double>(d) / 4.0, lambda));
  // e^{lambda d} / (2 lambda d e^lambda) * log(pd/4)
  r.terms.push_back(make_term("connectivity-term",
                              lambda * (d - 1) - std::log(2.0 * lambda * d) + std::log(log_size)));
  return finish(std::move(r));
}

int largest_clique_within(std::int64_t k) {
  int m = 1;
  while (static_cast<std::int64_t>(m + 1) * m / 2 <= k) ++m;
  return m;
}

BoundReport threshold_edge_bounded(int p, int k, double lambda, double delta) {
  require_lambda(lambda);
  require_delta(delta);
  if (k < 9) throw HypothesisError("edge-bounded: k must be >= 9, got " + std::to_string(k));
  const int m = largest_clique_within(k);
  if (m > p) {
    throw ArgumentError("edge-bounded: clique K_" + std::to_string(m) + " does not fit in p=" +
                        std::to_string(p) + " vertices");
  }
  const double s = std::sqrt(2.0 * k);
  BoundReport r;
  r.bound = "edge-bounded";
  r.inputs = {{"p", p}, {"k", k}, {"lambda", lambda}, {"delta", delta}};
  r.derived = {{"m", m}};
  r.delta = delta;
  r.terms.push_back(hamming_term(k / 2.0, lambda));
  // e^{lambda (s - 1)} / (2 lambda e^lambda (s + 1)) * log(k/2)
  r.terms.push_back(make_term("connectivity-term", lambda * (s - 2.0) -
                                                       std::log(2.0 * lambda * (s + 1.0)) +
                                                       std::log(std::log(k / 2.0))));
  return finish(std::move(r));
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["bound"] = r.bound;
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  nlohmann::json derived = nlohmann::json::object();
  for (const auto& [k, v] : r.derived) derived[k] = v;
  j["derived"] = derived;
  nlohmann::json terms = nlohmann::json::array();
  for (const BoundTerm& t : r.terms) {
    terms.push_back({{"name", t.name},
                     {"value", t.overflow ? nlohmann::json(nullptr) : nlohmann::json(t.value)},
                     {"log_value", t.log_value},
                     {"overflow", t.overflow}});
  }
  j["terms"] = terms;
  j["winning_term"] = r.winner().name;
  j["delta"] = r.delta;
  j["n_threshold"] = r.overflow ? nlohmann::json(nullptr) : nlohmann::json(r.n_threshold);
  j["log_n_threshold"] = r.log_n_threshold;
  j["overflow"] = r.overflow;
  j["vacuous"] = r.vacuous;
  return j;
}

}  // namespace isinglb
