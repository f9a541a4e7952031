#include "isinglb/er_bounds.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "isinglb/error.hpp"
#include "isinglb/rng.hpp"

namespace isinglb {

namespace {

constexpr double kMaxTarget = 1.0 / 90.0;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

LogScaled from_log(double log_value) { return {std::exp(log_value), log_value}; }

BoundTerm term(std::string name, double log_value) {
  BoundTerm t;
  t.name = std::move(name);
  t.log_value = log_value;
  t.value = std::exp(log_value);
  t.overflow = std::isinf(t.value) && std::isfinite(log_value);
  return t;
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ArgumentError("epsilon must lie in (0, 1), got " + fmt(epsilon));
  }
}

void validate(const ERParams& q) {
  if (q.p < 2) throw ArgumentError("p must be >= 2, got " + std::to_string(q.p));
  if (!(q.c > 0.0 && q.c < q.p)) {
    throw ArgumentError("c/p must lie in (0, 1), got c=" + fmt(q.c) + " p=" + std::to_string(q.p));
  }
  if (!std::isfinite(q.lambda) || q.lambda <= 0.0) {
    throw ArgumentError("lambda must be finite and positive, got " + fmt(q.lambda));
  }
  if (!(q.p_avg_target > 0.0)) {
    throw ArgumentError("p_avg_target must be positive, got " + fmt(q.p_avg_target));
  }
  if (q.p_avg_target > kMaxTarget) {
    throw HypothesisError("p_avg_target must be <= 1/90, got " + fmt(q.p_avg_target));
  }
  require_epsilon(q.epsilon);
}

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json to_json(const LogScaled& v) {
  return {{"value", finite_or_null(v.value)}, {"log_value", finite_or_null(v.log_value)}};
}

}  // namespace

std::string_view to_string(ERRegime r) {
  return r == ERRegime::kHighLambda ? "HIGH_LAMBDA" : "LOW_LAMBDA";
}

std::string_view regime_sample_scale(ERRegime r) {
  return r == ERRegime::kHighLambda ? "exponential via n1" : "c log p from prior work";
}

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("entropy argument must lie in [0, 1], got " + fmt(q));
  if (q == 0.0 || q == 1.0) return 0.0;
  return -(q * std::log2(q) + (1.0 - q) * std::log2(1.0 - q));
}

ERConcentration er_concentration_constants(const ERParams& params) {
  const double p = params.p;
  const double ce = params.c * params.epsilon;
  ERConcentration out;
  out.b_p = from_log(std::log(p / 3.0) - p / 36.0);
  out.r_c = from_log(std::log(2.0) - ce * ce / 36.0);
  return out;
}

ERQuantities er_lower_bound(const ERParams& params) {
  validate(params);
  const double p = params.p;
  const double lambda = params.lambda;
  ERQuantities q;
  q.params = params;
  q.density = params.c / p;
  q.entropy_bits = binary_entropy(q.density);
  q.gamma = params.c * params.c / (6.0 * p);
  q.constants = er_concentration_constants(params);
  q.dense = params.c >= std::pow(p, 0.75);
  q.regime = er_regime(params);

  q.denominator_terms = {
      term("mixing-term", std::log(4.0 * lambda * p / 3.0) - p / 36.0),
      term("tail-term", std::log(4.0) - std::pow(p, 1.5) / 144.0),
      term("correlation-term",
           std::log(4.0 * lambda / 9.0) - softplus(q.gamma * log_cosh(2.0 * lambda))),
  };
  for (std::size_t i = 0; i < q.denominator_terms.size(); ++i) {
    const double lv = q.denominator_terms[i].log_value;
    if (lv > q.denominator_terms[q.dominant_term].log_value) q.dominant_term = i;
  }
  const double top = q.denominator_terms[q.dominant_term].log_value;
  double scaled = 0.0;
  for (const BoundTerm& t : q.denominator_terms) scaled += std::exp(t.log_value - top);
  const double log_den = top + std::log(scaled);

  // p_avg_target <= 1/90 keeps 1 - 80 p_avg positive.
  const double log_num =
      std::log(q.entropy_bits) + std::log(3.0 / 80.0) + std::log1p(-80.0 * params.p_avg_target);
  q.n1 = from_log(log_num - log_den);
  q.n2 = p / 4.0 * q.entropy_bits * (1.0 - 3.0 * params.p_avg_target);
  q.lower_bound = q.n1.log_value >= std::log(q.n2) ? q.n1 : LogScaled{q.n2, std::log(q.n2)};
  return q;
}

ERRegime er_regime(const ERParams& params) {
  if (params.p < 1) throw ArgumentError("p must be >= 1, got " + std::to_string(params.p));
  if (!(params.c > 0.0)) throw ArgumentError("c must be positive, got " + fmt(params.c));
  if (!std::isfinite(params.lambda) || params.lambda <= 0.0) {
    throw ArgumentError("lambda must be finite and positive, got " + fmt(params.lambda));
  }
  return params.lambda >= std::sqrt(static_cast<double>(params.p)) / params.c
             ? ERRegime::kHighLambda
             : ERRegime::kLowLambda;
}

Graph sample_er_graph(int p, double c, std::uint64_t seed) {
  if (p < 1) throw ArgumentError("p must be >= 1, got " + std::to_string(p));
  const double prob = c / p;
  if (!(prob >= 0.0 && prob < 1.0)) {
    throw ArgumentError("c/p must lie in [0, 1), got c=" + fmt(c) + " p=" + std::to_string(p));
  }
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < p; ++u) {
    for (Vertex v = u + 1; v < p; ++v) {
      if (rng.uniform() < prob) edges.emplace_back(u, v);
    }
  }
  return Graph(p, std::move(edges));
}

ERDiagnostics er_structure_diagnostics(const Graph& g, double c,
                                       std::optional<double> gamma_override, double epsilon) {
  require_epsilon(epsilon);
  if (!(c >= 0.0)) throw ArgumentError("c must be non-negative, got " + fmt(c));
  ERDiagnostics d;
  d.p = g.num_vertices();
  d.part_size = d.p / 3;
  d.leftover_vertices = d.p - 3 * d.part_size;
  d.c = c;
  d.epsilon = epsilon;
  const double p = d.p;
  d.gamma = gamma_override.value_or(c * c / (6.0 * p));
  d.gamma_overridden = gamma_override.has_value();
  d.average_degree = p > 0 ? 2.0 * static_cast<double>(g.num_edges()) / p : 0.0;
  d.typical = std::abs(d.average_degree - c) <= epsilon * c;

  // Neighbourhoods restricted to B as bitsets over B's local indices.
  const int k = d.part_size;
  const int words = (k + 63) / 64;
  std::vector<std::uint64_t> in_b(static_cast<std::size_t>(d.p) * words, 0);
  for (Vertex v = 0; v < d.p; ++v) {
    for (Vertex w : g.neighbors(v)) {
      if (w >= k && w < 2 * k) {
        const int local = w - k;
        in_b[static_cast<std::size_t>(v) * words + local / 64] |= std::uint64_t{1} << (local % 64);
      }
    }
  }

  d.histogram.assign(k + 1, 0);
  std::uint64_t total = 0;
  for (Vertex a = 0; a < k; ++a) {
    const std::uint64_t* ra = in_b.data() + static_cast<std::size_t>(a) * words;
    for (Vertex cc = 2 * k; cc < 3 * k; ++cc) {
      const std::uint64_t* rc = in_b.data() + static_cast<std::size_t>(cc) * words;
      int common = 0;
      for (int w = 0; w < words; ++w) common += std::popcount(ra[w] & rc[w]);
      ++d.histogram[common];
      total += common;
      if (common >= d.gamma) ++d.m_ac;
    }
  }
  d.pairs = static_cast<std::uint64_t>(k) * k;
  d.expected_common = p > 0 ? c * c / (3.0 * p) : 0.0;
  d.common_lower_threshold = p > 1 ? d.expected_common - std::sqrt(4.0 * p * std::log(p)) : 0.0;
  for (int n = 0; n <= k; ++n) {
    if (n <= d.common_lower_threshold) d.pairs_at_or_below_threshold += d.histogram[n];
  }
  if (d.pairs > 0) {
    d.mean_common = static_cast<double>(total) / static_cast<double>(d.pairs);
    d.connected_fraction = static_cast<double>(d.m_ac) / static_cast<double>(d.pairs);
  }
  d.m_ac_threshold = static_cast<double>(d.pairs) / 2.0;
  d.m_ac_above_threshold = static_cast<double>(d.m_ac) > d.m_ac_threshold;
  return d;
}

nlohmann::json to_json(const ERQuantities& q) {
  nlohmann::json terms = nlohmann::json::array();
  for (const BoundTerm& t : q.denominator_terms) {
    terms.push_back({{"name", t.name},
                     {"value", t.overflow ? nlohmann::json(nullptr) : nlohmann::json(t.value)},
                     {"log_value", t.log_value},
                     {"overflow", t.overflow}});
  }
  return {
      {"inputs",
       {{"p", q.params.p},
        {"c", q.params.c},
        {"lambda", q.params.lambda},
        {"p_avg_target", q.params.p_avg_target},
        {"epsilon", q.params.epsilon}}},
      {"density", q.density},
      {"entropy_bits", q.entropy_bits},
      {"gamma", q.gamma},
      {"b_p", to_json(q.constants.b_p)},
      {"r_c", to_json(q.constants.r_c)},
      {"n1_denominator_terms", terms},
      {"dominant_denominator_term", q.denominator_terms[q.dominant_term].name},
      {"n1", to_json(q.n1)},
      {"n2", q.n2},
      {"lower_bound", to_json(q.lower_bound)},
      {"regime", to_string(q.regime)},
      {"sample_scale", regime_sample_scale(q.regime)},
      {"dense", q.dense},
      {"asymptotic_slack_dropped", q.asymptotic_slack_dropped},
      {"units", {{"entropy", "bits"}, {"lambda_terms", "nats"}}},
  };
}

nlohmann::json to_json(const ERDiagnostics& d) {
  return {
      {"p", d.p},
      {"part_size", d.part_size},
      {"leftover_vertices", d.leftover_vertices},
      {"c", d.c},
      {"epsilon", d.epsilon},
      {"gamma", d.gamma},
      {"gamma_overridden", d.gamma_overridden},
      {"average_degree", d.average_degree},
      {"typical", d.typical},
      {"common_neighbour_histogram", d.histogram},
      {"pairs", d.pairs},
      {"mean_common", d.mean_common},
      {"expected_common", d.expected_common},
      {"common_lower_threshold", d.common_lower_threshold},
      {"pairs_at_or_below_threshold", d.pairs_at_or_below_threshold},
      {"m_ac", d.m_ac},
      {"connected_fraction", d.connected_fraction},
      {"m_ac_threshold", d.m_ac_threshold},
      {"m_ac_above_threshold", d.m_ac_above_threshold},
  };
}

}  // namespace isinglb
