#include "isinglb/samples.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "isinglb/error.hpp"
#include "isinglb/rng.hpp"
#include "state_space.hpp"

namespace isinglb {

SampleSet::SampleSet(int num_vertices, std::size_t num_samples, std::vector<std::int8_t> spins,
                     std::uint64_t seed, std::string generator)
    : num_vertices_(num_vertices),
      num_samples_(num_samples),
      spins_(std::move(spins)),
      seed_(seed),
      generator_(std::move(generator)) {
  if (num_vertices_ < 1) throw ArgumentError("SampleSet: p must be positive");
  if (spins_.size() != num_samples_ * static_cast<std::size_t>(num_vertices_)) {
    throw DimensionError("SampleSet: " + std::to_string(spins_.size()) + " spins for n=" +
                         std::to_string(num_samples_) + ", p=" + std::to_string(num_vertices_));
  }
  for (std::int8_t x : spins_) {
    if (x != 1 && x != -1) throw ArgumentError("SampleSet: spin value " + std::to_string(x));
  }
  if (generator_.empty() || generator_.find_first_of(" \t\r\n") != std::string::npos) {
    throw ArgumentError("SampleSet: generator id must be a single non-empty token");
  }
}

std::string format_samples(const SampleSet& s) {
  std::string out = std::to_string(s.num_samples()) + ' ' + std::to_string(s.num_vertices()) +
                    ' ' + std::to_string(s.seed()) + ' ' + s.generator() + '\n';
  out.reserve(out.size() + s.spins().size() * 3);
  for (std::size_t i = 0; i < s.num_samples(); ++i) {
    const auto row = s.sample(i);
    for (std::size_t v = 0; v < row.size(); ++v) {
      if (v != 0) out += ' ';
      out += row[v] > 0 ? "1" : "-1";
    }
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T parse_number(const std::string& token, int line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(std::string("bad ") + what + " '" + token + "'", line);
  }
  return value;
}

}  // namespace

SampleSet parse_samples(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  bool have_header = false;
  std::size_t n = 0;
  int p = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::vector<std::int8_t> spins;
  std::size_t rows = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(raw);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (!have_header) {
      if (tokens.size() != 4) throw ParseError("header must be 'n p seed generator-id'", line);
      n = parse_number<std::size_t>(tokens[0], line, "sample count");
      p = parse_number<int>(tokens[1], line, "vertex count");
      seed = parse_number<std::uint64_t>(tokens[2], line, "seed");
      generator = tokens[3];
      if (p < 1) throw ParseError("vertex count must be positive", line);
      spins.reserve(n * static_cast<std::size_t>(p));
      have_header = true;
      continue;
    }
    if (static_cast<int>(tokens.size()) != p) {
      throw ParseError("expected " + std::to_string(p) + " spins, got " +
                           std::to_string(tokens.size()),
                       line);
    }
    if (rows == n) throw ParseError("more sample rows than the header declares", line);
    for (const std::string& t : tokens) {
      if (t == "1" || t == "+1") {
        spins.push_back(1);
      } else if (t == "-1") {
        spins.push_back(-1);
      } else {
        throw ParseError("spin must be 1 or -1, got '" + t + "'", line);
      }
    }
    ++rows;
  }
  if (!have_header) throw ParseError("missing header line", 0);
  if (rows != n) {
    throw ParseError("header declares " + std::to_string(n) + " samples, found " +
                         std::to_string(rows),
                     line);
  }
  return SampleSet(p, n, std::move(spins), seed, std::move(generator));
}

SampleSet read_samples_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open sample file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_samples(buf.str());
}

void write_samples_file(const SampleSet& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write sample file '" + path + "'");
  out << format_samples(s);
}

ExactSampler::ExactSampler(const IsingModel& m, const EnumerationLimits& limits)
    : num_vertices_(m.num_vertices()) {
  detail::check_capacity(num_vertices_, limits.max_sampling_vertices, "sample_exact");
  const detail::StateSpace space(m.graph());
  const std::uint32_t half = space.half_count();
  std::vector<double> weight(space.num_edges() + 1);
  for (int k = 0; k <= space.num_edges(); ++k) weight[k] = std::exp(-2.0 * m.lambda() * k);
  cumulative_.resize(half);
  double total = 0.0;
  for (std::uint32_t i = 0; i < half; ++i) {
    total += weight[space.disagreements(i << 1)];
    cumulative_[i] = total;
  }
}

SampleSet ExactSampler::sample(std::size_t n, std::uint64_t seed) const {
  const std::size_t p = static_cast<std::size_t>(num_vertices_);
  std::vector<std::int8_t> spins(n * p);
  const double total = cumulative_.back();
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng(SplitMix64::mix(seed ^ static_cast<std::uint64_t>(i)));
    const double target = rng.uniform() * total;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    const auto index = static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                 static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
    std::uint32_t state = index << 1;
    if (rng.next() >> 63) state = ~state;  // global flip
    std::int8_t* row = spins.data() + i * p;
    for (std::size_t v = 0; v < p; ++v) row[v] = (state >> v) & 1U ? -1 : 1;
  }
  return SampleSet(num_vertices_, n, std::move(spins), seed,
                   std::string(SplitMix64::kGeneratorId));
}

SampleSet sample_exact(const IsingModel& m, std::size_t n, std::uint64_t seed,
                       const EnumerationLimits& limits) {
  return ExactSampler(m, limits).sample(n, seed);
}

SampleSet gibbs_sample(const IsingModel& m, std::size_t n, std::size_t burn_in,
                       std::size_t thinning, std::uint64_t seed) {
  if (burn_in < 1) throw ArgumentError("gibbs_sample: burn_in must be >= 1");
  if (thinning < 1) throw ArgumentError("gibbs_sample: thinning must be >= 1");
  const Graph& g = m.graph();
  const int p = g.num_vertices();
  const double two_lambda = 2.0 * m.lambda();
  SplitMix64 rng(SplitMix64::mix(seed));
  std::vector<std::int8_t> x(p);
  for (auto& xi : x) xi = rng.next() >> 63 ? 1 : -1;

  auto sweep = [&] {
    for (int v = 0; v < p; ++v) {
      int field = 0;
      for (Vertex u : g.neighbors(v)) field += x[u];
      const double p_plus = 1.0 / (1.0 + std::exp(-two_lambda * field));
      x[v] = rng.uniform() < p_plus ? 1 : -1;
    }
  };

  for (std::size_t s = 0; s < burn_in; ++s) sweep();
  std::vector<std::int8_t> spins;
  spins.reserve(n * static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < thinning; ++s) sweep();
    spins.insert(spins.end(), x.begin(), x.end());
  }
  return SampleSet(p, n, std::move(spins), seed, std::string(SplitMix64::kGeneratorId));
}

double log_likelihood(const IsingModel& m, const SampleSet& s, double log_partition) {
  if (s.num_vertices() != m.num_vertices()) {
    throw DimensionError("log_likelihood: samples have p=" + std::to_string(s.num_vertices()) +
                         ", model has p=" + std::to_string(m.num_vertices()));
  }
  std::int64_t agree = 0;
  for (std::size_t i = 0; i < s.num_samples(); ++i) agree += agreement(m.graph(), s.sample(i));
  return m.lambda() * static_cast<double>(agree) -
         static_cast<double>(s.num_samples()) * log_partition;
}

double log_likelihood(const IsingModel& m, const SampleSet& s, const EnumerationLimits& limits) {
  if (s.num_vertices() != m.num_vertices()) {
    throw DimensionError("log_likelihood: samples have p=" + std::to_string(s.num_vertices()) +
                         ", model has p=" + std::to_string(m.num_vertices()));
  }
  return log_likelihood(m, s, log_partition(m, limits));
}

std::vector<std::int64_t> pair_statistics(const SampleSet& s) {
  const std::size_t p = static_cast<std::size_t>(s.num_vertices());
  std::vector<std::int64_t> stats(p * p, 0);
  for (std::size_t i = 0; i < s.num_samples(); ++i) {
    const auto x = s.sample(i);
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a + 1; b < p; ++b) stats[a * p + b] += x[a] * x[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    stats[a * p + a] = static_cast<std::int64_t>(s.num_samples());
    for (std::size_t b = a + 1; b < p; ++b) stats[b * p + a] = stats[a * p + b];
  }
  return stats;
}

double empirical_correlation(const SampleSet& s, Vertex a, Vertex b) {
  if (a < 0 || b < 0 || a >= s.num_vertices() || b >= s.num_vertices()) {
    throw ArgumentError("empirical_correlation: vertex out of range");
  }
  if (s.num_samples() == 0) return 0.0;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < s.num_samples(); ++i) sum += s.sample(i)[a] * s.sample(i)[b];
  return static_cast<double>(sum) / static_cast<double>(s.num_samples());
}

}  // namespace isinglb
