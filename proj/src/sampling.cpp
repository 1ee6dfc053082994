#include "treepack/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "treepack/errors.hpp"

namespace treepack {

namespace {

std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

void require_tree_pair(const DegreeSequence& d, const DegreeSequence& f) {
  require_same_length(d, f);
  require_tree_sequence(d, "D");
  require_tree_sequence(f, "F");
}

// Two vertices of `set` with the largest weight, ties to the smaller label.
std::pair<Vertex, Vertex> top_two(const std::vector<Vertex>& set, const DegreeSequence& w) {
  std::vector<Vertex> sorted = set;
  std::ranges::stable_sort(sorted, [&](Vertex a, Vertex b) { return w(a) > w(b); });
  return {sorted[0], sorted[1]};
}

}  // namespace

PairAnalysis analyze_pair(const DegreeSequence& d, const DegreeSequence& f) {
  require_tree_pair(d, f);
  const int n = d.size();
  if (n < 4) throw DomainError("pair analysis needs n >= 4");

  PairAnalysis out;
  for (Vertex v = 1; v <= n; ++v) {
    if (d(v) > 1 && f(v) == 1) out.a.push_back(v);
    if (d(v) == 1 && f(v) > 1) out.b.push_back(v);
  }
  const BigInt scale = BigInt(n - 2) * (n - 2);
  BigInt total = 0;
  for (Vertex i : out.a) {
    for (Vertex j : out.b) total += BigInt(d(i) - 1) * (f(j) - 1);
  }
  out.expected_common = Rational(total, scale);

  if (out.a.size() >= 2 && out.b.size() >= 2) {
    const auto [i1, i2] = top_two(out.a, d);
    const auto [j1, j2] = top_two(out.b, f);
    const BigInt num = BigInt(d(i1) - 1) * (d(i2) - 1) * (f(j1) - 1) * (f(j2) - 1);
    out.p_lower = Rational(num, scale * (n - 3) * (n - 3));
  } else {
    out.p_lower = 0;
  }
  return out;
}

Rational expected_common_general(const DegreeSequence& d, const DegreeSequence& f) {
  require_tree_pair(d, f);
  const int n = d.size();
  if (n < 3) throw DomainError("expected common edges needs n >= 3");
  Rational total = 0;
  for (Vertex i = 1; i <= n; ++i) {
    for (Vertex j = i + 1; j <= n; ++j) total += edge_probability(d, i, j) * edge_probability(f, i, j);
  }
  return total;
}

std::uint64_t required_samples(const Rational& p_lower, double epsilon, double delta) {
  if (p_lower <= 0 || p_lower > 1) throw DomainError("p must lie in (0, 1]");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (!(delta > 0 && delta < 1)) throw DomainError("delta must lie in (0, 1)");
  const double p = static_cast<double>(p_lower);
  const double log_term = -2.0 * std::log(delta / 2.0);
  const double lower_tail = log_term / (p * epsilon * epsilon);
  const double upper_tail = (1.0 - p) * log_term / (p * p * epsilon * epsilon);
  return static_cast<std::uint64_t>(std::ceil(std::max(lower_tail, upper_tail)));
}

void require_complementary_pair(const DegreeSequence& d, const DegreeSequence& f) {
  require_tree_pair(d, f);
  if (d.size() < 4) throw DomainError("need n >= 4");
  if (!has_complementary_leaves(d, f)) throw DomainError("some vertex is a non-leaf in both sequences");
}

EstimateReport estimate_disjoint_count(const DegreeSequence& d, const DegreeSequence& f,
                                       const EstimateOptions& options) {
  require_complementary_pair(d, f);
  if (is_star_sequence(d) || is_star_sequence(f)) throw DomainError("star sequences are not supported");
  if (options.workers == 0) throw DomainError("need at least one worker");
  if (options.batch_size == 0) throw DomainError("batch size must be positive");

  EstimateReport report;
  report.p_lower = analyze_pair(d, f).p_lower;
  report.samples_used = required_samples(report.p_lower, options.epsilon, options.delta);
  report.epsilon = options.epsilon;
  report.delta = options.delta;
  report.seed = options.seed;
  report.workers = options.workers;
  report.batch_size = options.batch_size;

  const std::uint64_t batches = (report.samples_used + options.batch_size - 1) / options.batch_size;
  std::vector<std::uint64_t> batch_hits(batches, 0);
  auto work = [&](unsigned worker) {
    RealizationSampler sd(d), sf(f);
    std::vector<Vertex> pd(idx(d.size()) + 1);
    for (std::uint64_t b = worker; b < batches; b += options.workers) {
      Rng rng(Rng::split(options.seed, b));
      const std::uint64_t count =
          std::min(options.batch_size, report.samples_used - b * options.batch_size);
      std::uint64_t hits = 0;
      for (std::uint64_t s = 0; s < count; ++s) {
        const auto drawn = sd.draw(rng);
        std::copy(drawn.begin(), drawn.end(), pd.begin());
        hits += !parents_share_edge(pd, sf.draw(rng));
      }
      batch_hits[b] = hits;
    }
  };
  if (options.workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < options.workers; ++w) pool.emplace_back(work, w);
  }

  report.hits = std::accumulate(batch_hits.begin(), batch_hits.end(), std::uint64_t{0});
  report.p_hat = Rational(BigInt(report.hits), BigInt(report.samples_used));
  report.trees_d = count_trees(d);
  report.trees_f = count_trees(f);
  report.count_estimate = report.p_hat * Rational(report.trees_d * report.trees_f);
  return report;
}

SampledPair sample_disjoint_pair(const DegreeSequence& d, const DegreeSequence& f, double epsilon,
                                 std::uint64_t seed) {
  require_complementary_pair(d, f);
  if (is_star_sequence(d) || is_star_sequence(f)) {
    throw InfeasibleError("a star sequence has no edge-disjoint partner (degree n-1)");
  }
  if (!(epsilon > 0 && epsilon < 1)) throw DomainError("epsilon must lie in (0, 1)");

  const Rational p = analyze_pair(d, f).p_lower;
  const auto budget =
      static_cast<std::uint64_t>(std::ceil(-std::log(epsilon) / static_cast<double>(p)));

  Rng rng(seed);
  RealizationSampler sd(d), sf(f);
  std::vector<Vertex> pd(idx(d.size()) + 1);
  // Every edge-disjoint pair drawn here is uniform over the solutions; past the
  // budget the search simply continues until one appears.
  for (std::uint64_t attempt = 1;; ++attempt) {
    const auto drawn = sd.draw(rng);
    std::copy(drawn.begin(), drawn.end(), pd.begin());
    const auto pf = sf.draw(rng);
    if (parents_share_edge(pd, pf)) continue;
    return SampledPair{tree_from_parents(pd), tree_from_parents(pf), attempt, budget,
                       attempt > budget};
  }
}

BigInt exact_disjoint_count(const DegreeSequence& d, const DegreeSequence& f, int guard_n) {
  require_tree_pair(d, f);
  const int n = d.size();
  if (n > guard_n) {
    throw ResourceError("exact count limited to n <= " + std::to_string(guard_n) + ", got n=" +
                        std::to_string(n));
  }
  if (n > kMaxBitmaskOrder) {
    throw ResourceError("exact count supports at most n=" + std::to_string(kMaxBitmaskOrder));
  }
  std::vector<std::uint64_t> f_masks;
  {
    TreeEnumerator ef(f);
    while (auto t = ef.next()) f_masks.push_back(edge_bitmask(*t));
  }
  BigInt total = 0;
  TreeEnumerator ed(d);
  while (auto t = ed.next()) {
    const std::uint64_t mask = edge_bitmask(*t);
    std::uint64_t hits = 0;
    for (std::uint64_t fm : f_masks) hits += (mask & fm) == 0;
    total += hits;
  }
  return total;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("distributions have different support sizes");
  auto check = [](std::span<const double> x, const char* name) {
    double s = 0;
    for (double v : x) {
      if (!(v >= 0)) throw DomainError(std::string(name) + " has a negative entry");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw DomainError(std::string(name) + " does not sum to 1");
  };
  check(p, "p");
  check(q, "q");
  double l1 = 0;
  for (std::size_t k = 0; k < p.size(); ++k) l1 += std::abs(p[k] - q[k]);
  return 0.5 * l1;
}

}  // namespace treepack
