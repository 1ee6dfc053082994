#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "oracles.hpp"
#include "treepack/errors.hpp"
#include "treepack/packing.hpp"
#include "treepack/sampling.hpp"

using namespace treepack;

namespace {

const DegreeSequence kSmallD{2, 2, 1, 1}, kSmallF{1, 1, 2, 2};
const DegreeSequence kSevenD{4, 3, 1, 1, 1, 1, 1}, kSevenF{1, 1, 3, 3, 2, 1, 1};

// Mean shared edges over all realization pairs, by enumeration.
Rational enumerated_mean_common(const oracle::Degrees& d, const oracle::Degrees& f) {
  long long shared = 0, pairs = 0;
  for (const auto& a : oracle::trees_with(d)) {
    for (const auto& b : oracle::trees_with(f)) {
      for (const auto& e : a) shared += std::ranges::count(b, e);
      ++pairs;
    }
  }
  return Rational(shared, pairs);
}

}  // namespace

TEST_CASE("pair analysis examples") {
  const auto small = analyze_pair(kSmallD, kSmallF);
  CHECK(small.a == std::vector<Vertex>{1, 2});
  CHECK(small.b == std::vector<Vertex>{3, 4});
  CHECK(small.expected_common == 1);
  CHECK(small.p_lower == Rational(1, 4));

  const auto stars = analyze_pair({3, 1, 1, 1}, {1, 3, 1, 1});
  CHECK(stars.expected_common == 1);
  CHECK(stars.p_lower == 0);

  const auto same = analyze_pair({2, 2, 1, 1}, {2, 2, 1, 1});
  CHECK(same.a.empty());
  CHECK(same.b.empty());
  CHECK(same.expected_common == 0);

  CHECK(analyze_pair(kSevenD, kSevenF).p_lower == Rational(3, 50));
  CHECK_THROWS_AS(analyze_pair({2, 1, 1}, {2, 1, 1}), DomainError);
  CHECK_THROWS_AS(analyze_pair({2, 2, 2}, {2, 2, 2}), DomainError);
}

TEST_CASE("expected shared edges is one for every complementary-leaf pair, n <= 7") {
  for (int n = 4; n <= 7; ++n) {
    const auto seqs = oracle::tree_sequences(n);
    for (const auto& dv : seqs) {
      for (const auto& fv : seqs) {
        const DegreeSequence d(dv), f(fv);
        if (!has_complementary_leaves(d, f)) continue;
        CHECK(analyze_pair(d, f).expected_common == 1);
        CHECK(expected_common_general(d, f) == 1);
      }
    }
  }
}

TEST_CASE("general expectation matches enumeration for every pair, n <= 6") {
  CHECK(expected_common_general({2, 1, 1}, {2, 1, 1}) == 2);
  CHECK(expected_common_general(kSmallD, kSmallF) == 1);
  CHECK(expected_common_general({3, 1, 1, 1}, {1, 3, 1, 1}) == 1);
  for (int n = 3; n <= 6; ++n) {
    const auto seqs = oracle::tree_sequences(n);
    for (const auto& dv : seqs) {
      for (const auto& fv : seqs) {
        CHECK(expected_common_general(DegreeSequence(dv), DegreeSequence(fv)) ==
              enumerated_mean_common(dv, fv));
      }
    }
  }
}

TEST_CASE("disjointness lower bound holds against enumeration, n <= 7") {
  for (int n = 4; n <= 7; ++n) {
    const auto seqs = oracle::tree_sequences(n);
    for (const auto& dv : seqs) {
      for (const auto& fv : seqs) {
        const DegreeSequence d(dv), f(fv);
        if (!has_complementary_leaves(d, f)) continue;
        const Rational truth(oracle::disjoint_pairs(dv, fv),
                             static_cast<long long>(oracle::trees_with(dv).size() *
                                                    oracle::trees_with(fv).size()));
        CHECK(analyze_pair(d, f).p_lower <= truth);
      }
    }
  }
}

TEST_CASE("sample size") {
  CHECK(required_samples(Rational(1, 2), 0.1, 0.05) == 1476);
  CHECK(required_samples(Rational(1, 4), 0.2, 0.1) == 1798);
  CHECK(required_samples(1, 0.1, 0.05) == static_cast<std::uint64_t>(std::ceil(-2 * std::log(0.025) / 0.01)));
  CHECK_THROWS_AS(required_samples(0, 0.1, 0.05), DomainError);
  CHECK_THROWS_AS(required_samples(Rational(3, 2), 0.1, 0.05), DomainError);
  CHECK_THROWS_AS(required_samples(Rational(1, 2), 0, 0.05), DomainError);
  CHECK_THROWS_AS(required_samples(Rational(1, 2), 0.1, 1), DomainError);
}

TEST_CASE("exact disjoint counts") {
  CHECK(exact_disjoint_count(kSmallD, kSmallF) == 2);
  CHECK(exact_disjoint_count({2, 1, 1}, {2, 1, 1}) == 0);
  CHECK(exact_disjoint_count({3, 1, 1, 1}, {1, 3, 1, 1}) == 0);
  CHECK(exact_disjoint_count(kSevenD, kSevenF) == 72);
  CHECK_THROWS_AS(exact_disjoint_count({2, 2, 2, 2, 2, 2, 2, 1, 1}, {1, 1, 2, 2, 2, 2, 2, 2, 2}),
                  ResourceError);
  CHECK(exact_disjoint_count({2, 2, 2, 2, 2, 2, 2, 1, 1}, {1, 1, 2, 2, 2, 2, 2, 2, 2}, 9) > 0);
  for (int n = 2; n <= 6; ++n) {
    const auto seqs = oracle::tree_sequences(n);
    for (const auto& dv : seqs) {
      for (const auto& fv : seqs) {
        CHECK(exact_disjoint_count(DegreeSequence(dv), DegreeSequence(fv)) ==
              oracle::disjoint_pairs(dv, fv));
      }
    }
  }
}

TEST_CASE("estimator") {
  EstimateOptions opts;
  opts.epsilon = 0.2;
  opts.delta = 0.1;
  opts.seed = 17;
  const auto r = estimate_disjoint_count(kSmallD, kSmallF, opts);
  CHECK(r.samples_used == required_samples(Rational(1, 4), 0.2, 0.1));
  CHECK(r.hits <= r.samples_used);
  CHECK(r.count_estimate == r.p_hat * Rational(r.trees_d * r.trees_f));
  CHECK(r.trees_d == 2);
  CHECK(r.trees_f == 2);
  CHECK(r.count_estimate >= Rational(2) / Rational(6, 5));
  CHECK(r.count_estimate <= Rational(2) * Rational(6, 5));

  opts.epsilon = 0.25;
  const auto seven = estimate_disjoint_count(kSevenD, kSevenF, opts);
  CHECK(static_cast<double>(seven.count_estimate) >= 72 / 1.25);
  CHECK(static_cast<double>(seven.count_estimate) <= 72 * 1.25);

  CHECK_THROWS_AS(estimate_disjoint_count({3, 1, 1, 1}, {1, 3, 1, 1}, opts), DomainError);
  CHECK_THROWS_AS(estimate_disjoint_count(kSmallD, kSmallD, opts), DomainError);
}

TEST_CASE("estimator is deterministic and independent of the worker count") {
  EstimateOptions opts;
  opts.seed = 99;
  opts.batch_size = 1000;
  const auto one = estimate_disjoint_count(kSevenD, kSevenF, opts);
  opts.workers = 3;
  const auto three = estimate_disjoint_count(kSevenD, kSevenF, opts);
  CHECK(one.hits == three.hits);
  CHECK(one.count_estimate == three.count_estimate);
  CHECK(three.workers == 3);
  opts.seed = 100;
  CHECK(estimate_disjoint_count(kSevenD, kSevenF, opts).hits != one.hits);
}

TEST_CASE("sampler output") {
  std::map<std::pair<LabeledTree, LabeledTree>, int> freq;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto s = sample_disjoint_pair(kSmallD, kSmallF, 0.01, seed);
    CHECK(s.first.degree_sequence() == kSmallD);
    CHECK(s.second.degree_sequence() == kSmallF);
    CHECK(common_edges(s.first, s.second).empty());
    CHECK(s.budget == static_cast<std::uint64_t>(std::ceil(-std::log(0.01) * 4)));
    CHECK(s.fallback_used == (s.attempts > s.budget));
    ++freq[{s.first, s.second}];
  }
  REQUIRE(freq.size() == 2);
  double tv = 0;
  for (const auto& [pair, c] : freq) tv += std::abs(c / 10000.0 - 0.5);
  CHECK(tv / 2 <= 0.05);

  const auto a = sample_disjoint_pair(kSevenD, kSevenF, 0.05, 5);
  const auto b = sample_disjoint_pair(kSevenD, kSevenF, 0.05, 5);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.attempts == b.attempts);

  CHECK_THROWS_AS(sample_disjoint_pair({4, 1, 1, 1, 1}, {1, 2, 2, 2, 1}, 0.1, 1), InfeasibleError);
  CHECK_THROWS_AS(sample_disjoint_pair(kSmallD, kSmallF, 1.5, 1), DomainError);
  CHECK_THROWS_AS(sample_disjoint_pair(kSmallD, kSmallD, 0.1, 1), DomainError);
}

TEST_CASE("total variation distance") {
  const std::vector<double> p{0.75, 0.25}, q{0.5, 0.5};
  CHECK(tv_distance(p, p) == 0);
  CHECK(tv_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 1);
  CHECK(tv_distance(p, q) == doctest::Approx(0.25));
  CHECK_THROWS_AS(tv_distance(p, std::vector<double>{1}), DimensionError);
  CHECK_THROWS_AS(tv_distance(p, std::vector<double>{0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(tv_distance(p, std::vector<double>{1.5, -0.5}), DomainError);
}
