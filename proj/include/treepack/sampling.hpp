#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treepack/degseq.hpp"
#include "treepack/trees.hpp"

namespace treepack {

// Leaf partition and collision statistics for a pair of tree sequences.
struct PairAnalysis {
  std::vector<Vertex> a;  // d_i > 1 and f_i = 1
  std::vector<Vertex> b;  // d_i = 1 and f_i > 1
  // Sum over i in A, j in B of (d_i - 1)(f_j - 1) / (n - 2)^2.
  Rational expected_common;
  // Lower bound on the probability that two uniform realizations are edge
  // disjoint; zero unless |A| >= 2 and |B| >= 2.
  Rational p_lower;
};

PairAnalysis analyze_pair(const DegreeSequence& d, const DegreeSequence& f);

// Exact expected number of shared edges of independent uniform realizations,
// for any leaf overlap: sum over i < j of p_D(i, j) p_F(i, j).
Rational expected_common_general(const DegreeSequence& d, const DegreeSequence& f);

// Chernoff sample size: ceil(max(-2 ln(delta/2) / (p eps^2),
//                                -2 (1 - p) ln(delta/2) / (p^2 eps^2))).
std::uint64_t required_samples(const Rational& p_lower, double epsilon, double delta);

struct EstimateOptions {
  double epsilon = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  // Samples per batch; batch b always draws from stream Rng::split(seed, b),
  // so the result does not depend on the worker count.
  std::uint64_t batch_size = 4096;
};

struct EstimateReport {
  std::uint64_t samples_used = 0;
  std::uint64_t hits = 0;
  Rational p_hat;
  Rational p_lower;
  BigInt trees_d;
  BigInt trees_f;
  Rational count_estimate;  // p_hat * trees_d * trees_f
  double epsilon = 0;
  double delta = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t batch_size = 0;
};

// Monte Carlo estimate of the number of edge-disjoint ordered realization
// pairs of a complementary-leaf, non-star pair.
EstimateReport estimate_disjoint_count(const DegreeSequence& d, const DegreeSequence& f,
                                       const EstimateOptions& options);

struct SampledPair {
  LabeledTree first;
  LabeledTree second;
  std::uint64_t attempts = 0;
  std::uint64_t budget = 0;   // ceil(-ln(eps) / p_lower)
  bool fallback_used = false;  // budget exhausted; sampling continued until success
};

// An edge-disjoint pair whose distribution is within total variation epsilon
// of uniform over all edge-disjoint ordered pairs.
SampledPair sample_disjoint_pair(const DegreeSequence& d, const DegreeSequence& f, double epsilon,
                                 std::uint64_t seed);

inline constexpr int kDefaultExactGuard = 8;

// Number of ordered pairs of realizations with no common edge, by double
// enumeration. Throws ResourceError when n exceeds guard_n.
BigInt exact_disjoint_count(const DegreeSequence& d, const DegreeSequence& f,
                            int guard_n = kDefaultExactGuard);

// Half the L1 distance between two distributions on the same index set.
double tv_distance(std::span<const double> p, std::span<const double> q);

// Shared preconditions of the estimator and sampler: equal-length tree
// sequences with complementary leaves, n >= 4.
void require_complementary_pair(const DegreeSequence& d, const DegreeSequence& f);

}  // namespace treepack
