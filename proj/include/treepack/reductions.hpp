#pragma once

#include <vector>

#include "treepack/degseq.hpp"

namespace treepack {

// Degree lists of a bipartite pair: class 1 has n1 vertices, class 2 has n2.
struct BipartiteDegrees {
  std::vector<int> first;
  std::vector<int> second;
};

struct BipartitePairInstance {
  int n1 = 0;
  int n2 = 0;
  BipartiteDegrees d;
  BipartiteDegrees f;
};

struct SimplePairInstance {
  DegreeSequence d;
  DegreeSequence f;
};

// Throws DomainError on shape or degree-sum violations.
void validate(const BipartitePairInstance& inst);

// Adds n1 - 1 to class-1 degrees of D and n2 - 1 to class-2 degrees of F,
// forcing K_{n1} into D and K_{n2} into F.
SimplePairInstance bipartite_to_simple(const BipartitePairInstance& inst);

// D' = (d_1 + 1, ..., d_n + 1, n), F' = (f_1, ..., f_n, 0).
SimplePairInstance add_dominating_vertex(const SimplePairInstance& inst);

// D' = (d_1, ..., d_n, 1, 1), F' = (f_1 + 1, ..., f_n + 1, n, 0).
SimplePairInstance add_pendant_gadget(const SimplePairInstance& inst);

struct ReductionTrace {
  SimplePairInstance result;
  int dominating_steps = 0;
  int pendant_steps = 0;
};

// Chains the gadgets until D' is a tree sequence: dominating vertices while D
// has a zero or sum(D) < 2n - 2, then (sum(D) - (2n - 2)) / 2 pendant gadgets.
ReductionTrace reduce_to_tree_sequence(const SimplePairInstance& inst);

inline constexpr int kDefaultBruteGuard = 7;

// Whether edge-disjoint simple graphs realize D and F, by exhaustive search.
// Throws ResourceError when n exceeds guard_n.
bool brute_force_disjoint_decision(const SimplePairInstance& inst,
                                   int guard_n = kDefaultBruteGuard);

}  // namespace treepack
