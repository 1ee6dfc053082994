#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "treepack/degseq.hpp"
#include "treepack/trees.hpp"

namespace treepack {

// Pairwise edge-disjoint trees on a common vertex set; tree k realizes the
// k-th input sequence.
struct PackingResult {
  int n = 0;
  std::vector<LabeledTree> trees;
};

// m tree sequences in which every vertex is a non-leaf in at most one row.
class MultiInstance {
 public:
  // Throws DomainError if a row is not a tree sequence or two rows share a
  // non-leaf vertex.
  explicit MultiInstance(DegreeMatrix matrix);

  const DegreeMatrix& matrix() const { return matrix_; }
  int rows() const { return matrix_.rows(); }
  int order() const { return matrix_.columns(); }
  // parts()[i] = sorted vertices with degree > 1 in row i.
  const std::vector<std::vector<Vertex>>& parts() const { return parts_; }
  const std::vector<Vertex>& free_leaves() const { return free_leaves_; }

 private:
  DegreeMatrix matrix_;
  std::vector<std::vector<Vertex>> parts_;
  std::vector<Vertex> free_leaves_;
};

// Vertex orders of two edge-disjoint Hamiltonian paths of K_n (n >= 4): the
// first is 1..n, the second runs from 2 to 3 and never joins consecutive
// integers.
std::pair<std::vector<Vertex>, std::vector<Vertex>> disjoint_hamiltonian_orders(int n);
std::pair<LabeledTree, LabeledTree> disjoint_hamiltonian_paths(int n);

// Edge-disjoint caterpillar realizations of two tree sequences without common
// leaves (min_i d_i + f_i >= 3).
PackingResult pack_caterpillars(const DegreeSequence& d, const DegreeSequence& f);

// Whether two tree sequences have edge-disjoint tree realizations
// (equivalently, whether d + f is graphical). Decision only.
bool kundu_packable(const DegreeSequence& d, const DegreeSequence& f);

// Edge-disjoint realizations of a complementary-leaf pair. Throws
// InfeasibleError when either sequence is a star.
PackingResult pack_complementary_leaves(const DegreeSequence& d, const DegreeSequence& f,
                                        std::uint64_t seed);

// A realization of d whose restriction to U ∪ V_j is a non-star tree for every
// part V_j, where U is the set of non-leaves of d.
LabeledTree nonstar_restricted_tree(const DegreeSequence& d,
                                    const std::vector<std::vector<Vertex>>& parts);

struct MultiPackingResult {
  PackingResult packing;
  // Row pairs (i, k), 0-based with i < k, whose shared edges were repaired.
  std::vector<std::pair<int, int>> repaired_pairs;
};

// m pairwise edge-disjoint trees realizing the rows. Throws InfeasibleError if
// some degree exceeds n - m.
MultiPackingResult pack_multi(const MultiInstance& inst, std::uint64_t seed);

std::vector<Edge> common_edges(const LabeledTree& a, const LabeledTree& b);

// The subgraph of `tree` induced by `vertices` (sorted), relabelled to
// 1..|vertices| in increasing order. Must be connected.
LabeledTree restrict_tree(const LabeledTree& tree, const std::vector<Vertex>& vertices);

bool is_star_tree(const LabeledTree& tree);

}  // namespace treepack
