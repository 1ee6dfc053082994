#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "treepack/degseq.hpp"
#include "treepack/rng.hpp"

namespace treepack {

// Unordered vertex pair stored with u < v.
struct Edge {
  Vertex u;
  Vertex v;

  static Edge of(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A tree on vertices 1..n. Edges are kept sorted, so two trees are equal
// exactly when their edge sets are.
class LabeledTree {
 public:
  // Validates the edge set; throws StructureError if it is not a tree.
  LabeledTree(int n, std::vector<Edge> edges);

  int order() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  bool has_edge(Vertex a, Vertex b) const;
  DegreeSequence degree_sequence() const;
  // Neighbour lists indexed 1..n (index 0 unused).
  std::vector<std::vector<Vertex>> adjacency() const;

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
  friend auto operator<=>(const LabeledTree&, const LabeledTree&) = default;

 private:
  int n_;
  std::vector<Edge> edges_;
};

class PruferCode {
 public:
  // code.size() must be n - 2 and every entry in 1..n.
  PruferCode(int n, std::vector<Vertex> code);

  int order() const { return n_; }
  std::span<const Vertex> symbols() const { return code_; }

  friend bool operator==(const PruferCode&, const PruferCode&) = default;

 private:
  int n_;
  std::vector<Vertex> code_;
};

LabeledTree prufer_decode(const PruferCode& code);
PruferCode prufer_encode(const LabeledTree& tree);

// Number of labeled trees with degree sequence d: (n-2)! / prod (d_k - 1)!.
BigInt count_trees(const DegreeSequence& d);

// Number of those trees that contain the edge {i, j}:
// (d_i + d_j - 2) (n-3)! / prod (d_k - 1)!.
BigInt count_trees_with_edge(const DegreeSequence& d, Vertex i, Vertex j);

// Streams every tree with degree sequence d exactly once, in lexicographic
// order of Prüfer codes.
class TreeEnumerator {
 public:
  explicit TreeEnumerator(const DegreeSequence& d);
  std::optional<LabeledTree> next();

 private:
  int n_;
  std::vector<Vertex> code_;
  bool done_ = false;
};

std::vector<LabeledTree> enumerate_trees(const DegreeSequence& d);

// The sorted Prüfer multiset of d: vertex i repeated d_i - 1 times.
std::vector<Vertex> prufer_multiset(const DegreeSequence& d);

// Draws many uniform realizations of one tree sequence without reallocating.
// Each draw shuffles the sorted Prüfer multiset (Fisher–Yates) and decodes it
// into a parent array rooted at n.
class RealizationSampler {
 public:
  explicit RealizationSampler(const DegreeSequence& d);

  // parent[v] for v in 1..n-1; parent[n] == 0. Valid until the next draw.
  std::span<const Vertex> draw(Rng& rng);
  LabeledTree draw_tree(Rng& rng);

  int order() const { return n_; }

 private:
  int n_;
  std::vector<Vertex> sorted_;
  std::vector<Vertex> code_;
  std::vector<int> degree_;
  std::vector<Vertex> parent_;
};

// Decodes a Prüfer sequence into parent[] (rooted at n, parent[n] = 0).
// `degree` is scratch space of size n + 1.
void decode_into(int n, std::span<const Vertex> code, std::span<int> degree,
                 std::span<Vertex> parent);

LabeledTree tree_from_parents(std::span<const Vertex> parent);

// Whether two trees given as parent arrays over the same n share an edge.
bool parents_share_edge(std::span<const Vertex> a, std::span<const Vertex> b);

// One bit per vertex pair; only for n <= 11 (55 pairs).
inline constexpr int kMaxBitmaskOrder = 11;
std::uint64_t edge_bitmask(const LabeledTree& tree);

// Uniform over all realizations of d; deterministic in seed.
LabeledTree random_tree(const DegreeSequence& d, std::uint64_t seed);
LabeledTree random_tree(const DegreeSequence& d, Rng& rng);

bool is_caterpillar(const LabeledTree& tree);

// Non-leaf vertices of a caterpillar in path order, starting from the end with
// the smaller label. Empty for n <= 2. Throws DomainError if not a caterpillar.
std::vector<Vertex> caterpillar_spine(const LabeledTree& tree);

// Every caterpillar realization of d, generated from spine orderings and leaf
// assignments rather than by filtering all trees.
std::vector<LabeledTree> enumerate_caterpillars(const DegreeSequence& d);

// Probability that a uniform realization of d contains {i, j}:
// (d_i + d_j - 2) / (n - 2).
Rational edge_probability(const DegreeSequence& d, Vertex i, Vertex j);

}  // namespace treepack
