#include "treepack/trees.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "treepack/errors.hpp"

namespace treepack {

namespace {

BigInt factorial(int k) {
  BigInt r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

}  // namespace

LabeledTree::LabeledTree(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw StructureError("tree needs at least one vertex");
  if (static_cast<int>(edges_.size()) != n - 1) {
    throw StructureError("tree on " + std::to_string(n) + " vertices needs " +
                         std::to_string(n - 1) + " edges, got " + std::to_string(edges_.size()));
  }
  for (auto& e : edges_) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) throw StructureError("edge endpoint out of range");
    if (e.u == e.v) throw StructureError("self-loop");
    e = Edge::of(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw StructureError("repeated edge");
  }
  // n - 1 edges and acyclic <=> tree.
  std::vector<Vertex> root(idx(n) + 1);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](Vertex x) {
    while (root[idx(x)] != x) x = root[idx(x)] = root[idx(root[idx(x)])];
    return x;
  };
  for (const auto& e : edges_) {
    const Vertex a = find(e.u), b = find(e.v);
    if (a == b) throw StructureError("edge set contains a cycle");
    root[idx(a)] = b;
  }
}

bool LabeledTree::has_edge(Vertex a, Vertex b) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge::of(a, b));
}

DegreeSequence LabeledTree::degree_sequence() const {
  std::vector<int> deg(idx(n_), 0);
  for (const auto& e : edges_) {
    ++deg[idx(e.u - 1)];
    ++deg[idx(e.v - 1)];
  }
  return DegreeSequence(std::move(deg));
}

std::vector<std::vector<Vertex>> LabeledTree::adjacency() const {
  std::vector<std::vector<Vertex>> adj(idx(n_) + 1);
  for (const auto& e : edges_) {
    adj[idx(e.u)].push_back(e.v);
    adj[idx(e.v)].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

PruferCode::PruferCode(int n, std::vector<Vertex> code) : n_(n), code_(std::move(code)) {
  if (n < 2) throw DomainError("Prüfer codes need n >= 2");
  if (static_cast<int>(code_.size()) != n - 2) {
    throw DomainError("Prüfer code for n=" + std::to_string(n) + " must have length " +
                      std::to_string(n - 2));
  }
  for (Vertex x : code_) {
    if (x < 1 || x > n) throw DomainError("Prüfer symbol " + std::to_string(x) + " outside 1..n");
  }
}

void decode_into(int n, std::span<const Vertex> code, std::span<int> degree,
                 std::span<Vertex> parent) {
  std::fill(degree.begin(), degree.end(), 1);
  for (Vertex c : code) ++degree[idx(c)];
  Vertex ptr = 1;
  while (degree[idx(ptr)] != 1) ++ptr;
  Vertex leaf = ptr;
  for (Vertex c : code) {
    parent[idx(leaf)] = c;
    degree[idx(leaf)] = 0;
    if (--degree[idx(c)] == 1 && c < ptr) {
      leaf = c;
    } else {
      do ++ptr; while (degree[idx(ptr)] != 1);
      leaf = ptr;
    }
  }
  parent[idx(leaf)] = n;
  parent[idx(n)] = 0;
}

LabeledTree tree_from_parents(std::span<const Vertex> parent) {
  const int n = static_cast<int>(parent.size()) - 1;
  std::vector<Edge> edges;
  edges.reserve(idx(n));
  for (Vertex v = 1; v <= n; ++v) {
    if (parent[idx(v)] != 0) edges.push_back(Edge::of(v, parent[idx(v)]));
  }
  return LabeledTree(n, std::move(edges));
}

bool parents_share_edge(std::span<const Vertex> a, std::span<const Vertex> b) {
  for (std::size_t v = 1; v < b.size(); ++v) {
    const Vertex u = b[v];
    if (u == 0) continue;
    if (a[v] == u || a[idx(u)] == static_cast<Vertex>(v)) return true;
  }
  return false;
}

std::uint64_t edge_bitmask(const LabeledTree& tree) {
  const int n = tree.order();
  if (n > kMaxBitmaskOrder) throw DomainError("edge bitmask needs n <= 11");
  std::uint64_t mask = 0;
  for (const auto& e : tree.edges()) {
    // Pairs (u, v), u < v, numbered row by row.
    const int bit = (e.u - 1) * n - (e.u - 1) * e.u / 2 + (e.v - e.u - 1);
    mask |= std::uint64_t{1} << bit;
  }
  return mask;
}

LabeledTree prufer_decode(const PruferCode& code) {
  const int n = code.order();
  std::vector<int> degree(idx(n) + 1);
  std::vector<Vertex> parent(idx(n) + 1);
  decode_into(n, code.symbols(), degree, parent);
  return tree_from_parents(parent);
}

PruferCode prufer_encode(const LabeledTree& tree) {
  const int n = tree.order();
  if (n < 2) throw StructureError("Prüfer codes need n >= 2");
  const auto adj = tree.adjacency();

  // Root at n.
  std::vector<Vertex> parent(idx(n) + 1, 0);
  std::vector<Vertex> stack{n};
  std::vector<bool> seen(idx(n) + 1, false);
  seen[idx(n)] = true;
  while (!stack.empty()) {
    const Vertex x = stack.back();
    stack.pop_back();
    for (Vertex y : adj[idx(x)]) {
      if (!seen[idx(y)]) {
        seen[idx(y)] = true;
        parent[idx(y)] = x;
        stack.push_back(y);
      }
    }
  }

  std::vector<int> degree(idx(n) + 1, 0);
  for (Vertex v = 1; v <= n; ++v) degree[idx(v)] = static_cast<int>(adj[idx(v)].size());

  std::vector<Vertex> code;
  code.reserve(idx(n));
  Vertex ptr = 1;
  while (degree[idx(ptr)] != 1) ++ptr;
  Vertex leaf = ptr;
  for (int step = 0; step < n - 2; ++step) {
    const Vertex next = parent[idx(leaf)];
    code.push_back(next);
    degree[idx(leaf)] = 0;
    if (--degree[idx(next)] == 1 && next < ptr) {
      leaf = next;
    } else {
      do ++ptr; while (degree[idx(ptr)] != 1);
      leaf = ptr;
    }
  }
  return PruferCode(n, std::move(code));
}

BigInt count_trees(const DegreeSequence& d) {
  require_tree_sequence(d, "D");
  BigInt denom = 1;
  for (int x : d.values()) denom *= factorial(x - 1);
  return factorial(d.size() - 2) / denom;
}

namespace {

void require_vertex_pair(const DegreeSequence& d, Vertex i, Vertex j) {
  const int n = d.size();
  if (i < 1 || i > n || j < 1 || j > n) throw DomainError("vertex out of range");
  if (i == j) throw DomainError("edge endpoints must differ");
}

}  // namespace

BigInt count_trees_with_edge(const DegreeSequence& d, Vertex i, Vertex j) {
  require_tree_sequence(d, "D");
  require_vertex_pair(d, i, j);
  const int n = d.size();
  if (n == 2) return 1;
  BigInt denom = 1;
  for (int x : d.values()) denom *= factorial(x - 1);
  return BigInt(d(i) + d(j) - 2) * factorial(n - 3) / denom;
}

Rational edge_probability(const DegreeSequence& d, Vertex i, Vertex j) {
  require_tree_sequence(d, "D");
  require_vertex_pair(d, i, j);
  if (d.size() < 3) throw DomainError("edge probability needs n >= 3");
  return Rational(count_trees_with_edge(d, i, j), count_trees(d));
}

std::vector<Vertex> prufer_multiset(const DegreeSequence& d) {
  std::vector<Vertex> ms;
  for (Vertex v = 1; v <= d.size(); ++v) ms.insert(ms.end(), idx(d(v) - 1), v);
  return ms;
}

TreeEnumerator::TreeEnumerator(const DegreeSequence& d) : n_(d.size()) {
  require_tree_sequence(d, "D");
  code_ = prufer_multiset(d);
}

std::optional<LabeledTree> TreeEnumerator::next() {
  if (done_) return std::nullopt;
  LabeledTree t = prufer_decode(PruferCode(n_, code_));
  done_ = !std::next_permutation(code_.begin(), code_.end());
  return t;
}

std::vector<LabeledTree> enumerate_trees(const DegreeSequence& d) {
  std::vector<LabeledTree> out;
  TreeEnumerator e(d);
  while (auto t = e.next()) out.push_back(std::move(*t));
  return out;
}

RealizationSampler::RealizationSampler(const DegreeSequence& d) : n_(d.size()) {
  require_tree_sequence(d, "D");
  sorted_ = prufer_multiset(d);
  code_ = sorted_;
  degree_.resize(idx(n_) + 1);
  parent_.resize(idx(n_) + 1);
}

std::span<const Vertex> RealizationSampler::draw(Rng& rng) {
  std::copy(sorted_.begin(), sorted_.end(), code_.begin());
  for (std::size_t i = code_.size(); i > 1; --i) {
    std::swap(code_[i - 1], code_[rng.below(i)]);
  }
  decode_into(n_, code_, degree_, parent_);
  return parent_;
}

LabeledTree RealizationSampler::draw_tree(Rng& rng) { return tree_from_parents(draw(rng)); }

LabeledTree random_tree(const DegreeSequence& d, Rng& rng) {
  RealizationSampler s(d);
  return s.draw_tree(rng);
}

LabeledTree random_tree(const DegreeSequence& d, std::uint64_t seed) {
  Rng rng(seed);
  return random_tree(d, rng);
}

namespace {

// Degree of each vertex inside the subgraph induced by non-leaves.
std::vector<int> spine_degrees(const LabeledTree& tree, const std::vector<std::vector<Vertex>>& adj) {
  const int n = tree.order();
  std::vector<int> sd(idx(n) + 1, 0);
  for (const auto& e : tree.edges()) {
    if (adj[idx(e.u)].size() >= 2 && adj[idx(e.v)].size() >= 2) {
      ++sd[idx(e.u)];
      ++sd[idx(e.v)];
    }
  }
  return sd;
}

}  // namespace

bool is_caterpillar(const LabeledTree& tree) {
  // Removing the leaves of a tree leaves a (connected) subtree; it is a path
  // iff no vertex has more than two non-leaf neighbours.
  const auto adj = tree.adjacency();
  const auto sd = spine_degrees(tree, adj);
  return std::ranges::all_of(sd, [](int x) { return x <= 2; });
}

std::vector<Vertex> caterpillar_spine(const LabeledTree& tree) {
  const int n = tree.order();
  const auto adj = tree.adjacency();
  const auto sd = spine_degrees(tree, adj);
  std::vector<Vertex> spine;
  if (n <= 2) return spine;
  Vertex start = 0;
  for (Vertex v = 1; v <= n; ++v) {
    if (adj[idx(v)].size() < 2) continue;
    if (sd[idx(v)] > 2) throw DomainError("tree is not a caterpillar");
    if (sd[idx(v)] <= 1 && start == 0) start = v;
  }
  Vertex prev = 0, cur = start;
  while (cur != 0) {
    spine.push_back(cur);
    Vertex next = 0;
    for (Vertex y : adj[idx(cur)]) {
      if (y != prev && adj[idx(y)].size() >= 2) next = y;
    }
    prev = cur;
    cur = next;
  }
  return spine;
}

std::vector<LabeledTree> enumerate_caterpillars(const DegreeSequence& d) {
  require_tree_sequence(d, "D");
  const int n = d.size();
  std::vector<LabeledTree> out;
  if (n == 2) {
    out.emplace_back(2, std::vector<Edge>{{1, 2}});
    return out;
  }
  std::vector<Vertex> spine, leaves;
  for (Vertex v = 1; v <= n; ++v) (d(v) >= 2 ? spine : leaves).push_back(v);

  std::vector<Edge> edges;
  // Each spine position p needs need[p] leaves; leaves are handed out as a
  // distinct permutation of the owner multiset.
  auto assign_leaves = [&](const std::vector<Vertex>& order, const std::vector<int>& need) {
    std::vector<std::size_t> owner;
    for (std::size_t p = 0; p < order.size(); ++p) owner.insert(owner.end(), idx(need[p]), p);
    do {
      std::vector<Edge> all = edges;
      for (std::size_t t = 0; t < leaves.size(); ++t) all.push_back(Edge::of(leaves[t], order[owner[t]]));
      out.emplace_back(n, std::move(all));
    } while (std::next_permutation(owner.begin(), owner.end()));
  };

  if (spine.size() == 1) {
    assign_leaves(spine, {d(spine[0])});
    return out;
  }
  std::vector<Vertex> order = spine;
  do {
    if (order.front() > order.back()) continue;  // each path once, not once per direction
    edges.clear();
    std::vector<int> need(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
      const bool end = p == 0 || p + 1 == order.size();
      need[p] = d(order[p]) - (end ? 1 : 2);
      if (p + 1 < order.size()) edges.push_back(Edge::of(order[p], order[p + 1]));
    }
    assign_leaves(order, need);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

}  // namespace treepack
