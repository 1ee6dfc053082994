#include "treepack/packing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "treepack/errors.hpp"
#include "treepack/sampling.hpp"

namespace treepack {

namespace {

std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

using Adjacency = std::vector<std::vector<Vertex>>;

void add_edge(Adjacency& adj, Vertex a, Vertex b) {
  adj[idx(a)].push_back(b);
  adj[idx(b)].push_back(a);
}

void remove_edge(Adjacency& adj, Vertex a, Vertex b) {
  std::erase(adj[idx(a)], b);
  std::erase(adj[idx(b)], a);
}

LabeledTree to_tree(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size()) - 1;
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= n; ++v) {
    for (Vertex w : adj[idx(v)]) {
      if (v < w) edges.push_back({v, w});
    }
  }
  return LabeledTree(n, std::move(edges));
}

// Throws InternalError unless the trees realize the rows and are pairwise
// edge-disjoint.
void verify_packing(const PackingResult& result, std::span<const DegreeSequence> rows,
                    std::string_view who) {
  if (result.trees.size() != rows.size()) throw InternalError(std::string(who) + ": wrong tree count");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (result.trees[k].degree_sequence() != rows[k]) {
      throw InternalError(std::string(who) + ": tree " + std::to_string(k + 1) +
                          " has the wrong degree sequence");
    }
  }
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      if (!common_edges(result.trees[a], result.trees[b]).empty()) {
        throw InternalError(std::string(who) + ": trees " + std::to_string(a + 1) + " and " +
                            std::to_string(b + 1) + " share an edge");
      }
    }
  }
}

}  // namespace

MultiInstance::MultiInstance(DegreeMatrix matrix) : matrix_(std::move(matrix)) {
  const int n = matrix_.columns();
  std::vector<int> owner(idx(n) + 1, -1);
  for (int i = 0; i < matrix_.rows(); ++i) {
    const auto& row = matrix_.row(i);
    require_tree_sequence(row, "row " + std::to_string(i + 1));
    std::vector<Vertex> part;
    for (Vertex v = 1; v <= n; ++v) {
      if (row(v) <= 1) continue;
      if (owner[idx(v)] >= 0) {
        throw DomainError("vertex " + std::to_string(v) + " is a non-leaf in rows " +
                          std::to_string(owner[idx(v)] + 1) + " and " + std::to_string(i + 1));
      }
      owner[idx(v)] = i;
      part.push_back(v);
    }
    parts_.push_back(std::move(part));
  }
  for (Vertex v = 1; v <= n; ++v) {
    if (owner[idx(v)] < 0) free_leaves_.push_back(v);
  }
}

std::pair<std::vector<Vertex>, std::vector<Vertex>> disjoint_hamiltonian_orders(int n) {
  if (n < 4) throw DomainError("two disjoint Hamiltonian paths need n >= 4");
  std::vector<Vertex> first(idx(n));
  for (int v = 1; v <= n; ++v) first[idx(v - 1)] = v;

  std::vector<Vertex> second{2, 4, 1, 3};
  for (int size = 5; size <= n; ++size) {
    // Subdivide the first edge whose endpoints are both below size - 1 with the
    // new vertex; neither new edge joins consecutive integers.
    std::size_t t = 0;
    while (!(second[t] < size - 1 && second[t + 1] < size - 1)) ++t;
    second.insert(second.begin() + static_cast<std::ptrdiff_t>(t + 1), size);
  }
  return {std::move(first), std::move(second)};
}

namespace {

LabeledTree path_tree(int n, const std::vector<Vertex>& order) {
  std::vector<Edge> edges;
  for (std::size_t t = 0; t + 1 < order.size(); ++t) edges.push_back(Edge::of(order[t], order[t + 1]));
  return LabeledTree(n, std::move(edges));
}

}  // namespace

std::pair<LabeledTree, LabeledTree> disjoint_hamiltonian_paths(int n) {
  auto [first, second] = disjoint_hamiltonian_orders(n);
  return {path_tree(n, first), path_tree(n, second)};
}

std::vector<Edge> common_edges(const LabeledTree& a, const LabeledTree& b) {
  if (a.order() != b.order()) throw DimensionError("trees have different vertex counts");
  std::vector<Edge> out;
  std::ranges::set_intersection(a.edges(), b.edges(), std::back_inserter(out));
  return out;
}

bool is_star_tree(const LabeledTree& tree) {
  const int n = tree.order();
  if (n <= 3) return true;
  return tree.degree_sequence().max() == n - 1;
}

LabeledTree restrict_tree(const LabeledTree& tree, const std::vector<Vertex>& vertices) {
  std::vector<int> label(idx(tree.order()) + 1, 0);
  for (std::size_t t = 0; t < vertices.size(); ++t) label[idx(vertices[t])] = static_cast<int>(t + 1);
  std::vector<Edge> edges;
  for (const auto& e : tree.edges()) {
    if (label[idx(e.u)] && label[idx(e.v)]) edges.push_back(Edge::of(label[idx(e.u)], label[idx(e.v)]));
  }
  return LabeledTree(static_cast<int>(vertices.size()), std::move(edges));
}

bool kundu_packable(const DegreeSequence& d, const DegreeSequence& f) {
  require_same_length(d, f);
  require_tree_sequence(d, "D");
  require_tree_sequence(f, "F");
  return is_graphical(sum_sequences(d, f));
}

// ---------------------------------------------------------------------------
// Caterpillar packing

namespace {

// Non-leaves of a caterpillar (restricted to active vertices) in path order
// from the end with the smaller label, extended by the smallest leaf at each
// end.
std::vector<Vertex> extended_spine(const Adjacency& adj, const std::vector<bool>& active) {
  const int n = static_cast<int>(adj.size()) - 1;
  auto is_inner = [&](Vertex v) { return active[idx(v)] && adj[idx(v)].size() >= 2; };
  auto inner_degree = [&](Vertex v) {
    return std::ranges::count_if(adj[idx(v)], is_inner);
  };
  Vertex start = 0;
  for (Vertex v = 1; v <= n && start == 0; ++v) {
    if (is_inner(v) && inner_degree(v) <= 1) start = v;
  }
  std::vector<Vertex> spine;
  for (Vertex prev = 0, cur = start; cur != 0;) {
    spine.push_back(cur);
    Vertex next = 0;
    for (Vertex y : adj[idx(cur)]) {
      if (y != prev && is_inner(y)) next = y;
    }
    prev = cur;
    cur = next;
  }
  auto smallest_leaf = [&](Vertex v, Vertex skip) {
    Vertex best = 0;
    for (Vertex y : adj[idx(v)]) {
      if (!is_inner(y) && y != skip && (best == 0 || y < best)) best = y;
    }
    return best;
  };
  const Vertex head = smallest_leaf(spine.front(), 0);
  const Vertex tail = smallest_leaf(spine.back(), head);
  spine.insert(spine.begin(), head);
  spine.push_back(tail);
  return spine;
}

struct CaterpillarStep {
  Vertex hub;   // keeps the new vertex as a leaf in the "hub" tree
  Vertex leaf;  // the removed vertex
  bool swapped;  // hub tree is the F-tree
};

}  // namespace

PackingResult pack_caterpillars(const DegreeSequence& d, const DegreeSequence& f) {
  require_same_length(d, f);
  require_tree_sequence(d, "D");
  require_tree_sequence(f, "F");
  const int n = d.size();
  for (Vertex v = 1; v <= n; ++v) {
    if (d(v) + f(v) < 3) {
      throw DomainError("vertex " + std::to_string(v) + " is a leaf in both sequences");
    }
  }

  std::vector<int> x(idx(n) + 1), y(idx(n) + 1);
  for (Vertex v = 1; v <= n; ++v) {
    x[idx(v)] = d(v);
    y[idx(v)] = f(v);
  }
  std::vector<bool> active(idx(n) + 1, true);
  active[0] = false;
  int alive = n;

  auto both_paths = [&] {
    int leaves_x = 0, leaves_y = 0;
    for (Vertex v = 1; v <= n; ++v) {
      if (!active[idx(v)]) continue;
      if (x[idx(v)] > 2 || y[idx(v)] > 2) return false;
      leaves_x += x[idx(v)] == 1;
      leaves_y += y[idx(v)] == 1;
    }
    return leaves_x == 2 && leaves_y == 2;
  };
  // Smallest i with hi_i >= 3, smallest j with hi_j = 1 and lo_j = 2.
  auto pick = [&](const std::vector<int>& hi,
                  const std::vector<int>& lo) -> std::optional<std::pair<Vertex, Vertex>> {
    Vertex i = 0, j = 0;
    for (Vertex v = 1; v <= n; ++v) {
      if (!active[idx(v)]) continue;
      if (i == 0 && hi[idx(v)] >= 3) i = v;
      if (j == 0 && hi[idx(v)] == 1 && lo[idx(v)] == 2) j = v;
    }
    if (i == 0 || j == 0) return std::nullopt;
    return std::pair{i, j};
  };

  std::vector<CaterpillarStep> steps;
  while (!both_paths()) {
    if (alive <= 4) throw InternalError("pack_caterpillars: reduction reached n=4 without a path pair");
    bool swapped = false;
    auto choice = pick(x, y);
    if (!choice) {
      choice = pick(y, x);
      swapped = true;
    }
    if (!choice) throw InternalError("pack_caterpillars: no reducible index pair");
    const auto [i, j] = *choice;
    steps.push_back({i, j, swapped});
    active[idx(j)] = false;
    --(swapped ? y : x)[idx(i)];
    --alive;
  }

  // Base: relabel the canonical disjoint Hamiltonian paths onto the active
  // vertices. Path 1 ends (labels 1, n') go to D's leaves, path 2 ends
  // (labels 2, 3) to F's leaves, everything else in increasing order.
  std::vector<Vertex> x_leaves, y_leaves, rest;
  for (Vertex v = 1; v <= n; ++v) {
    if (!active[idx(v)]) continue;
    if (x[idx(v)] == 1) x_leaves.push_back(v);
    else if (y[idx(v)] == 1) y_leaves.push_back(v);
    else rest.push_back(v);
  }
  std::vector<Vertex> label_to_vertex(idx(alive) + 1);
  label_to_vertex[1] = x_leaves[0];
  label_to_vertex[idx(alive)] = x_leaves[1];
  label_to_vertex[2] = y_leaves[0];
  label_to_vertex[3] = y_leaves[1];
  for (std::size_t t = 0; t < rest.size(); ++t) label_to_vertex[4 + t] = rest[t];

  const auto [order1, order2] = disjoint_hamiltonian_orders(alive);
  Adjacency t1(idx(n) + 1), t2(idx(n) + 1);
  for (std::size_t t = 0; t + 1 < order1.size(); ++t) {
    add_edge(t1, label_to_vertex[idx(order1[t])], label_to_vertex[idx(order1[t + 1])]);
    add_edge(t2, label_to_vertex[idx(order2[t])], label_to_vertex[idx(order2[t + 1])]);
  }

  // Unwind: hang the vertex on its hub in one tree, subdivide a spine edge
  // avoiding the hub in the other.
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    Adjacency& hub_tree = it->swapped ? t2 : t1;
    Adjacency& spine_tree = it->swapped ? t1 : t2;
    const auto path = extended_spine(spine_tree, active);
    std::size_t t = 0;
    while (t + 1 < path.size() && (path[t] == it->hub || path[t + 1] == it->hub)) ++t;
    if (t + 1 >= path.size()) throw InternalError("pack_caterpillars: no spine edge avoids the hub");
    remove_edge(spine_tree, path[t], path[t + 1]);
    add_edge(spine_tree, path[t], it->leaf);
    add_edge(spine_tree, it->leaf, path[t + 1]);
    add_edge(hub_tree, it->hub, it->leaf);
    active[idx(it->leaf)] = true;
  }

  PackingResult result{n, {to_tree(t1), to_tree(t2)}};
  const DegreeSequence rows[] = {d, f};
  verify_packing(result, rows, "pack_caterpillars");
  for (const auto& tree : result.trees) {
    if (!is_caterpillar(tree)) throw InternalError("pack_caterpillars: output is not a caterpillar");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Complementary leaves

namespace {

using PairPredicate = std::function<bool(const LabeledTree&, const LabeledTree&)>;

// Rejection sampling over independent uniform pairs until an edge-disjoint
// pair satisfying `accept` appears; after 50 / p_lower attempts switches to an
// exhaustive scan when the instance is small enough for edge bitmasks.
std::optional<PackingResult> sample_complementary(const DegreeSequence& d, const DegreeSequence& f,
                                                  std::uint64_t seed, const PairPredicate& accept) {
  const int n = d.size();
  const Rational p = analyze_pair(d, f).p_lower;
  const double attempts_before_fallback =
      std::ceil(50.0 / static_cast<double>(p));

  Rng rng(seed);
  RealizationSampler sd(d), sf(f);
  std::vector<Vertex> pd;
  const bool exhaustive = n <= kMaxBitmaskOrder;
  // Without an exhaustive fallback an unconstrained search runs until it
  // succeeds; a constrained one gives up eventually.
  const double cap = exhaustive ? attempts_before_fallback
                     : accept   ? 1000 * attempts_before_fallback
                                : HUGE_VAL;
  for (double attempt = 0; attempt < cap; ++attempt) {
    const auto drawn = sd.draw(rng);
    pd.assign(drawn.begin(), drawn.end());
    const auto pf = sf.draw(rng);
    if (parents_share_edge(pd, pf)) continue;
    LabeledTree a = tree_from_parents(pd), b = tree_from_parents(pf);
    if (!accept || accept(a, b)) return PackingResult{n, {std::move(a), std::move(b)}};
  }
  if (!exhaustive) return std::nullopt;

  const auto f_trees = enumerate_trees(f);
  std::vector<std::uint64_t> f_masks;
  for (const auto& t : f_trees) f_masks.push_back(edge_bitmask(t));
  TreeEnumerator ed(d);
  while (auto a = ed.next()) {
    const auto mask = edge_bitmask(*a);
    for (std::size_t k = 0; k < f_trees.size(); ++k) {
      if ((mask & f_masks[k]) != 0) continue;
      if (!accept || accept(*a, f_trees[k])) return PackingResult{n, {*a, f_trees[k]}};
    }
  }
  return std::nullopt;
}

void require_complementary_leaf_trees(const DegreeSequence& d, const DegreeSequence& f) {
  require_same_length(d, f);
  require_tree_sequence(d, "D");
  require_tree_sequence(f, "F");
  if (!has_complementary_leaves(d, f)) {
    throw DomainError("some vertex is a non-leaf in both sequences");
  }
  if (is_star_sequence(d) || is_star_sequence(f)) {
    throw InfeasibleError("a star sequence has no edge-disjoint partner (degree n-1)");
  }
}

}  // namespace

PackingResult pack_complementary_leaves(const DegreeSequence& d, const DegreeSequence& f,
                                        std::uint64_t seed) {
  require_complementary_leaf_trees(d, f);
  auto result = sample_complementary(d, f, seed, nullptr);
  if (!result) throw InternalError("pack_complementary_leaves: no disjoint pair found");
  const DegreeSequence rows[] = {d, f};
  verify_packing(*result, rows, "pack_complementary_leaves");
  return *std::move(result);
}

// ---------------------------------------------------------------------------
// Non-star restricted trees and m-tree packing

namespace {

std::vector<Vertex> merged(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> out;
  std::ranges::merge(a, b, std::back_inserter(out));
  return out;
}

// Hangs every vertex outside `inner` on the skeleton, each part over two
// distinct inner vertices, always using the inner vertex with most room left.
std::optional<LabeledTree> hang_leaves(int n, const DegreeSequence& degrees, const std::vector<Vertex>& inner,
                                       std::vector<Edge> edges, const std::vector<std::vector<Vertex>>& parts) {
  std::vector<bool> in_u(idx(n) + 1, false);
  for (Vertex u : inner) in_u[idx(u)] = true;
  std::vector<int> capacity(idx(n) + 1, 0);
  for (Vertex u : inner) capacity[idx(u)] = degrees(u);
  for (const auto& e : edges) {
    --capacity[idx(e.u)];
    --capacity[idx(e.v)];
  }
  std::vector<bool> placed(idx(n) + 1, false);
  auto largest = [&](Vertex skip) {
    Vertex best = 0;
    for (Vertex u : inner) {
      if (u != skip && capacity[idx(u)] > 0 && (best == 0 || capacity[idx(u)] > capacity[idx(best)])) best = u;
    }
    return best;
  };
  auto attach = [&](Vertex leaf, Vertex hub) {
    edges.push_back(Edge::of(leaf, hub));
    --capacity[idx(hub)];
    placed[idx(leaf)] = true;
  };
  for (const auto& part : parts) {
    const Vertex h1 = largest(0);
    const Vertex h2 = largest(h1);
    if (h1 == 0 || h2 == 0) return std::nullopt;
    attach(part[0], h1);
    attach(part[1], h2);
  }
  for (Vertex w = 1; w <= n; ++w) {
    if (in_u[idx(w)] || placed[idx(w)]) continue;
    const Vertex h = largest(0);
    if (h == 0) return std::nullopt;
    attach(w, h);
  }
  return LabeledTree(n, std::move(edges));
}

// Reattaches the leaves of `tree` so that each part hangs on two distinct
// inner vertices. Keeps the subtree on `inner` when that leaves enough room,
// otherwise rebuilds it so the spare degree is spread as evenly as possible.
std::optional<LabeledTree> spread_leaves(const LabeledTree& tree, const std::vector<Vertex>& inner,
                                         const std::vector<std::vector<Vertex>>& parts) {
  const int n = tree.order();
  const auto degrees = tree.degree_sequence();
  std::vector<bool> in_u(idx(n) + 1, false);
  for (Vertex u : inner) in_u[idx(u)] = true;
  std::vector<Edge> kept;
  for (const auto& e : tree.edges()) {
    if (in_u[idx(e.u)] && in_u[idx(e.v)]) kept.push_back(e);
  }
  if (auto t = hang_leaves(n, degrees, inner, kept, parts)) return t;

  const int k = static_cast<int>(inner.size());
  if (k < 3) return std::nullopt;
  std::vector<int> skeleton(idx(k), 1);
  for (int extra = k - 2; extra > 0; --extra) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < skeleton.size(); ++s) {
      if (degrees(inner[s]) - skeleton[s] > degrees(inner[best]) - skeleton[best]) best = s;
    }
    ++skeleton[best];
  }
  for (std::size_t s = 0; s < skeleton.size(); ++s) {
    if (skeleton[s] > degrees(inner[s])) return std::nullopt;
  }
  const LabeledTree local = prufer_decode(PruferCode(k, prufer_multiset(DegreeSequence(skeleton))));
  std::vector<Edge> rebuilt;
  for (const auto& e : local.edges()) rebuilt.push_back(Edge::of(inner[idx(e.u - 1)], inner[idx(e.v - 1)]));
  return hang_leaves(n, degrees, inner, std::move(rebuilt), parts);
}

}  // namespace

LabeledTree nonstar_restricted_tree(const DegreeSequence& d,
                                    const std::vector<std::vector<Vertex>>& parts) {
  require_tree_sequence(d, "D");
  const int n = d.size();
  const int m = static_cast<int>(parts.size()) + 1;
  std::vector<Vertex> inner;
  for (Vertex v = 1; v <= n; ++v) {
    if (d(v) > 1) inner.push_back(v);
  }
  if (inner.size() < 2) throw DomainError("D must have at least two non-leaves");
  if (!(n > m && m > 2)) throw DomainError("need n > m > 2 (at least two parts)");
  if (d.max() > n - m) throw DomainError("maximum degree exceeds n - m");
  std::vector<bool> used(idx(n) + 1, false);
  for (const auto& part : parts) {
    if (part.size() < 2) throw DomainError("every part needs at least two vertices");
    if (!std::ranges::is_sorted(part)) throw DomainError("parts must be sorted");
    for (Vertex v : part) {
      if (v < 1 || v > n) throw DomainError("part vertex out of range");
      if (d(v) != 1) throw DomainError("part vertex " + std::to_string(v) + " is not a leaf of D");
      if (used[idx(v)]) throw DomainError("parts overlap at vertex " + std::to_string(v));
      used[idx(v)] = true;
    }
  }
  auto restriction_ok = [&](const LabeledTree& t) {
    for (const auto& part : parts) {
      if (is_star_tree(restrict_tree(t, merged(inner, part)))) return false;
    }
    return true;
  };

  std::optional<LabeledTree> result;
  if (inner.size() == 2) {
    // U = {a, b}, d_a + d_b = n: join a-b, one vertex of each part to each side,
    // then d_a - m further leaves to a and the rest to b.
    const Vertex a = inner[0], b = inner[1];
    std::vector<Edge> edges{{a, b}};
    for (const auto& part : parts) {
      edges.push_back(Edge::of(part[0], a));
      edges.push_back(Edge::of(part[1], b));
    }
    int to_a = d(a) - m;
    for (Vertex w = 1; w <= n; ++w) {
      if (w == a || w == b) continue;
      const bool taken = std::ranges::any_of(parts, [&](const auto& p) { return p[0] == w || p[1] == w; });
      if (taken) continue;
      edges.push_back(Edge::of(w, to_a-- > 0 ? a : b));
    }
    result.emplace(n, std::move(edges));
  } else {
    // First realization, then the exchange that breaks a star on U.
    LabeledTree t = prufer_decode(PruferCode(n, prufer_multiset(d)));
    const LabeledTree on_u = restrict_tree(t, inner);
    if (is_star_tree(on_u) && inner.size() > 3) {
      const auto adj = t.adjacency();
      const auto u_degrees = on_u.degree_sequence();
      Vertex center = 0;
      for (std::size_t k = 0; k < inner.size(); ++k) {
        if (u_degrees(static_cast<Vertex>(k + 1)) == static_cast<int>(inner.size()) - 1) center = inner[k];
      }
      Vertex w = 0;
      for (Vertex v = 1; v <= n && w == 0; ++v) {
        if (d(v) == 1 && adj[idx(v)].front() != center) w = v;
      }
      if (w == 0) throw InternalError("nonstar_restricted_tree: every leaf hangs on the star center");
      const Vertex u1 = adj[idx(w)].front();
      Vertex u2 = 0;
      for (Vertex u : inner) {
        if (u != center && u != u1) {
          u2 = u;
          break;
        }
      }
      std::vector<Edge> edges(t.edges().begin(), t.edges().end());
      std::erase(edges, Edge::of(center, u2));
      std::erase(edges, Edge::of(u1, w));
      edges.push_back(Edge::of(u1, u2));
      edges.push_back(Edge::of(center, w));
      t = LabeledTree(n, std::move(edges));
    }
    if (!restriction_ok(t)) {
      // A three-vertex U always restricts to a star; rely on the leaves
      // instead, spreading every part over two vertices of U.
      auto spread_tree = spread_leaves(t, inner, parts);
      if (!spread_tree) throw InternalError("nonstar_restricted_tree: cannot spread the parts");
      t = *std::move(spread_tree);
    }
    result = std::move(t);
  }

  if (result->degree_sequence() != d) throw InternalError("nonstar_restricted_tree: wrong degrees");
  if (!restriction_ok(*result)) throw InternalError("nonstar_restricted_tree: star restriction");
  return *std::move(result);
}

MultiPackingResult pack_multi(const MultiInstance& inst, std::uint64_t seed) {
  const int m = inst.rows();
  const int n = inst.order();
  const auto rows = inst.matrix().all_rows();
  int max_degree = 0;
  for (const auto& row : rows) max_degree = std::max(max_degree, row.max());
  if (m >= 2 && max_degree > n - m) {
    throw InfeasibleError("maximum degree " + std::to_string(max_degree) + " exceeds n - m = " +
                          std::to_string(n - m) + "; the sum is not graphical");
  }

  MultiPackingResult out;
  out.packing.n = n;
  if (m == 1) {
    out.packing.trees.push_back(random_tree(rows[0], seed));
  } else if (m == 2) {
    out.packing = pack_complementary_leaves(rows[0], rows[1], seed);
  } else {
    const auto& parts = inst.parts();
    std::vector<LabeledTree> trial;
    for (int i = 0; i < m; ++i) {
      std::vector<std::vector<Vertex>> others;
      for (int k = 0; k < m; ++k) {
        if (k != i) others.push_back(parts[idx(k)]);
      }
      LabeledTree t = nonstar_restricted_tree(rows[idx(i)], others);
      if (auto spread_tree = spread_leaves(t, parts[idx(i)], others)) t = *std::move(spread_tree);
      trial.push_back(std::move(t));
    }

    // Shared edges of T_i and T_k always run between V_i and V_k, and
    // repairing one pair never changes the edges between any other pair, so
    // the set of pairs needing repair is fixed up front.
    std::vector<std::pair<int, int>> pending;
    for (int i = 0; i < m; ++i) {
      for (int k = i + 1; k < m; ++k) {
        if (!common_edges(trial[idx(i)], trial[idx(k)]).empty()) pending.emplace_back(i, k);
      }
    }

    for (std::size_t step = 0; step < pending.size(); ++step) {
      const auto [i, k] = pending[step];
      const auto w = merged(parts[idx(i)], parts[idx(k)]);
      std::vector<bool> in_w(idx(n) + 1, false);
      for (Vertex v : w) in_w[idx(v)] = true;

      auto replace_inside = [&](const LabeledTree& full, const LabeledTree& local) {
        std::vector<Edge> edges;
        for (const auto& e : full.edges()) {
          if (!(in_w[idx(e.u)] && in_w[idx(e.v)])) edges.push_back(e);
        }
        for (const auto& e : local.edges()) edges.push_back(Edge::of(w[idx(e.u - 1)], w[idx(e.v - 1)]));
        return LabeledTree(n, std::move(edges));
      };
      // Later repairs need their restricted subtrees to stay non-stars.
      auto keeps_later_pairs = [&](const LabeledTree& local_i, const LabeledTree& local_k) {
        const LabeledTree ti = replace_inside(trial[idx(i)], local_i);
        const LabeledTree tk = replace_inside(trial[idx(k)], local_k);
        for (std::size_t later = step + 1; later < pending.size(); ++later) {
          const auto [a, b] = pending[later];
          for (const auto& [row, tree] : {std::pair<int, const LabeledTree*>{i, &ti}, {k, &tk}}) {
            if (row != a && row != b) continue;
            const int other = row == a ? b : a;
            if (is_star_tree(restrict_tree(*tree, merged(parts[idx(row)], parts[idx(other)])))) {
              return false;
            }
          }
        }
        return true;
      };

      const LabeledTree local_i = restrict_tree(trial[idx(i)], w);
      const LabeledTree local_k = restrict_tree(trial[idx(k)], w);
      const auto di = local_i.degree_sequence(), dk = local_k.degree_sequence();
      if (is_star_sequence(di) || is_star_sequence(dk)) {
        throw InternalError("pack_multi: restricted subtree is a star");
      }
      auto repacked = sample_complementary(di, dk, Rng::split(seed, step), keeps_later_pairs);
      if (!repacked) throw InternalError("pack_multi: no repair keeps later restrictions non-star");
      trial[idx(i)] = replace_inside(trial[idx(i)], repacked->trees[0]);
      trial[idx(k)] = replace_inside(trial[idx(k)], repacked->trees[1]);
      out.repaired_pairs.emplace_back(i, k);
    }
    out.packing.trees = std::move(trial);
  }
  verify_packing(out.packing, rows, "pack_multi");
  return out;
}

}  // namespace treepack
