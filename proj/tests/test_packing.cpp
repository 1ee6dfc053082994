#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "oracles.hpp"
#include "treepack/errors.hpp"
#include "treepack/packing.hpp"

using namespace treepack;

namespace {

LabeledTree path(std::initializer_list<Vertex> order) {
  std::vector<Vertex> vs(order);
  std::vector<Edge> edges;
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) edges.push_back(Edge::of(vs[k], vs[k + 1]));
  return LabeledTree(static_cast<int>(vs.size()), edges);
}

void check_packing(const PackingResult& r, const std::vector<DegreeSequence>& rows) {
  REQUIRE(r.trees.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(r.trees[k].order() == r.n);
    CHECK(r.trees[k].degree_sequence() == rows[k]);
  }
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) CHECK(common_edges(r.trees[a], r.trees[b]).empty());
  }
}

bool is_hamiltonian_order(const std::vector<Vertex>& order, int n) {
  std::vector<Vertex> sorted = order;
  std::ranges::sort(sorted);
  for (int k = 0; k < n; ++k) {
    if (sorted[static_cast<std::size_t>(k)] != k + 1) return false;
  }
  return static_cast<int>(order.size()) == n;
}

// Tree sequences with parts[i] as the non-leaves of row i and random degrees.
DegreeMatrix random_multi(Rng& rng, int n, const std::vector<std::vector<Vertex>>& parts) {
  std::vector<DegreeSequence> rows;
  for (const auto& part : parts) {
    std::vector<int> d(static_cast<std::size_t>(n), 1);
    for (Vertex v : part) d[static_cast<std::size_t>(v - 1)] = 2;
    int extra = n - 2 - static_cast<int>(part.size());
    while (extra-- > 0) ++d[static_cast<std::size_t>(part[rng.below(part.size())] - 1)];
    rows.emplace_back(d);
  }
  return DegreeMatrix(rows);
}

}  // namespace

TEST_CASE("disjoint Hamiltonian paths") {
  const auto [a4, b4] = disjoint_hamiltonian_orders(4);
  CHECK(a4 == std::vector<Vertex>{1, 2, 3, 4});
  CHECK(b4 == std::vector<Vertex>{2, 4, 1, 3});
  const auto [a5, b5] = disjoint_hamiltonian_orders(5);
  CHECK(a5 == std::vector<Vertex>{1, 2, 3, 4, 5});
  CHECK(b5 == std::vector<Vertex>{2, 4, 1, 5, 3});
  CHECK_THROWS_AS(disjoint_hamiltonian_orders(3), DomainError);

  for (int n = 4; n <= 12; ++n) {
    const auto [first, second] = disjoint_hamiltonian_orders(n);
    CHECK(is_hamiltonian_order(first, n));
    CHECK(is_hamiltonian_order(second, n));
    const std::set<Vertex> ends{first.front(), first.back(), second.front(), second.back()};
    CHECK(ends.size() == 4);
    for (std::size_t k = 0; k + 1 < second.size(); ++k) CHECK(std::abs(second[k] - second[k + 1]) != 1);
    const auto [t1, t2] = disjoint_hamiltonian_paths(n);
    CHECK(common_edges(t1, t2).empty());
    CHECK(is_path_sequence(t1.degree_sequence()));
    CHECK(is_path_sequence(t2.degree_sequence()));
  }
}

TEST_CASE("common edges") {
  CHECK(common_edges(path({3, 1, 2, 4}), path({1, 3, 4, 2})) == std::vector<Edge>{{1, 3}, {2, 4}});
  CHECK(common_edges(path({3, 1, 2, 4}), path({1, 4, 3, 2})).empty());
  const auto t = path({5, 3, 1, 2, 4});
  CHECK(common_edges(t, t).size() == 4);
  CHECK_THROWS_AS(common_edges(path({1, 2, 3}), path({1, 2, 3, 4})), DimensionError);
}

TEST_CASE("restriction and stars") {
  const LabeledTree t(6, {{1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 6}});
  CHECK(restrict_tree(t, {1, 2, 4}) == LabeledTree(3, {{1, 2}, {2, 3}}));
  CHECK(is_star_tree(restrict_tree(t, {1, 2, 4})));
  CHECK_FALSE(is_star_tree(restrict_tree(t, {1, 2, 3, 4})));
  CHECK(is_star_tree(LabeledTree(4, {{2, 1}, {2, 3}, {2, 4}})));
  CHECK_FALSE(is_star_tree(path({1, 2, 3, 4})));
}

TEST_CASE("caterpillar packing examples") {
  const DegreeSequence d{2, 2, 1, 1}, f{1, 1, 2, 2};
  const auto r = pack_caterpillars(d, f);
  check_packing(r, {d, f});
  const auto all = enumerate_trees(d);
  CHECK(std::ranges::find(all, r.trees[0]) != all.end());

  const DegreeSequence pd{2, 2, 2, 2, 1, 1}, pf{1, 1, 2, 2, 2, 2};
  const auto paths = pack_caterpillars(pd, pf);
  check_packing(paths, {pd, pf});

  const DegreeSequence cd{3, 2, 1, 1, 2, 1}, cf{1, 1, 2, 2, 2, 2};
  const auto cats = pack_caterpillars(cd, cf);
  check_packing(cats, {cd, cf});
  CHECK(is_caterpillar(cats.trees[0]));
  CHECK(is_caterpillar(cats.trees[1]));

  CHECK_THROWS_AS(pack_caterpillars({2, 1, 1}, {2, 1, 1}), DomainError);
  CHECK_THROWS_AS(pack_caterpillars({2, 2, 1, 1}, {1, 2, 2, 1}), DomainError);
  CHECK_THROWS_AS(pack_caterpillars({2, 2, 1, 1}, {1, 1, 2}), DimensionError);
}

TEST_CASE("caterpillar packing on every sequence pair without common leaves, n <= 7") {
  long long pairs = 0;
  for (int n = 4; n <= 7; ++n) {
    const auto seqs = oracle::tree_sequences(n);
    for (const auto& dv : seqs) {
      for (const auto& fv : seqs) {
        bool ok = true;
        for (int v = 0; v < n; ++v) ok = ok && dv[static_cast<std::size_t>(v)] + fv[static_cast<std::size_t>(v)] >= 3;
        if (!ok) continue;
        const DegreeSequence d(dv), f(fv);
        const auto r = pack_caterpillars(d, f);
        check_packing(r, {d, f});
        CHECK(is_caterpillar(r.trees[0]));
        CHECK(is_caterpillar(r.trees[1]));
        CHECK(pack_caterpillars(d, f).trees == r.trees);
        ++pairs;
      }
    }
  }
  CHECK(pairs > 0);
}

TEST_CASE("Kundu decision examples") {
  const DegreeSequence fig{5, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1};
  CHECK(kundu_packable(fig, fig));
  CHECK_FALSE(kundu_packable({2, 1, 1}, {2, 1, 1}));
  CHECK_FALSE(kundu_packable({3, 1, 1, 1}, {1, 1, 2, 2}));
  CHECK_THROWS_AS(kundu_packable({2, 2, 2}, {2, 2, 2}), DomainError);
  CHECK_THROWS_AS(kundu_packable({2, 1, 1}, {1, 1}), DimensionError);
}

TEST_CASE("Kundu decision agrees with exhaustive disjoint-pair search, n <= 6") {
  for (int n = 2; n <= 6; ++n) {
    const auto seqs = oracle::tree_sequences(n);
    for (const auto& dv : seqs) {
      for (const auto& fv : seqs) {
        CHECK(kundu_packable(DegreeSequence(dv), DegreeSequence(fv)) ==
              (oracle::disjoint_pairs(dv, fv) > 0));
      }
    }
  }
}

TEST_CASE("complementary-leaf packing examples") {
  const DegreeSequence d{2, 2, 1, 1}, f{1, 1, 2, 2};
  std::set<std::vector<LabeledTree>> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto r = pack_complementary_leaves(d, f, seed);
    check_packing(r, {d, f});
    seen.insert(r.trees);
  }
  CHECK(seen.size() == 2);
  CHECK(pack_complementary_leaves(d, f, 11).trees == pack_complementary_leaves(d, f, 11).trees);

  CHECK_THROWS_AS(pack_complementary_leaves({4, 1, 1, 1, 1}, {1, 2, 2, 2, 1}, 1), InfeasibleError);
  const DegreeSequence d7{4, 3, 1, 1, 1, 1, 1}, f7{1, 1, 3, 3, 2, 1, 1};
  check_packing(pack_complementary_leaves(d7, f7, 5), {d7, f7});
  CHECK_THROWS_AS(pack_complementary_leaves({2, 2, 1, 1}, {2, 1, 2, 1}, 1), DomainError);
}

TEST_CASE("complementary-leaf packing succeeds exactly on non-star pairs, n <= 7") {
  for (int n = 4; n <= 7; ++n) {
    const auto seqs = oracle::tree_sequences(n);
    for (const auto& dv : seqs) {
      for (const auto& fv : seqs) {
        const DegreeSequence d(dv), f(fv);
        if (!has_complementary_leaves(d, f)) continue;
        const bool star = d.max() == n - 1 || f.max() == n - 1;
        if (star) {
          CHECK_THROWS_AS(pack_complementary_leaves(d, f, 3), InfeasibleError);
          CHECK(oracle::disjoint_pairs(dv, fv) == 0);
        } else {
          check_packing(pack_complementary_leaves(d, f, 3), {d, f});
        }
      }
    }
  }
}

TEST_CASE("multi-instance validation") {
  const DegreeMatrix ok({DegreeSequence{2, 2, 1, 1}, DegreeSequence{1, 1, 2, 2}});
  const MultiInstance inst(ok);
  CHECK(inst.parts() == std::vector<std::vector<Vertex>>{{1, 2}, {3, 4}});
  CHECK(inst.free_leaves().empty());
  CHECK_THROWS_AS(MultiInstance(DegreeMatrix({DegreeSequence{2, 2, 1, 1}, DegreeSequence{2, 1, 1, 2}})),
                  DomainError);
  CHECK_THROWS_AS(MultiInstance(DegreeMatrix({DegreeSequence{2, 2, 2, 1}})), DomainError);
}

TEST_CASE("non-star restricted trees") {
  // Two non-leaves.
  const DegreeSequence d2{5, 4, 1, 1, 1, 1, 1, 1, 1};
  const std::vector<std::vector<Vertex>> parts{{3, 4}, {5, 6}};
  const auto t2 = nonstar_restricted_tree(d2, parts);
  CHECK(t2.degree_sequence() == d2);
  CHECK(t2.has_edge(1, 2));
  CHECK(t2.has_edge(1, 3));
  CHECK(t2.has_edge(2, 4));
  CHECK(t2.has_edge(1, 5));
  CHECK(t2.has_edge(2, 6));
  for (const auto& p : parts) CHECK_FALSE(is_star_tree(restrict_tree(t2, {1, 2, p[0], p[1]})));

  // Three non-leaves.
  const DegreeSequence d3{4, 3, 3, 1, 1, 1, 1, 1, 1};
  const std::vector<std::vector<Vertex>> parts3{{4, 5}, {6, 7}};
  const auto t3 = nonstar_restricted_tree(d3, parts3);
  CHECK(t3.degree_sequence() == d3);
  for (const auto& p : parts3) CHECK_FALSE(is_star_tree(restrict_tree(t3, {1, 2, 3, p[0], p[1]})));

  // Four non-leaves.
  const DegreeSequence d4{8, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1};
  const std::vector<std::vector<Vertex>> parts4{{5, 6}, {7, 8}, {9, 10}};
  const auto t4 = nonstar_restricted_tree(d4, parts4);
  CHECK(t4.degree_sequence() == d4);
  for (const auto& p : parts4) CHECK_FALSE(is_star_tree(restrict_tree(t4, {1, 2, 3, 4, p[0], p[1]})));

  CHECK_THROWS_AS(nonstar_restricted_tree(d2, {{3}, {5, 6}}), DomainError);
  CHECK_THROWS_AS(nonstar_restricted_tree(d2, {{3, 4}, {4, 6}}), DomainError);
  CHECK_THROWS_AS(nonstar_restricted_tree(d2, {{1, 4}, {5, 6}}), DomainError);
  CHECK_THROWS_AS(nonstar_restricted_tree({7, 1, 1, 1, 1, 1, 1, 1}, {{2, 3}, {4, 5}}), DomainError);
}

TEST_CASE("multi-tree packing examples") {
  for (int a = 3; a <= 6; ++a) {
    const DegreeSequence r1{a, 9 - a, 1, 1, 1, 1, 1, 1, 1};
    const DegreeSequence r2{1, 1, a, 9 - a, 1, 1, 1, 1, 1};
    const DegreeSequence r3{1, 1, 1, 1, a, 9 - a, 1, 1, 1};
    const MultiInstance inst(DegreeMatrix({r1, r2, r3}));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = pack_multi(inst, seed);
      check_packing(r.packing, {r1, r2, r3});
      std::set<std::pair<int, int>> unique(r.repaired_pairs.begin(), r.repaired_pairs.end());
      CHECK(unique.size() == r.repaired_pairs.size());
    }
  }

  const MultiInstance too_big(DegreeMatrix(
      {DegreeSequence{3, 2, 1, 1, 1}, DegreeSequence{1, 1, 4, 1, 1}, DegreeSequence{1, 1, 1, 4, 1}}));
  CHECK_THROWS_AS(pack_multi(too_big, 1), InfeasibleError);

  const MultiInstance single(DegreeMatrix({DegreeSequence{2, 3, 1, 1, 1}}));
  check_packing(pack_multi(single, 4).packing, {DegreeSequence{2, 3, 1, 1, 1}});

  const MultiInstance two(DegreeMatrix({DegreeSequence{2, 2, 1, 1}, DegreeSequence{1, 1, 2, 2}}));
  check_packing(pack_multi(two, 4).packing, {DegreeSequence{2, 2, 1, 1}, DegreeSequence{1, 1, 2, 2}});
}

TEST_CASE("multi-tree packing when the first skeleton leaves no room to spread a part") {
  // Row 2's non-leaves {1,7,9} first come out as the path 1-7-9, so 7 has no spare degree.
  const std::vector<DegreeSequence> rows{{1, 1, 5, 1, 1, 4, 1, 1, 1},
                                         {6, 1, 1, 1, 1, 1, 2, 1, 2},
                                         {1, 1, 1, 4, 5, 1, 1, 1, 1}};
  const MultiInstance inst{DegreeMatrix(rows)};
  for (std::uint64_t seed = 0; seed < 20; ++seed) check_packing(pack_multi(inst, seed).packing, rows);
}

TEST_CASE("multi-tree packing on random instances") {
  Rng rng(2024);
  int packed = 0, refused = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 3 + static_cast<int>(rng.below(2));
    const int n = 2 * m + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(14 - 2 * m)));
    std::vector<Vertex> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
    std::vector<std::vector<Vertex>> parts(static_cast<std::size_t>(m));
    std::size_t next = 0;
    for (auto& part : parts) {
      part = {perm[next], perm[next + 1]};
      next += 2;
    }
    while (next < perm.size() && rng.below(3) == 0) parts[rng.below(parts.size())].push_back(perm[next++]);
    for (auto& part : parts) std::ranges::sort(part);
    const auto matrix = random_multi(rng, n, parts);
    const MultiInstance inst(matrix);
    int top = 0;
    for (const auto& row : matrix.all_rows()) top = std::max(top, row.max());
    if (top > n - m) {
      CHECK_THROWS_AS(pack_multi(inst, rng()), InfeasibleError);
      ++refused;
      continue;
    }
    const auto r = pack_multi(inst, rng());
    check_packing(r.packing, {matrix.all_rows().begin(), matrix.all_rows().end()});
    ++packed;
  }
  CHECK(packed > 100);
  CHECK(refused > 0);
}
