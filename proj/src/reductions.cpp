#include "treepack/reductions.hpp"

#include <cstdint>
#include <functional>
#include <numeric>
#include <string>

#include "treepack/errors.hpp"

namespace treepack {

void validate(const BipartitePairInstance& inst) {
  if (inst.n1 < 1 || inst.n2 < 1) throw DomainError("both classes need at least one vertex");
  for (const auto* side : {&inst.d, &inst.f}) {
    if (static_cast<int>(side->first.size()) != inst.n1 ||
        static_cast<int>(side->second.size()) != inst.n2) {
      throw DimensionError("class degree lists must have lengths n1 and n2");
    }
    for (int x : side->first) {
      if (x < 0 || x > inst.n2) throw DomainError("class-1 degree outside 0..n2");
    }
    for (int x : side->second) {
      if (x < 0 || x > inst.n1) throw DomainError("class-2 degree outside 0..n1");
    }
    const long long s1 = std::accumulate(side->first.begin(), side->first.end(), 0LL);
    const long long s2 = std::accumulate(side->second.begin(), side->second.end(), 0LL);
    if (s1 != s2) throw DomainError("class degree sums differ");
  }
}

SimplePairInstance bipartite_to_simple(const BipartitePairInstance& inst) {
  validate(inst);
  std::vector<int> d, f;
  for (int x : inst.d.first) d.push_back(x + inst.n1 - 1);
  for (int x : inst.d.second) d.push_back(x);
  for (int x : inst.f.first) f.push_back(x);
  for (int x : inst.f.second) f.push_back(x + inst.n2 - 1);
  return {DegreeSequence(std::move(d)), DegreeSequence(std::move(f))};
}

SimplePairInstance add_dominating_vertex(const SimplePairInstance& inst) {
  require_same_length(inst.d, inst.f);
  const int n = inst.d.size();
  std::vector<int> d, f(inst.f.values().begin(), inst.f.values().end());
  for (int x : inst.d.values()) d.push_back(x + 1);
  d.push_back(n);
  f.push_back(0);
  return {DegreeSequence(std::move(d)), DegreeSequence(std::move(f))};
}

SimplePairInstance add_pendant_gadget(const SimplePairInstance& inst) {
  require_same_length(inst.d, inst.f);
  const int n = inst.d.size();
  std::vector<int> d(inst.d.values().begin(), inst.d.values().end()), f;
  d.push_back(1);
  d.push_back(1);
  for (int x : inst.f.values()) f.push_back(x + 1);
  f.push_back(n);
  f.push_back(0);
  return {DegreeSequence(std::move(d)), DegreeSequence(std::move(f))};
}

ReductionTrace reduce_to_tree_sequence(const SimplePairInstance& inst) {
  require_same_length(inst.d, inst.f);
  if (inst.d.sum() % 2 != 0) throw DomainError("sum of D is odd; no gadget chain fixes parity");

  ReductionTrace trace{inst};
  auto excess = [&] { return trace.result.d.sum() - (2LL * trace.result.d.size() - 2); };
  auto has_zero = [&] {
    for (int x : trace.result.d.values()) {
      if (x == 0) return true;
    }
    return false;
  };
  while (has_zero() || excess() < 0) {
    trace.result = add_dominating_vertex(trace.result);
    ++trace.dominating_steps;
  }
  if (excess() % 2 != 0) throw DomainError("odd excess after normalization");
  while (excess() > 0) {
    trace.result = add_pendant_gadget(trace.result);
    ++trace.pendant_steps;
  }
  if (!is_tree_sequence(trace.result.d)) {
    throw InternalError("reduce_to_tree_sequence: result is not a tree sequence");
  }
  return trace;
}

namespace {

constexpr int kMaxBruteOrder = 31;

// Enumerates simple graphs with the given degrees avoiding `forbidden`, one
// canonical edge selection per graph: vertex v picks all of its still-missing
// neighbours among higher vertices. Stops as soon as `found` returns true.
class RealizationSearch {
 public:
  RealizationSearch(std::vector<int> residual, std::vector<std::uint32_t> forbidden,
                    std::function<bool(const std::vector<std::uint32_t>&)> found)
      : n_(static_cast<int>(residual.size())),
        residual_(std::move(residual)),
        forbidden_(std::move(forbidden)),
        adj_(static_cast<std::size_t>(n_), 0),
        found_(std::move(found)) {}

  bool run() {
    long long sum = std::accumulate(residual_.begin(), residual_.end(), 0LL);
    if (sum % 2 != 0) return false;
    return visit(0);
  }

 private:
  bool visit(int v) {
    while (v < n_ && residual_[static_cast<std::size_t>(v)] == 0) ++v;
    if (v == n_) return found_(adj_);
    std::vector<int> candidates;
    int capacity = 0;
    for (int w = v + 1; w < n_; ++w) {
      if (residual_[static_cast<std::size_t>(w)] > 0 &&
          !(forbidden_[static_cast<std::size_t>(v)] >> w & 1u)) {
        candidates.push_back(w);
      }
      capacity += residual_[static_cast<std::size_t>(w)];
    }
    const int need = residual_[static_cast<std::size_t>(v)];
    if (static_cast<int>(candidates.size()) < need || capacity < need) return false;
    return choose(v, candidates, 0, need);
  }

  bool choose(int v, const std::vector<int>& candidates, std::size_t from, int need) {
    if (need == 0) {
      const int saved = residual_[static_cast<std::size_t>(v)];
      residual_[static_cast<std::size_t>(v)] = 0;
      const bool ok = visit(v + 1);
      residual_[static_cast<std::size_t>(v)] = saved;
      return ok;
    }
    for (std::size_t t = from; t + static_cast<std::size_t>(need) <= candidates.size(); ++t) {
      const int w = candidates[t];
      link(v, w, +1);
      const bool ok = choose(v, candidates, t + 1, need - 1);
      link(v, w, -1);
      if (ok) return true;
    }
    return false;
  }

  void link(int v, int w, int dir) {
    const std::uint32_t bv = 1u << v, bw = 1u << w;
    if (dir > 0) {
      adj_[static_cast<std::size_t>(v)] |= bw;
      adj_[static_cast<std::size_t>(w)] |= bv;
    } else {
      adj_[static_cast<std::size_t>(v)] &= ~bw;
      adj_[static_cast<std::size_t>(w)] &= ~bv;
    }
    residual_[static_cast<std::size_t>(w)] -= dir;
  }

  int n_;
  std::vector<int> residual_;
  std::vector<std::uint32_t> forbidden_;
  std::vector<std::uint32_t> adj_;
  std::function<bool(const std::vector<std::uint32_t>&)> found_;
};

}  // namespace

bool brute_force_disjoint_decision(const SimplePairInstance& inst, int guard_n) {
  require_same_length(inst.d, inst.f);
  const int n = inst.d.size();
  if (n > guard_n) {
    throw ResourceError("brute-force decision limited to n <= " + std::to_string(guard_n) +
                        ", got n=" + std::to_string(n));
  }
  if (n > kMaxBruteOrder) throw ResourceError("brute-force decision supports at most n=31");
  if (!is_graphical(sum_sequences(inst.d, inst.f))) return false;

  std::vector<int> d(inst.d.values().begin(), inst.d.values().end());
  std::vector<int> f(inst.f.values().begin(), inst.f.values().end());
  const std::vector<std::uint32_t> none(static_cast<std::size_t>(n), 0);
  RealizationSearch outer(d, none, [&](const std::vector<std::uint32_t>& graph_d) {
    RealizationSearch inner(f, graph_d, [](const auto&) { return true; });
    return inner.run();
  });
  return outer.run();
}

}  // namespace treepack
