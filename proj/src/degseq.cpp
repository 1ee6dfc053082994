#include "treepack/degseq.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "treepack/errors.hpp"

namespace treepack {

DegreeSequence::DegreeSequence(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw DomainError("degree sequence must have at least one entry");
  for (int x : degrees_) {
    if (x < 0) throw DomainError("degrees must be non-negative");
  }
}

long long DegreeSequence::sum() const {
  return std::accumulate(degrees_.begin(), degrees_.end(), 0LL);
}

int DegreeSequence::max() const { return *std::max_element(degrees_.begin(), degrees_.end()); }

DegreeMatrix::DegreeMatrix(std::vector<DegreeSequence> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DomainError("degree matrix must have at least one row");
  for (const auto& r : rows_) {
    if (r.size() != rows_.front().size()) throw DimensionError("matrix rows differ in length");
  }
}

std::string_view to_string(SequenceClass c) {
  switch (c) {
    case SequenceClass::NotTree: return "not-tree";
    case SequenceClass::Path: return "path";
    case SequenceClass::Star: return "star";
    case SequenceClass::OtherTree: return "other-tree";
  }
  return "?";
}

bool is_graphical(const DegreeSequence& d) {
  std::vector<long long> s(d.values().begin(), d.values().end());
  std::sort(s.begin(), s.end(), std::greater<>());
  const long long n = static_cast<long long>(s.size());
  if (d.sum() % 2 != 0) return false;
  if (s.front() > n - 1) return false;

  long long lhs = 0;
  for (long long k = 1; k <= n; ++k) {
    lhs += s[static_cast<std::size_t>(k - 1)];
    long long rhs = k * (k - 1);
    for (long long i = k; i < n; ++i) rhs += std::min(s[static_cast<std::size_t>(i)], k);
    if (lhs > rhs) return false;
  }
  return true;
}

bool is_tree_sequence(const DegreeSequence& d) {
  const int n = d.size();
  if (n < 2) return false;
  for (int x : d.values()) {
    if (x < 1) return false;
  }
  return d.sum() == 2LL * n - 2;
}

bool is_path_sequence(const DegreeSequence& d) {
  if (!is_tree_sequence(d)) return false;
  return std::ranges::all_of(d.values(), [](int x) { return x == 1 || x == 2; });
}

bool is_star_sequence(const DegreeSequence& d) {
  return is_tree_sequence(d) && d.max() == d.size() - 1;
}

SequenceClass classify(const DegreeSequence& d) {
  if (!is_tree_sequence(d)) return SequenceClass::NotTree;
  if (is_star_sequence(d)) return SequenceClass::Star;
  if (is_path_sequence(d)) return SequenceClass::Path;
  return SequenceClass::OtherTree;
}

DegreeSequence sum_sequences(const DegreeSequence& d, const DegreeSequence& f) {
  require_same_length(d, f);
  std::vector<int> out(static_cast<std::size_t>(d.size()));
  for (int v = 1; v <= d.size(); ++v) out[static_cast<std::size_t>(v - 1)] = d(v) + f(v);
  return DegreeSequence(std::move(out));
}

bool has_complementary_leaves(const DegreeSequence& d, const DegreeSequence& f) {
  require_same_length(d, f);
  for (int v = 1; v <= d.size(); ++v) {
    if (std::min(d(v), f(v)) != 1) return false;
  }
  return true;
}

void require_tree_sequence(const DegreeSequence& d, std::string_view what) {
  if (!is_tree_sequence(d)) throw DomainError(std::string(what) + " is not a tree degree sequence");
}

void require_same_length(const DegreeSequence& d, const DegreeSequence& f) {
  if (d.size() != f.size()) {
    throw DimensionError("sequence lengths differ: " + std::to_string(d.size()) + " vs " +
                         std::to_string(f.size()));
  }
}

}  // namespace treepack
