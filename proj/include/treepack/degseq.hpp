#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace treepack {

using Vertex = int;  // 1-based everywhere
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Degrees of vertices 1..n. Vertex identity is positional.
class DegreeSequence {
 public:
  DegreeSequence(std::vector<int> degrees);
  DegreeSequence(std::initializer_list<int> degrees)
      : DegreeSequence(std::vector<int>(degrees)) {}

  int size() const { return static_cast<int>(degrees_.size()); }
  // Degree of vertex v, 1 <= v <= size().
  int operator()(Vertex v) const { return degrees_[static_cast<std::size_t>(v - 1)]; }
  std::span<const int> values() const { return degrees_; }

  long long sum() const;
  int max() const;

  friend bool operator==(const DegreeSequence&, const DegreeSequence&) = default;

 private:
  std::vector<int> degrees_;
};

// c rows of equal length.
class DegreeMatrix {
 public:
  explicit DegreeMatrix(std::vector<DegreeSequence> rows);

  int rows() const { return static_cast<int>(rows_.size()); }
  int columns() const { return rows_.front().size(); }
  const DegreeSequence& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  std::span<const DegreeSequence> all_rows() const { return rows_; }

 private:
  std::vector<DegreeSequence> rows_;
};

enum class SequenceClass { NotTree, Path, Star, OtherTree };

std::string_view to_string(SequenceClass c);

// Erdős–Gallai test on the descending sort.
bool is_graphical(const DegreeSequence& d);

// n >= 2, all degrees positive, sum = 2n - 2.
bool is_tree_sequence(const DegreeSequence& d);

bool is_path_sequence(const DegreeSequence& d);
bool is_star_sequence(const DegreeSequence& d);

// Most specific class; a sequence that is both a star and a path (n <= 3) is
// reported as a star.
SequenceClass classify(const DegreeSequence& d);

DegreeSequence sum_sequences(const DegreeSequence& d, const DegreeSequence& f);

// Every vertex is a leaf in at least one of the two sequences.
bool has_complementary_leaves(const DegreeSequence& d, const DegreeSequence& f);

// Throws DomainError unless d is a tree sequence; `what` names the argument.
void require_tree_sequence(const DegreeSequence& d, std::string_view what);
void require_same_length(const DegreeSequence& d, const DegreeSequence& f);

}  // namespace treepack
