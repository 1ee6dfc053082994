#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "treepack/degseq.hpp"
#include "treepack/packing.hpp"
#include "treepack/reductions.hpp"
#include "treepack/sampling.hpp"
#include "treepack/trees.hpp"

namespace treepack::io {

using Json = nlohmann::ordered_json;

// "2,2,1,1" <-> DegreeSequence.
DegreeSequence parse_sequence(std::string_view text);
std::string format_sequence(const DegreeSequence& d);

// Rows separated by ';', e.g. "2,2,1,1;1,1,2,2".
DegreeMatrix parse_matrix(std::string_view text);

// "3/4", "0.25" or "1".
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

// Tree text form: a line "n=<int>" followed by one "u v" line per edge.
std::string format_tree(const LabeledTree& tree);
LabeledTree parse_tree(std::string_view text);

Json sequence_json(const DegreeSequence& d);
DegreeSequence sequence_from_json(const Json& j);
DegreeMatrix matrix_from_json(const Json& j);

Json tree_json(const LabeledTree& tree);  // {"n": n, "edges": [[u, v], ...]}
LabeledTree tree_from_json(const Json& j);

Json packing_json(const PackingResult& result);  // {"n": n, "trees": [[[u, v], ...], ...]}
PackingResult packing_from_json(const Json& j);

Json pair_instance_json(const SimplePairInstance& inst);  // {"D": [...], "F": [...]}
SimplePairInstance pair_instance_from_json(const Json& j);

// {"n1": .., "n2": .., "D": [[...], [...]], "F": [[...], [...]]}
Json bipartite_instance_json(const BipartitePairInstance& inst);
BipartitePairInstance bipartite_instance_from_json(const Json& j);

Json analysis_json(const PairAnalysis& a);
Json report_json(const EstimateReport& r);

std::vector<double> distribution_from_json(const Json& j);

}  // namespace treepack::io
