#include "treepack/io.hpp"

#include <charconv>
#include <sstream>

#include "treepack/errors.hpp"

namespace treepack::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DomainError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Runs fn, turning JSON access errors into DomainError.
template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed JSON input: ") + e.what());
  }
}

std::vector<int> int_list(const Json& j) {
  if (!j.is_array()) throw DomainError("expected a JSON array of integers");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw DomainError("expected integer entries");
    out.push_back(x.get<int>());
  }
  return out;
}

Json edge_list(const LabeledTree& tree) {
  Json edges = Json::array();
  for (const auto& e : tree.edges()) edges.push_back({e.u, e.v});
  return edges;
}

LabeledTree tree_from_edges(int n, const Json& edges) {
  if (!edges.is_array()) throw DomainError("edges must be an array");
  std::vector<Edge> out;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) throw DomainError("each edge must be a pair [u, v]");
    out.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return LabeledTree(n, std::move(out));
}

}  // namespace

DegreeSequence parse_sequence(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw DomainError("empty degree sequence");
  std::vector<int> degrees;
  for (auto part : split(text, ',')) degrees.push_back(static_cast<int>(parse_integer(part)));
  return DegreeSequence(std::move(degrees));
}

std::string format_sequence(const DegreeSequence& d) {
  std::string out;
  for (int v = 1; v <= d.size(); ++v) {
    if (v > 1) out += ',';
    out += std::to_string(d(v));
  }
  return out;
}

DegreeMatrix parse_matrix(std::string_view text) {
  std::vector<DegreeSequence> rows;
  for (auto part : split(trim(text), ';')) rows.push_back(parse_sequence(part));
  return DegreeMatrix(std::move(rows));
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const long long num = parse_integer(text.substr(0, slash));
    const long long den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator");
    return Rational(BigInt(num), BigInt(den));
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string_view::npos) {
      throw DomainError("not a number: '" + std::string(text) + "'");
    }
    BigInt scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    const bool negative = !whole.empty() && whole.front() == '-';
    BigInt value = whole.empty() || whole == "-" ? BigInt(0) : BigInt(parse_integer(whole));
    if (negative) value = -value;
    value = value * scale + BigInt(std::string(frac));
    return Rational(negative ? BigInt(-value) : value, scale);
  }
  return Rational(BigInt(parse_integer(text)));
}

std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_tree(const LabeledTree& tree) {
  std::string out = "n=" + std::to_string(tree.order()) + "\n";
  for (const auto& e : tree.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

LabeledTree parse_tree(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (n < 0) {
      if (t.substr(0, 2) != "n=") throw DomainError("tree text must start with 'n=<int>'");
      n = static_cast<int>(parse_integer(t.substr(2)));
      continue;
    }
    const auto space = t.find_first_of(" \t");
    if (space == std::string_view::npos) throw DomainError("edge line must be 'u v'");
    edges.push_back({static_cast<int>(parse_integer(t.substr(0, space))),
                     static_cast<int>(parse_integer(t.substr(space + 1)))});
  }
  if (n < 0) throw DomainError("missing 'n=<int>' header");
  return LabeledTree(n, std::move(edges));
}

Json sequence_json(const DegreeSequence& d) {
  return Json(std::vector<int>(d.values().begin(), d.values().end()));
}

DegreeSequence sequence_from_json(const Json& j) {
  return guarded([&] { return DegreeSequence(int_list(j)); });
}

DegreeMatrix matrix_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_array()) throw DomainError("matrix must be an array of arrays");
    std::vector<DegreeSequence> rows;
    for (const auto& r : j) rows.emplace_back(int_list(r));
    return DegreeMatrix(std::move(rows));
  });
}

Json tree_json(const LabeledTree& tree) {
  Json j;
  j["n"] = tree.order();
  j["edges"] = edge_list(tree);
  return j;
}

LabeledTree tree_from_json(const Json& j) {
  return guarded([&] { return tree_from_edges(j.at("n").get<int>(), j.at("edges")); });
}

Json packing_json(const PackingResult& result) {
  Json j;
  j["n"] = result.n;
  j["trees"] = Json::array();
  for (const auto& t : result.trees) j["trees"].push_back(edge_list(t));
  return j;
}

PackingResult packing_from_json(const Json& j) {
  return guarded([&] {
    PackingResult r;
    r.n = j.at("n").get<int>();
    for (const auto& t : j.at("trees")) r.trees.push_back(tree_from_edges(r.n, t));
    return r;
  });
}

Json pair_instance_json(const SimplePairInstance& inst) {
  Json j;
  j["D"] = sequence_json(inst.d);
  j["F"] = sequence_json(inst.f);
  return j;
}

SimplePairInstance pair_instance_from_json(const Json& j) {
  return guarded([&] {
    return SimplePairInstance{DegreeSequence(int_list(j.at("D"))), DegreeSequence(int_list(j.at("F")))};
  });
}

Json bipartite_instance_json(const BipartitePairInstance& inst) {
  Json j;
  j["n1"] = inst.n1;
  j["n2"] = inst.n2;
  j["D"] = {inst.d.first, inst.d.second};
  j["F"] = {inst.f.first, inst.f.second};
  return j;
}

BipartitePairInstance bipartite_instance_from_json(const Json& j) {
  return guarded([&] {
    BipartitePairInstance inst;
    inst.n1 = j.at("n1").get<int>();
    inst.n2 = j.at("n2").get<int>();
    auto classes = [](const Json& side) {
      if (!side.is_array() || side.size() != 2) throw DomainError("bipartite side must be [[...], [...]]");
      return BipartiteDegrees{int_list(side[0]), int_list(side[1])};
    };
    inst.d = classes(j.at("D"));
    inst.f = classes(j.at("F"));
    validate(inst);
    return inst;
  });
}

Json analysis_json(const PairAnalysis& a) {
  Json j;
  j["A"] = a.a;
  j["B"] = a.b;
  j["expected_common"] = format_rational(a.expected_common);
  j["p_lower"] = format_rational(a.p_lower);
  return j;
}

Json report_json(const EstimateReport& r) {
  Json j;
  j["samples_used"] = r.samples_used;
  j["hits"] = r.hits;
  j["p_hat"] = format_rational(r.p_hat);
  j["p_lower"] = format_rational(r.p_lower);
  j["trees_d"] = r.trees_d.str();
  j["trees_f"] = r.trees_f.str();
  j["count_estimate"] = format_rational(r.count_estimate);
  j["count_estimate_approx"] = static_cast<double>(r.count_estimate);
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta;
  j["seed"] = r.seed;
  j["workers"] = r.workers;
  j["batch_size"] = r.batch_size;
  return j;
}

std::vector<double> distribution_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_array()) throw DomainError("distribution must be a JSON array");
    std::vector<double> out;
    for (const auto& x : j) {
      if (!x.is_number()) throw DomainError("distribution entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  });
}

}  // namespace treepack::io
