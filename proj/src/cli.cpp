#include "treepack/cli.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "treepack/errors.hpp"
#include "treepack/io.hpp"

namespace treepack::cli {

namespace {

using io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string d, f, matrix, p, q, input, instance, format = "text";
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  double delta = 0.05;
  int guard_n = 0, n = 0, i = 0, j = 0;
  unsigned workers = 1;
  std::uint64_t batch = 4096;
};

// Flags carrying instance data; together they count as one input source.
constexpr std::array kDataFlags = {"--d", "--f", "--matrix", "--n", "--p", "--q", "--i", "--j"};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<double> parse_doubles(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
      throw DomainError("not a number: '" + std::string(token) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<int> sequence_values(std::string_view text) {
  const auto d = io::parse_sequence(text);
  return {d.values().begin(), d.values().end()};
}

// "a,b,c;x,y" -> class-1 and class-2 degree lists.
BipartiteDegrees parse_classes(const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos) throw DomainError("bipartite degrees must look like '1,2;2,1'");
  return {sequence_values(std::string_view(text).substr(0, semi)),
          sequence_values(std::string_view(text).substr(semi + 1))};
}

std::string packing_text(const PackingResult& r) {
  std::string out;
  for (std::size_t k = 0; k < r.trees.size(); ++k) {
    if (k > 0) out += "\n";
    out += io::format_tree(r.trees[k]);
  }
  return out;
}

std::string pair_text(const SimplePairInstance& inst) {
  return "D=" + io::format_sequence(inst.d) + "\nF=" + io::format_sequence(inst.f) + "\n";
}

// key=value lines; strings unquoted.
std::string kv_text(const Json& j) {
  std::string out;
  for (const auto& [key, value] : j.items()) {
    out += key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

std::string join(const std::vector<Vertex>& xs) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + std::to_string(xs[k]);
  return out;
}

class Context {
 public:
  Context(const CLI::App& app, const Options& o, std::istream& in, std::ostream& out)
      : app_(app), o_(o), out_(out) {
    const bool file = given("--input"), inline_doc = given("--instance");
    bool flags = false;
    for (const char* flag : kDataFlags) flags = flags || given(flag);
    if (int(file) + int(inline_doc) + int(flags) > 1) {
      throw UsageError("give exactly one input source: instance flags, --input or --instance");
    }
    if (!file && !inline_doc) return;
    std::string text;
    if (inline_doc) {
      text = o.instance;
    } else if (o.input == "-") {
      text = read_all(in);
    } else {
      std::ifstream f(o.input);
      if (!f) throw UsageError("cannot read " + o.input);
      text = read_all(f);
    }
    try {
      doc_ = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw DomainError(std::string("malformed JSON input: ") + e.what());
    }
  }

  bool json() const { return o_.format == "json"; }
  const Options& options() const { return o_; }
  bool given(const char* flag) const { return app_.count(flag) > 0; }

  DegreeSequence d() {
    if (doc_ && doc_->is_array()) return io::sequence_from_json(*doc_);
    return sequence("D", o_.d, "--d");
  }
  DegreeSequence f() { return sequence("F", o_.f, "--f"); }
  SimplePairInstance pair() { return {d(), f()}; }

  DegreeMatrix matrix() {
    if (doc_) return io::matrix_from_json(doc_->is_array() ? *doc_ : field("matrix"));
    require("--matrix");
    return io::parse_matrix(o_.matrix);
  }

  BipartitePairInstance bipartite() {
    if (doc_) return io::bipartite_instance_from_json(*doc_);
    require("--d");
    require("--f");
    BipartitePairInstance inst;
    inst.d = parse_classes(o_.d);
    inst.f = parse_classes(o_.f);
    inst.n1 = static_cast<int>(inst.d.first.size());
    inst.n2 = static_cast<int>(inst.d.second.size());
    validate(inst);
    return inst;
  }

  int integer(const char* key, int value, const char* flag) {
    if (doc_) return field(key).get<int>();
    require(flag);
    return value;
  }

  Rational rational(const char* key, const std::string& value, const char* flag) {
    if (doc_) {
      const Json& x = field(key);
      return io::parse_rational(x.is_string() ? x.get<std::string>() : x.dump());
    }
    require(flag);
    return io::parse_rational(value);
  }

  std::vector<double> distribution(const char* key, const std::string& value, const char* flag) {
    if (doc_) return io::distribution_from_json(field(key));
    require(flag);
    return parse_doubles(value);
  }

  std::uint64_t seed() const {
    if (!given("--seed")) throw UsageError("--seed is required for this command");
    return o_.seed;
  }

  int guard(int fallback) const { return given("--guard-n") ? o_.guard_n : fallback; }

  void emit(const Json& j) { out_ << j.dump() << "\n"; }
  void emit(const std::string& text) { out_ << text; }

  template <typename J, typename T>
  void emit(J&& make_json, T&& make_text) {
    if (json()) {
      emit(Json(make_json()));
    } else {
      emit(std::string(make_text()));
    }
  }

 private:
  DegreeSequence sequence(const char* key, const std::string& value, const char* flag) {
    if (doc_) return io::sequence_from_json(field(key));
    require(flag);
    return io::parse_sequence(value);
  }

  const Json& field(const char* key) {
    if (!doc_->is_object() || !doc_->contains(key)) {
      throw UsageError(std::string("instance document lacks \"") + key + "\"");
    }
    return (*doc_)[key];
  }

  void require(const char* flag) const {
    if (!given(flag)) throw UsageError(std::string("missing ") + flag);
  }

  const CLI::App& app_;
  const Options& o_;
  std::ostream& out_;
  std::optional<Json> doc_;
};

using Handler = int (*)(Context&);

struct Command {
  const char* name;
  const char* help;
  Handler handler;
};

int cmd_graphical(Context& c) {
  const auto d = c.d();
  const bool ok = is_graphical(d);
  c.emit([&] { return Json{{"sequence", io::sequence_json(d)}, {"graphical", ok}}; },
         [&] { return std::string(ok ? "true\n" : "false\n"); });
  return ok ? kOk : kInfeasible;
}

int cmd_classify(Context& c) {
  const auto d = c.d();
  const std::string cls(to_string(classify(d)));
  c.emit([&] { return Json{{"sequence", io::sequence_json(d)}, {"class", cls}}; },
         [&] { return cls + "\n"; });
  return kOk;
}

int cmd_count_trees(Context& c) {
  const auto d = c.d();
  const std::string count = count_trees(d).str();
  c.emit([&] { return Json{{"sequence", io::sequence_json(d)}, {"count", count}}; },
         [&] { return count + "\n"; });
  return kOk;
}

int cmd_enum_trees(Context& c) {
  const auto d = c.d();
  const int guard = c.guard(kDefaultExactGuard);
  if (d.size() > guard) {
    throw ResourceError("tree enumeration limited to n <= " + std::to_string(guard) +
                        " (raise with --guard-n)");
  }
  const auto trees = enumerate_trees(d);
  c.emit(
      [&] {
        Json j{{"n", d.size()}, {"count", trees.size()}, {"trees", Json::array()}};
        for (const auto& t : trees) j["trees"].push_back(io::tree_json(t)["edges"]);
        return j;
      },
      [&] {
        std::string out;
        for (std::size_t k = 0; k < trees.size(); ++k) out += (k ? "\n" : "") + io::format_tree(trees[k]);
        return out;
      });
  return kOk;
}

int cmd_random_tree(Context& c) {
  const auto d = c.d();
  const auto tree = random_tree(d, c.seed());
  c.emit([&] { return io::tree_json(tree); }, [&] { return io::format_tree(tree); });
  return kOk;
}

int cmd_edge_prob(Context& c) {
  const auto d = c.d();
  const int i = c.integer("i", c.options().i, "--i");
  const int j = c.integer("j", c.options().j, "--j");
  const std::string p = io::format_rational(edge_probability(d, i, j));
  c.emit([&] { return Json{{"i", i}, {"j", j}, {"probability", p}}; }, [&] { return p + "\n"; });
  return kOk;
}

int cmd_ham_paths(Context& c) {
  const int n = c.integer("n", c.options().n, "--n");
  const auto [first, second] = disjoint_hamiltonian_orders(n);
  const auto [t1, t2] = disjoint_hamiltonian_paths(n);
  c.emit(
      [&] {
        return Json{{"n", n},
                    {"orders", {first, second}},
                    {"trees", {io::tree_json(t1)["edges"], io::tree_json(t2)["edges"]}}};
      },
      [&] { return join(first) + "\n" + join(second) + "\n"; });
  return kOk;
}

int cmd_pack_caterpillar(Context& c) {
  const auto inst = c.pair();
  const auto r = pack_caterpillars(inst.d, inst.f);
  c.emit([&] { return io::packing_json(r); }, [&] { return packing_text(r); });
  return kOk;
}

int cmd_kundu(Context& c) {
  const auto inst = c.pair();
  const bool ok = kundu_packable(inst.d, inst.f);
  const std::string message = ok ? "packable" : "sum not graphical";
  c.emit([&] { return Json{{"packable", ok}, {"message", message}}; },
         [&] { return message + "\n"; });
  return ok ? kOk : kInfeasible;
}

int cmd_pack_leaves(Context& c) {
  const auto inst = c.pair();
  const auto r = pack_complementary_leaves(inst.d, inst.f, c.seed());
  c.emit([&] { return io::packing_json(r); }, [&] { return packing_text(r); });
  return kOk;
}

int cmd_pack_multi(Context& c) {
  const MultiInstance inst(c.matrix());
  const auto r = pack_multi(inst, c.seed());
  c.emit(
      [&] {
        Json j = io::packing_json(r.packing);
        j["repaired_pairs"] = Json::array();
        for (const auto& [a, b] : r.repaired_pairs) j["repaired_pairs"].push_back({a + 1, b + 1});
        return j;
      },
      [&] { return packing_text(r.packing); });
  return kOk;
}

int cmd_analyze(Context& c) {
  const auto inst = c.pair();
  const auto a = analyze_pair(inst.d, inst.f);
  c.emit([&] { return io::analysis_json(a); },
         [&] {
           return "A=" + join(a.a) + "\nB=" + join(a.b) +
                  "\nexpected_common=" + io::format_rational(a.expected_common) +
                  "\np_lower=" + io::format_rational(a.p_lower) + "\n";
         });
  return kOk;
}

int cmd_expected_common(Context& c) {
  const auto inst = c.pair();
  const std::string e = io::format_rational(expected_common_general(inst.d, inst.f));
  c.emit([&] { return Json{{"expected_common", e}}; }, [&] { return e + "\n"; });
  return kOk;
}

int cmd_samples_needed(Context& c) {
  const auto& o = c.options();
  const Rational p = c.rational("p", o.p, "--p");
  const auto samples = required_samples(p, o.epsilon, o.delta);
  c.emit(
      [&] {
        return Json{{"p", io::format_rational(p)},
                    {"epsilon", o.epsilon},
                    {"delta", o.delta},
                    {"samples", samples}};
      },
      [&] { return std::to_string(samples) + "\n"; });
  return kOk;
}

int cmd_estimate(Context& c) {
  const auto inst = c.pair();
  const auto& o = c.options();
  EstimateOptions opts;
  opts.epsilon = o.epsilon;
  opts.delta = o.delta;
  opts.seed = c.seed();
  opts.workers = o.workers;
  opts.batch_size = o.batch;
  const Json report = io::report_json(estimate_disjoint_count(inst.d, inst.f, opts));
  c.emit([&] { return report; }, [&] { return kv_text(report); });
  return kOk;
}

int cmd_sample(Context& c) {
  const auto inst = c.pair();
  const auto s = sample_disjoint_pair(inst.d, inst.f, c.options().epsilon, c.seed());
  const PackingResult r{inst.d.size(), {s.first, s.second}};
  c.emit(
      [&] {
        Json j = io::packing_json(r);
        j["attempts"] = s.attempts;
        j["budget"] = s.budget;
        j["fallback_used"] = s.fallback_used;
        return j;
      },
      [&] { return packing_text(r); });
  return kOk;
}

int cmd_exact_count(Context& c) {
  const auto inst = c.pair();
  const std::string count = exact_disjoint_count(inst.d, inst.f, c.guard(kDefaultExactGuard)).str();
  c.emit([&] { return Json{{"count", count}}; }, [&] { return count + "\n"; });
  return kOk;
}

int cmd_tv(Context& c) {
  const auto p = c.distribution("p", c.options().p, "--p");
  const auto q = c.distribution("q", c.options().q, "--q");
  const double tv = tv_distance(p, q);
  c.emit([&] { return Json{{"tv", tv}}; }, [&] { return Json(tv).dump() + "\n"; });
  return kOk;
}

int emit_pair(Context& c, const SimplePairInstance& r) {
  c.emit([&] { return io::pair_instance_json(r); }, [&] { return pair_text(r); });
  return kOk;
}

int cmd_reduce_bipartite(Context& c) { return emit_pair(c, bipartite_to_simple(c.bipartite())); }
int cmd_reduce_dominate(Context& c) { return emit_pair(c, add_dominating_vertex(c.pair())); }
int cmd_reduce_pendant(Context& c) { return emit_pair(c, add_pendant_gadget(c.pair())); }

int cmd_reduce_tree(Context& c) {
  const auto t = reduce_to_tree_sequence(c.pair());
  c.emit(
      [&] {
        Json j = io::pair_instance_json(t.result);
        j["dominating_steps"] = t.dominating_steps;
        j["pendant_steps"] = t.pendant_steps;
        return j;
      },
      [&] {
        return pair_text(t.result) + "dominating_steps=" + std::to_string(t.dominating_steps) +
               "\npendant_steps=" + std::to_string(t.pendant_steps) + "\n";
      });
  return kOk;
}

int cmd_decide_brute(Context& c) {
  const bool ok = brute_force_disjoint_decision(c.pair(), c.guard(kDefaultBruteGuard));
  c.emit([&] { return Json{{"disjoint_realizations", ok}}; },
         [&] { return std::string(ok ? "true\n" : "false\n"); });
  return ok ? kOk : kInfeasible;
}

constexpr std::array<Command, 23> kCommands{{
    {"graphical", "Erdos-Gallai test; exit 2 if not graphical", cmd_graphical},
    {"classify", "not-tree, path, star or other-tree", cmd_classify},
    {"count-trees", "number of labelled trees realizing D", cmd_count_trees},
    {"enum-trees", "list every labelled tree realizing D", cmd_enum_trees},
    {"random-tree", "uniform random realization of D", cmd_random_tree},
    {"edge-prob", "probability that edge i-j is in a uniform realization", cmd_edge_prob},
    {"ham-paths", "two edge-disjoint Hamiltonian paths of K_n", cmd_ham_paths},
    {"pack-caterpillar", "edge-disjoint caterpillars for D, F without common leaves",
     cmd_pack_caterpillar},
    {"kundu", "whether D and F have edge-disjoint realizations", cmd_kundu},
    {"pack-leaves", "edge-disjoint realizations of a complementary-leaf pair", cmd_pack_leaves},
    {"pack-multi", "pairwise edge-disjoint trees for a degree matrix", cmd_pack_multi},
    {"analyze", "leaf classes, expected shared edges and disjointness bound", cmd_analyze},
    {"expected-common", "expected shared edges of uniform realizations", cmd_expected_common},
    {"samples-needed", "Monte Carlo sample size for given p, epsilon, delta", cmd_samples_needed},
    {"estimate", "estimate the number of edge-disjoint realization pairs", cmd_estimate},
    {"sample", "draw an almost uniform edge-disjoint realization pair", cmd_sample},
    {"exact-count", "count edge-disjoint realization pairs by enumeration", cmd_exact_count},
    {"tv", "total variation distance of two distributions", cmd_tv},
    {"reduce-bipartite", "bipartite pair instance to a simple-graph instance",
     cmd_reduce_bipartite},
    {"reduce-dominate", "add a dominating vertex to D", cmd_reduce_dominate},
    {"reduce-pendant", "add a pendant gadget", cmd_reduce_pendant},
    {"reduce-tree", "chain gadgets until D is a tree sequence", cmd_reduce_tree},
    {"decide-brute", "exhaustive disjoint-realization search; exit 2 if none", cmd_decide_brute},
}};

}  // namespace

int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Edge-disjoint realizations of tree degree sequences", "treepack"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags; flags win");

  Options o;
  app.add_option("--d", o.d, "degree sequence, e.g. 2,2,1,1 (bipartite: 1,1;1,1)");
  app.add_option("--f", o.f, "second degree sequence");
  app.add_option("--matrix", o.matrix, "degree matrix, rows separated by ';'");
  app.add_option("--input", o.input, "JSON instance file, or - for stdin");
  app.add_option("--instance", o.instance, "inline JSON instance");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", o.seed, "RNG seed (randomized commands)");
  app.add_option("--epsilon", o.epsilon, "accuracy");
  app.add_option("--delta", o.delta, "failure probability");
  app.add_option("--guard-n", o.guard_n, "override the enumeration size guard");
  app.add_option("--workers", o.workers, "estimator threads");
  app.add_option("--batch", o.batch, "samples per RNG stream");
  app.add_option("--p", o.p, "probability, or first distribution as a comma list");
  app.add_option("--q", o.q, "second distribution as a comma list");
  app.add_option("--i", o.i, "first vertex");
  app.add_option("--j", o.j, "second vertex");
  app.add_option("--n", o.n, "number of vertices");

  Handler chosen = nullptr;
  for (const auto& cmd : kCommands) {
    app.add_subcommand(cmd.name, cmd.help)->callback([&chosen, h = cmd.handler] { chosen = h; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    Context ctx(app, o, in, out);
    return chosen(ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << "\n";
    return kResource;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace treepack::cli
