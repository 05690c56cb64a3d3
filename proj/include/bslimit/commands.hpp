#pragma once

// Batch commands behind the command-line tool. Each returns a JSON report and
// an exit code; nothing here touches stdout, so the commands are testable.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bslimit/chain_space.hpp"
#include "bslimit/coloring.hpp"
#include "bslimit/error.hpp"
#include "bslimit/generators.hpp"
#include "bslimit/graph.hpp"
#include "bslimit/json_io.hpp"
#include "bslimit/leafgraph.hpp"
#include "bslimit/local_stats.hpp"
#include "bslimit/rational.hpp"

namespace bslimit {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIngestion = 2,
  kExitValidation = 3,
  kExitVerification = 4,
};

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;  // ordered graph sequence
  int r = 1;
  std::optional<int> depth;
  std::string epsilon = "1e-3";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> color_seed;  // shuffles the greedy vertex order
  std::string out;
  EstimationMode mode = EstimationMode::last;
  std::optional<int> degree_bound;
  bool allow_disconnected = false;
  bool colored = false;
  std::optional<std::size_t> sample;  // leafball vertices; all when unset
  std::size_t count = 1;              // chain samples
  std::string trie_path;
  std::vector<int> colors;  // restrict invariance checks to these a; all of S when empty
  bool brief = false;       // omit fibers and per-entry detail
  // generate
  std::string family;
  int n = 0, width = 0, height = 0, regular_degree = 3;
};

struct CommandResult {
  Json report;
  int exit_code = kExitOk;
  std::string text;  // non-JSON payload (generate), empty otherwise
};

namespace detail {

inline Json header(const RunConfig& c) {
  return {{"version", kReportVersion}, {"command", c.command}, {"seed", c.seed}, {"inputs", c.inputs}};
}

inline std::vector<Graph> load_inputs(const RunConfig& c, std::size_t at_least) {
  if (c.inputs.size() < at_least)
    throw ValidationError(c.command + ": needs at least " + std::to_string(at_least) + " input graph" +
                          (at_least == 1 ? "" : "s"));
  LoadOptions opts{c.degree_bound, c.allow_disconnected};
  std::vector<Graph> graphs;
  for (const auto& p : c.inputs) graphs.push_back(load_graph(p, opts));
  return graphs;
}

inline void require_common_degree_bound(const std::vector<Graph>& graphs) {
  for (const auto& g : graphs)
    if (g.degree_bound() != graphs.front().degree_bound())
      throw ValidationError("input graphs have different degree bounds (" +
                            std::to_string(graphs.front().degree_bound()) + " vs " +
                            std::to_string(g.degree_bound()) + "); pass --d");
}

inline ColoringBundle bundle_for(const Graph& g, int depth, const RunConfig& c) {
  return build_bundle(g, std::max(depth, 1), c.color_seed);
}

inline std::vector<int> colors_to_check(const RunConfig& c, int degree_bound) {
  std::vector<int> out = c.colors;
  if (out.empty())
    for (int a = 0; a <= degree_bound; ++a) out.push_back(a);
  for (int a : out)
    if (a < 0 || a > degree_bound) throw ValidationError("color " + std::to_string(a) + " outside {0.." +
                                                         std::to_string(degree_bound) + "}");
  return out;
}

inline TypeTrie trie_for(const std::vector<Graph>& graphs, int depth, const RunConfig& c) {
  if (c.mode == EstimationMode::cesaro) {
    require_common_degree_bound(graphs);
    std::vector<ColoringBundle> bundles;
    for (const auto& g : graphs) bundles.push_back(bundle_for(g, depth, c));
    return build_trie_cesaro(graphs, bundles, depth);
  }
  return build_trie(graphs.back(), bundle_for(graphs.back(), depth, c), depth);
}

inline TypeTrie load_trie(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError("cannot open trie file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw GraphFormatError("trie file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    // Accept a whole `build` report as well as a bare trie.
    return trie_from_json(j.contains("trie") ? j.at("trie") : j);
  } catch (const Json::exception& e) {
    throw ValidationError("trie file '" + path + "' is malformed: " + e.what());
  }
}

inline Json invariance_section(const TypeTrie& trie, const Graph& g, const ColoringBundle& b, int r,
                               const RunConfig& c, bool& pass) {
  Json tables = Json::array();
  for (int a : colors_to_check(c, g.degree_bound()))
    for (int k = 0; k <= r; ++k) {
      InvarianceReport rep = verify_invariance(trie, g, b, a, k);
      pass = pass && rep.pass;
      Json j = to_json(rep, !c.brief);
      if (c.brief) {
        Json failing = Json::array();
        for (auto& e : j["entries"])
          if (!e["pass"].get<bool>()) failing.push_back(e);
        j["entries_checked"] = j["entries"].size();
        j["entries"] = failing;
      }
      tables.push_back(std::move(j));
    }
  return tables;
}

}  // namespace detail

inline CommandResult cmd_stats(const RunConfig& c) {
  auto graphs = detail::load_inputs(c, 1);
  if (c.r < 0) throw ValidationError("--r must be >= 0");
  std::vector<int> radii;
  if (c.depth) {
    if (*c.depth < 1) throw ValidationError("--depth must be >= 1");
    for (int k = 1; k <= *c.depth; ++k) radii.push_back(k);
  } else {
    radii.push_back(c.r);
  }
  CommandResult res{detail::header(c), kExitOk, {}};
  Json per_graph = Json::array();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    ColoringBundle b = detail::bundle_for(g, radii.back(), c);
    Json dists = Json::array();
    for (int k : radii) {
      dists.push_back(to_json(distribution(g, k)));
      dists.push_back(to_json(distribution(g, k, &b)));
    }
    per_graph.push_back({{"path", c.inputs[i]}, {"n", g.vertex_count()}, {"d", g.degree_bound()}, {"distributions", dists}});
  }
  res.report["graphs"] = per_graph;
  return res;
}

inline CommandResult cmd_converge(const RunConfig& c) {
  auto graphs = detail::load_inputs(c, 2);
  detail::require_common_degree_bound(graphs);
  const int depth = c.depth.value_or(c.r);
  const Rational eps = parse_decimal(c.epsilon);
  if (eps <= 0) throw ValidationError("--epsilon must be positive");
  std::vector<ColoringBundle> bundles;
  if (c.colored)
    for (const auto& g : graphs) bundles.push_back(detail::bundle_for(g, depth, c));
  SequenceReport rep = analyze_sequence(graphs, depth, eps, c.colored ? &bundles : nullptr);

  CommandResult res{detail::header(c), kExitOk, {}};
  res.report["depth"] = depth;
  res.report["epsilon"] = to_string(eps);
  Json verdicts = Json::array();
  bool all = true;
  for (const auto& v : rep.verdicts) {
    verdicts.push_back(to_json(v));
    all = all && v.converged;
  }
  res.report["converged"] = all;
  res.report["verdicts"] = verdicts;
  if (!c.brief) {
    Json dists = Json::array();
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      Json row = Json::array();
      for (const auto& d : rep.distributions[i]) row.push_back(to_json(d));
      if (c.colored)
        for (const auto& d : rep.colored_distributions[i]) row.push_back(to_json(d));
      dists.push_back({{"path", c.inputs[i]}, {"distributions", row}});
    }
    res.report["graphs"] = dists;
  }
  return res;
}

inline CommandResult cmd_color(const RunConfig& c) {
  auto graphs = detail::load_inputs(c, 1);
  const int depth = c.depth.value_or(c.r);
  CommandResult res{detail::header(c), kExitOk, {}};
  Json bundles = Json::array();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    Json j = to_json(detail::bundle_for(graphs[i], depth, c), graphs[i]);
    j["path"] = c.inputs[i];
    bundles.push_back(std::move(j));
  }
  res.report["bundles"] = bundles;
  return res;
}

inline CommandResult cmd_build(const RunConfig& c) {
  auto graphs = detail::load_inputs(c, 1);
  const int depth = c.depth.value_or(c.r + 1);
  TypeTrie trie = detail::trie_for(graphs, depth, c);
  TrieCheck check = check_trie(trie);
  CommandResult res{detail::header(c), kExitOk, {}};
  res.report["check"] = to_json(check);
  res.report["trie"] = to_json(trie);
  if (!check.ok) res.exit_code = kExitVerification;
  return res;
}

inline CommandResult cmd_verify_invariance(const RunConfig& c) {
  auto graphs = detail::load_inputs(c, 1);
  const Graph& g = graphs.back();
  const int depth = c.depth.value_or(c.r + 1);
  if (depth < c.r + 1) throw ValidationError("trie depth must be >= r+1");
  TypeTrie trie = c.trie_path.empty() ? detail::trie_for(graphs, depth, c) : detail::load_trie(c.trie_path);
  if (trie.degree_bound != g.degree_bound()) throw ValidationError("trie and graph have different degree bounds");
  TrieCheck check = check_trie(trie);
  ColoringBundle b = detail::bundle_for(g, std::max(depth, trie.depth), c);
  bool pass = check.ok;
  CommandResult res{detail::header(c), kExitOk, {}};
  res.report["r"] = c.r;
  res.report["trie_check"] = to_json(check);
  res.report["invariance"] = detail::invariance_section(trie, g, b, c.r, c, pass);
  res.report["pass"] = pass;
  if (!pass) res.exit_code = kExitVerification;
  return res;
}

inline CommandResult cmd_verify_leafball(const RunConfig& c) {
  auto graphs = detail::load_inputs(c, 1);
  const Graph& g = graphs.back();
  ColoringBundle b = detail::bundle_for(g, c.depth.value_or(3 * c.r), c);
  LeafballReport rep = verify_reconstruction(g, b, c.r, c.sample.value_or(g.vertex_count()), c.seed);
  CommandResult res{detail::header(c), kExitOk, {}};
  res.report["leafball"] = to_json(rep);
  res.report["pass"] = rep.pass();
  if (!rep.pass()) res.exit_code = kExitVerification;
  return res;
}

/// Invariance at radii <= r plus leafball reconstruction at radius r.
inline CommandResult cmd_verify(const RunConfig& c) {
  auto graphs = detail::load_inputs(c, 1);
  const Graph& g = graphs.back();
  if (c.r < 1) throw ValidationError("--r must be >= 1");
  const int trie_depth = c.depth.value_or(c.r + 1);
  if (trie_depth < c.r + 1) throw ValidationError("trie depth must be >= r+1");
  TypeTrie trie = c.trie_path.empty() ? detail::trie_for(graphs, trie_depth, c) : detail::load_trie(c.trie_path);
  if (trie.degree_bound != g.degree_bound()) throw ValidationError("trie and graph have different degree bounds");
  ColoringBundle b = detail::bundle_for(g, std::max({trie.depth, trie_depth, 3 * c.r}), c);
  TrieCheck check = check_trie(trie);
  bool pass = check.ok;
  CommandResult res{detail::header(c), kExitOk, {}};
  res.report["r"] = c.r;
  res.report["trie_check"] = to_json(check);
  res.report["invariance"] = detail::invariance_section(trie, g, b, c.r, c, pass);
  LeafballReport leaf = verify_reconstruction(g, b, c.r, c.sample.value_or(g.vertex_count()), c.seed);
  pass = pass && leaf.pass();
  Json lj = to_json(leaf);
  if (c.brief) {
    Json failing = Json::array();
    for (auto& v : lj["verdicts"])
      if (!v["pass"].get<bool>()) failing.push_back(v);
    lj["verdicts"] = failing;
  }
  res.report["leafball"] = lj;
  res.report["pass"] = pass;
  if (!pass) res.exit_code = kExitVerification;
  return res;
}

inline CommandResult cmd_chain_sample(const RunConfig& c) {
  TypeTrie trie;
  if (!c.trie_path.empty()) {
    trie = detail::load_trie(c.trie_path);
    TrieCheck check = check_trie(trie);
    if (!check.ok) {
      CommandResult res{detail::header(c), kExitVerification, {}};
      res.report["trie_check"] = to_json(check);
      return res;
    }
  } else {
    trie = detail::trie_for(detail::load_inputs(c, 1), c.depth.value_or(c.r + 1), c);
  }
  std::mt19937_64 rng(c.seed);
  Json chains = Json::array();
  for (std::size_t i = 0; i < c.count; ++i) chains.push_back(to_json(sample_chain(trie, rng)));
  CommandResult res{detail::header(c), kExitOk, {}};
  res.report["depth"] = trie.depth;
  res.report["mode"] = to_string(trie.mode);
  res.report["chains"] = chains;
  return res;
}

inline CommandResult cmd_generate(const RunConfig& c) {
  Graph g = [&] {
    if (c.family == "cycle") return gen::cycle(c.n);
    if (c.family == "path") return gen::path(c.n);
    if (c.family == "star") return gen::star(c.n);
    if (c.family == "complete") return gen::complete(c.n);
    if (c.family == "torus") return gen::torus(c.width, c.height);
    if (c.family == "regular") return gen::random_regular(c.n, c.regular_degree, c.seed);
    throw ValidationError("unknown family '" + c.family + "'");
  }();
  CommandResult res{detail::header(c), kExitOk, {}};
  res.text = to_edge_list(g);
  return res;
}

/// Dispatches on config.command and maps library errors to exit codes.
inline CommandResult run_command(const RunConfig& c) {
  auto fail = [&](int code, const char* kind, const std::exception& e) {
    CommandResult res{detail::header(c), code, {}};
    res.report["error"] = {{"kind", kind}, {"message", e.what()}};
    return res;
  };
  try {
    if (c.command == "stats") return cmd_stats(c);
    if (c.command == "converge") return cmd_converge(c);
    if (c.command == "color") return cmd_color(c);
    if (c.command == "build") return cmd_build(c);
    if (c.command == "verify-invariance") return cmd_verify_invariance(c);
    if (c.command == "verify-leafball") return cmd_verify_leafball(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "chain sample") return cmd_chain_sample(c);
    if (c.command == "generate") return cmd_generate(c);
    return fail(kExitUsage, "usage", std::invalid_argument("unknown command '" + c.command + "'"));
  } catch (const GraphFormatError& e) {
    return fail(kExitIngestion, "ingestion", e);
  } catch (const DegreeBoundError& e) {
    return fail(kExitIngestion, "ingestion", e);
  } catch (const ValidationError& e) {
    return fail(kExitValidation, "validation", e);
  } catch (const VerificationFailure& e) {
    return fail(kExitVerification, "verification", e);
  }
}

}  // namespace bslimit
