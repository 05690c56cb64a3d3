#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bslimit/chain_space.hpp"
#include "bslimit/coloring.hpp"
#include "bslimit/leafgraph.hpp"
#include "bslimit/local_stats.hpp"
#include "bslimit/rational.hpp"

namespace bslimit {

using Json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

inline Json to_json(const TypeDistribution& d) {
  Json entries = Json::array();
  for (const auto& [code, k] : d.counts)
    entries.push_back({{"code", to_hex(code)}, {"count", k}, {"frequency", to_string(d.frequency(code))}});
  return {{"r", d.radius}, {"n", d.vertex_count}, {"d", d.degree_bound}, {"colored", d.colored}, {"entries", entries}};
}

inline Json to_json(const RadiusVerdict& v) {
  Json tv = Json::array(), approx = Json::array();
  for (const auto& t : v.tv) {
    tv.push_back(to_string(t));
    approx.push_back(to_double(t));
  }
  return {{"r", v.radius}, {"colored", v.colored}, {"tv", tv}, {"tv_approx", approx}, {"converged", v.converged}};
}

inline Json to_json(const ColoringBundle& b, const Graph& g) {
  Json edges = Json::array();
  for (int e = 0; e < g.edge_count(); ++e)
    edges.push_back({g.edges()[e].first, g.edges()[e].second, b.edge_colors[e]});
  Json palettes = Json::array();
  for (int i = 1; i <= b.depth; ++i) palettes.push_back(b.vertex_palette_size(i));
  return {{"d", b.degree_bound},
          {"depth", b.depth},
          {"edge_palette_size", b.edge_palette_size()},
          {"vertex_palette_sizes", palettes},
          {"edges", edges},
          {"vertex_colors", b.vertex_colors}};
}

/// Reads a bundle written by `to_json(bundle, g)` back against g.
inline ColoringBundle bundle_from_json(const Json& j, const Graph& g) {
  std::vector<int> colors(g.edge_count(), -1);
  for (const auto& e : j.at("edges")) {
    int id = g.edge_id(e.at(0).get<int>(), e.at(1).get<int>());
    if (id < 0) throw ValidationError("bundle lists an edge absent from the graph");
    colors[id] = e.at(2).get<int>();
  }
  return make_bundle(g, std::move(colors), j.at("vertex_colors").get<std::vector<std::vector<std::uint32_t>>>());
}

inline Json to_json(const ColoredBall& cb) {
  Json edges = Json::array();
  for (int u = 0; u < cb.ball.vertex_count(); ++u)
    for (std::size_t k = 0; k < cb.ball.adjacency[u].size(); ++k)
      if (u < cb.ball.adjacency[u][k]) edges.push_back({u, cb.ball.adjacency[u][k], cb.colors.edge[u][k]});
  return {{"radius", cb.ball.radius}, {"dist", cb.ball.dist}, {"edges", edges}, {"tuples", cb.colors.tuples}};
}

inline Json to_json(const TypeTrie& t) {
  Json levels = Json::array();
  Json nodes = Json::array();
  for (int l = 0; l <= t.depth; ++l) {
    levels.push_back(t.levels[l].size());
    for (const auto& [code, node] : t.levels[l])
      nodes.push_back({{"level", l},
                       {"code", to_hex(code)},
                       {"parent", l == 0 ? Json(nullptr) : Json(to_hex(node.parent))},
                       {"count", node.count},
                       {"measure", to_string(node.measure)},
                       {"representative", to_json(decode(node.type))}});
  }
  return {{"depth", t.depth},      {"d", t.degree_bound},   {"mode", to_string(t.mode)},
          {"source_sizes", t.source_sizes}, {"nodes_per_level", levels}, {"nodes", nodes}};
}

/// Reads a trie document. Links are rebuilt from the parent codes; nothing is
/// validated here so that damaged documents can be diagnosed by check_trie.
inline TypeTrie trie_from_json(const Json& j) {
  TypeTrie t;
  t.depth = j.at("depth").get<int>();
  t.degree_bound = j.at("d").get<int>();
  const auto mode = j.at("mode").get<std::string>();
  if (mode != "last" && mode != "cesaro") throw ValidationError("unknown trie mode '" + mode + "'");
  t.mode = mode == "last" ? EstimationMode::last : EstimationMode::cesaro;
  t.source_sizes = j.at("source_sizes").get<std::vector<std::int64_t>>();
  if (t.depth < 0) throw ValidationError("negative trie depth");
  t.levels.resize(t.depth + 1);
  for (const auto& n : j.at("nodes")) {
    int l = n.at("level").get<int>();
    if (l < 0 || l > t.depth) throw ValidationError("trie node level out of range");
    TrieNode node;
    node.type = ColoredType{from_hex(n.at("code").get<std::string>()), l, t.degree_bound};
    node.parent = n.at("parent").is_null() ? std::string() : from_hex(n.at("parent").get<std::string>());
    node.count = n.at("count").get<std::int64_t>();
    node.measure = parse_rational(n.at("measure").get<std::string>());
    std::string code = node.type.code;
    t.levels[l].emplace(std::move(code), std::move(node));
  }
  for (int l = 1; l <= t.depth; ++l)
    for (auto& [code, node] : t.levels[l])
      if (auto it = t.levels[l - 1].find(node.parent); it != t.levels[l - 1].end()) it->second.children.push_back(code);
  for (auto& level : t.levels)
    for (auto& [code, node] : level) std::sort(node.children.begin(), node.children.end());
  return t;
}

inline Json to_json(const Chain& x) {
  Json types = Json::array();
  for (const auto& t : x.types) types.push_back(to_hex(t.code));
  return types;
}

inline Json to_json(const TrieCheck& c) { return {{"ok", c.ok}, {"violations", c.violations}}; }

inline Json to_json(const InvarianceReport& r, bool with_fibers = true) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json j = {{"type", to_hex(e.type.code)}, {"tau", e.tau}, {"fiber_tau_sum", e.fiber_tau_sum}};
    if (with_fibers) {
      Json fiber = Json::array();
      for (const auto& b : e.fiber) fiber.push_back(to_hex(b));
      j["fiber"] = fiber;
    } else {
      j["fiber_size"] = e.fiber.size();
    }
    j["measure"] = to_string(e.measure);
    j["image_measure"] = to_string(e.image_measure);
    j["fibers_agree"] = e.fibers_agree;
    j["pass"] = e.pass;
    entries.push_back(std::move(j));
  }
  return {{"a", r.color}, {"r", r.radius}, {"pass", r.pass}, {"entries", entries}};
}

inline Json to_json(const LeafballReport& rep) {
  Json verdicts = Json::array();
  for (const auto& v : rep.verdicts) {
    Json bad = Json::array();
    for (const auto& k : v.violations) bad.push_back({{"kind", k.kind}, {"first", k.first.str()}, {"second", k.second.str()}});
    verdicts.push_back({{"vertex", v.vertex},
                        {"isomorphic", v.isomorphic},
                        {"kernel", v.kernel},
                        {"bijective", v.bijective},
                        {"forgets_colors", v.forgets_colors},
                        {"pass", v.pass()},
                        {"counterexamples", bad}});
  }
  return {{"r", rep.radius},
          {"seed", rep.seed},
          {"checked", rep.verdicts.size()},
          {"failures", rep.failures()},
          {"pass", rep.pass()},
          {"verdicts", verdicts}};
}

}  // namespace bslimit
