#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bslimit/canonical.hpp"
#include "bslimit/coloring.hpp"
#include "bslimit/error.hpp"
#include "bslimit/graph.hpp"
#include "bslimit/local_stats.hpp"
#include "bslimit/rational.hpp"

namespace bslimit {

/// A finite prefix A_1 < A_2 < ... < A_R of a chain; `types[k]` has radius k+1.
struct Chain {
  std::vector<ColoredType> types;

  int depth() const { return static_cast<int>(types.size()); }
  const ColoredType& at(int radius) const { return types.at(radius - 1); }

  Chain truncated(int depth) const {
    if (depth < 0 || depth > this->depth()) throw ValidationError("Chain::truncated: depth out of range");
    return Chain{{types.begin(), types.begin() + depth}};
  }

  /// restrict(A_r) == A_{r-1} for every consecutive pair.
  bool is_coherent() const {
    for (int r = 2; r <= depth(); ++r)
      if (restrict_type(at(r)) != at(r - 1)) return false;
    return true;
  }

  friend bool operator==(const Chain&, const Chain&) = default;
};

enum class EstimationMode { last, cesaro };

inline std::string to_string(EstimationMode m) { return m == EstimationMode::last ? "last" : "cesaro"; }

struct TrieNode {
  ColoredType type;
  std::string parent;  // code of restrict(type); empty at level 0
  std::int64_t count = 0;
  Rational measure;    // mu(M(type))
  std::vector<std::string> children;
};

/// Colored types up to radius `depth` arranged under the restriction order,
/// with the cylinder measure on every node. Level 0 holds the single radius-0
/// type and carries the total mass. Only types that occur are stored.
struct TypeTrie {
  int depth = 0;
  int degree_bound = 1;
  EstimationMode mode = EstimationMode::last;
  std::vector<std::int64_t> source_sizes;  // vertex counts of the graphs used
  std::vector<std::map<std::string, TrieNode>> levels;

  const TrieNode* find(int level, const std::string& code) const {
    if (level < 0 || level > depth) return nullptr;
    auto it = levels[level].find(code);
    return it == levels[level].end() ? nullptr : &it->second;
  }

  Rational measure(int level, const std::string& code) const {
    const TrieNode* n = find(level, code);
    return n ? n->measure : Rational(0);
  }

  std::size_t node_count() const {
    std::size_t s = 0;
    for (const auto& l : levels) s += l.size();
    return s;
  }

  friend bool operator==(const TypeTrie& a, const TypeTrie& b) {
    if (a.depth != b.depth || a.degree_bound != b.degree_bound || a.mode != b.mode ||
        a.source_sizes != b.source_sizes || a.levels.size() != b.levels.size())
      return false;
    for (std::size_t l = 0; l < a.levels.size(); ++l) {
      if (a.levels[l].size() != b.levels[l].size()) return false;
      for (auto ia = a.levels[l].begin(), ib = b.levels[l].begin(); ia != a.levels[l].end(); ++ia, ++ib)
        if (ia->first != ib->first || ia->second.parent != ib->second.parent ||
            ia->second.count != ib->second.count || ia->second.measure != ib->second.measure ||
            ia->second.children != ib->second.children)
          return false;
    }
    return true;
  }
};

namespace detail {

inline void link_children(TypeTrie& t) {
  for (int l = 1; l <= t.depth; ++l)
    for (auto& [code, node] : t.levels[l]) {
      auto it = t.levels[l - 1].find(node.parent);
      if (it == t.levels[l - 1].end()) throw VerificationFailure("trie node without parent at level " + std::to_string(l));
      it->second.children.push_back(code);
    }
  for (auto& level : t.levels)
    for (auto& [code, node] : level) std::sort(node.children.begin(), node.children.end());
}

}  // namespace detail

/// Trie of the colored types of g with exact empirical measures.
inline TypeTrie build_trie(const Graph& g, const ColoringBundle& bundle, int depth) {
  if (depth < 1) throw ValidationError("build_trie: depth must be >= 1");
  if (bundle.depth < depth)
    throw ValidationError("build_trie: coloring bundle depth " + std::to_string(bundle.depth) + " < " +
                          std::to_string(depth));
  if (g.vertex_count() == 0) throw ValidationError("build_trie: empty graph");
  const auto types = vertex_types(g, bundle, depth);
  TypeTrie t;
  t.depth = depth;
  t.degree_bound = g.degree_bound();
  t.source_sizes = {g.vertex_count()};
  t.levels.resize(depth + 1);
  for (int r = 0; r <= depth; ++r)
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      auto [it, fresh] = t.levels[r].try_emplace(types[r][v].code);
      TrieNode& node = it->second;
      std::string parent = r > 0 ? types[r - 1][v].code : std::string();
      if (fresh) {
        node.type = types[r][v];
        node.parent = std::move(parent);
      } else if (node.parent != parent) {
        throw VerificationFailure("two vertices of one colored type restrict to different types");
      }
      ++node.count;
    }
  for (auto& level : t.levels)
    for (auto& [code, node] : level) node.measure = Rational(node.count, g.vertex_count());
  detail::link_children(t);
  return t;
}

/// Averaged measure (1/k) sum_n p^c_{G_n} over a sequence; counts are summed.
inline TypeTrie build_trie_cesaro(const std::vector<Graph>& graphs, const std::vector<ColoringBundle>& bundles,
                                  int depth) {
  if (graphs.empty() || graphs.size() != bundles.size())
    throw ValidationError("build_trie_cesaro: need one bundle per graph");
  TypeTrie t;
  t.depth = depth;
  t.degree_bound = graphs.front().degree_bound();
  t.mode = EstimationMode::cesaro;
  t.levels.resize(depth + 1);
  const Rational k(static_cast<long long>(graphs.size()));
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i].degree_bound() != t.degree_bound)
      throw ValidationError("build_trie_cesaro: graphs have different degree bounds");
    TypeTrie one = build_trie(graphs[i], bundles[i], depth);
    t.source_sizes.push_back(graphs[i].vertex_count());
    for (int l = 0; l <= depth; ++l)
      for (auto& [code, node] : one.levels[l]) {
        auto [it, fresh] = t.levels[l].try_emplace(code);
        if (fresh) {
          it->second.type = node.type;
          it->second.parent = node.parent;
          it->second.measure = 0;
        }
        it->second.count += node.count;
        it->second.measure += node.measure / k;
      }
  }
  detail::link_children(t);
  return t;
}

struct TrieCheck {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string why) {
    ok = false;
    violations.push_back(std::move(why));
  }
};

/// Total mass 1, parent = sum of children (exactly), positive measures, and
/// optionally parent == restrict(node).
inline TrieCheck check_trie(const TypeTrie& t, bool check_restriction = true) {
  TrieCheck c;
  if (static_cast<int>(t.levels.size()) != t.depth + 1 || t.levels[0].size() != 1) {
    c.fail("trie must have depth+1 levels and a single level-0 node");
    return c;
  }
  if (t.levels[0].begin()->second.measure != 1) c.fail("level-0 mass is " + to_string(t.levels[0].begin()->second.measure));
  for (int l = 1; l <= t.depth; ++l) {
    Rational level_mass = 0;
    for (const auto& [code, node] : t.levels[l]) level_mass += node.measure;
    if (level_mass != 1) c.fail("level " + std::to_string(l) + " mass is " + to_string(level_mass));
  }
  for (int l = 0; l <= t.depth; ++l)
    for (const auto& [code, node] : t.levels[l]) {
      if (node.measure <= 0) c.fail("non-positive measure at level " + std::to_string(l) + " node " + to_hex(code));
      if (l < t.depth) {
        Rational sum = 0;
        std::int64_t count_sum = 0;
        for (const auto& ch : node.children) {
          const TrieNode* child = t.find(l + 1, ch);
          if (!child) {
            c.fail("missing child " + to_hex(ch));
            continue;
          }
          sum += child->measure;
          count_sum += child->count;
        }
        if (sum != node.measure)
          c.fail("additivity violated at level " + std::to_string(l) + " node " + to_hex(code) + ": " +
                 to_string(node.measure) + " != " + to_string(sum));
        if (count_sum != node.count)
          c.fail("count additivity violated at level " + std::to_string(l) + " node " + to_hex(code));
      }
      if (l > 0) {
        const TrieNode* parent = t.find(l - 1, node.parent);
        if (!parent || std::find(parent->children.begin(), parent->children.end(), code) == parent->children.end())
          c.fail("node " + to_hex(code) + " is not linked under its parent");
        if (check_restriction && restrict_type(node.type).code != node.parent)
          c.fail("parent of " + to_hex(code) + " is not its restriction");
      }
    }
  return c;
}

/// The coherent chain B_1(v) < ... < B_R(v) of v's colored types.
inline Chain vertex_chain(const Graph& g, const ColoringBundle& bundle, Vertex v, int depth) {
  if (depth < 0) throw ValidationError("vertex_chain: negative depth");
  if (bundle.depth < depth)
    throw ValidationError("vertex_chain: coloring bundle depth " + std::to_string(bundle.depth) + " < " +
                          std::to_string(depth));
  Chain x;
  if (depth == 0) return x;
  ColoredBall full = colored_ball(g, bundle, v, depth);
  for (int r = 1; r < depth; ++r) x.types.push_back(canonical_code(colored_sub_ball(full, RootedBall::root(), r, r)));
  x.types.push_back(canonical_code(full));
  return x;
}

/// Whether the root of type t has an incident edge of color a.
inline bool has_edge_color(const ColoredType& t, int a) {
  if (t.radius < 1) throw ValidationError("has_edge_color: radius-0 types carry no edges");
  return decode(t).neighbor_via(RootedBall::root(), a) >= 0;
}

/// One step of T_a on a single type: the (r-1)-type of the a-neighbor of the
/// root, or nothing when the root has no a-colored edge.
inline std::optional<ColoredType> involution_step(const ColoredType& t, int a) {
  if (t.radius < 1) throw ValidationError("involution_step: radius-0 type");
  ColoredBall rep = decode(t);
  int p = rep.neighbor_via(RootedBall::root(), a);
  if (p < 0) return std::nullopt;
  return canonical_code(colored_sub_ball(rep, p, t.radius - 1, t.radius - 1));
}

/// T_a on a finite chain. Without an a-edge at the root the chain is fixed;
/// otherwise the image is known to depth one less than the input.
inline Chain apply_involution(int a, const Chain& x) {
  if (x.depth() < 1) throw ValidationError("apply_involution: empty chain");
  const int d = x.types.front().degree_bound;
  if (a < 0 || a > d) throw ValidationError("apply_involution: color " + std::to_string(a) + " outside {0.." + std::to_string(d) + "}");
  if (!has_edge_color(x.types.front(), a)) return x;
  if (x.depth() < 2) throw ValidationError("apply_involution: depth-1 chain with an a-edge has no computable image");
  Chain y;
  for (int r = 2; r <= x.depth(); ++r) {
    auto img = involution_step(x.at(r), a);
    if (!img) throw VerificationFailure("chain is incoherent: a-edge present at radius 1 but not at radius " + std::to_string(r));
    y.types.push_back(std::move(*img));
  }
  return y;
}

/// Per-type result of the invariance check.
struct InvarianceEntry {
  ColoredType type;                  // A_r
  std::int64_t tau = 0;              // tau(G, A_r)
  std::int64_t fiber_tau_sum = 0;    // sum over the fiber of tau(G, B_{r+1})
  std::vector<std::string> fiber;    // codes of B_{r+1} | A_r ~ a, from the graph
  Rational measure;                  // mu(M(A_r))
  Rational image_measure;            // mu(T_a(M(A_r))) from the trie fiber
  bool fibers_agree = true;
  bool pass = true;
};

struct InvarianceReport {
  int color = 0;
  int radius = 0;
  std::vector<InvarianceEntry> entries;
  bool pass = true;
};

/// Checks tau(G, A_r) = sum tau(G, B_{r+1}) and mu(T_a M(A_r)) = mu(M(A_r))
/// for every A_r in the trie. The fiber {B_{r+1} | A_r ~ a} is computed twice:
/// from the graph (vertex x joins when it has no a-edge and B_r(x) is A_r, or
/// its a-neighbor's r-ball is A_r) and from the trie's types alone.
inline InvarianceReport verify_invariance(const TypeTrie& trie, const Graph& g, const ColoringBundle& bundle, int a,
                                          int r) {
  if (r < 0) throw ValidationError("verify_invariance: negative radius");
  if (trie.depth < r + 1)
    throw ValidationError("verify_invariance: trie depth " + std::to_string(trie.depth) + " < r+1 = " +
                          std::to_string(r + 1));
  if (bundle.depth < r + 1)
    throw ValidationError("verify_invariance: bundle depth " + std::to_string(bundle.depth) + " < r+1");
  if (a < 0 || a > g.degree_bound()) throw ValidationError("verify_invariance: color outside {0..d}");
  const auto types = vertex_types(g, bundle, r + 1);
  const int n = g.vertex_count();

  std::map<std::string, std::int64_t> tau_r, tau_next;
  std::map<std::string, std::set<std::string>> graph_fiber;
  for (Vertex x = 0; x < n; ++x) {
    ++tau_r[types[r][x].code];
    ++tau_next[types[r + 1][x].code];
    Vertex y = bundle.neighbor_via(x, a);
    const std::string& target = y < 0 ? types[r][x].code : types[r][y].code;
    graph_fiber[target].insert(types[r + 1][x].code);
  }

  std::map<std::string, std::set<std::string>> trie_fiber;
  for (const auto& [code, node] : trie.levels[r + 1]) {
    auto img = involution_step(node.type, a);
    trie_fiber[img ? img->code : node.parent].insert(code);
  }

  std::set<std::string> level;
  for (const auto& [code, node] : trie.levels[r]) level.insert(code);
  for (const auto& [code, k] : tau_r) level.insert(code);

  InvarianceReport rep{a, r, {}, true};
  for (const auto& code : level) {
    InvarianceEntry e;
    e.type = ColoredType{code, r, g.degree_bound()};
    e.tau = tau_r.count(code) ? tau_r.at(code) : 0;
    const auto& gf = graph_fiber[code];
    e.fiber.assign(gf.begin(), gf.end());
    for (const auto& b : gf) e.fiber_tau_sum += tau_next.at(b);
    e.measure = trie.measure(r, code);
    e.image_measure = 0;
    const auto& tf = trie_fiber[code];
    for (const auto& b : tf) e.image_measure += trie.measure(r + 1, b);
    for (const auto& b : gf)
      if (!tf.count(b)) e.fibers_agree = false;
    for (const auto& b : tf)
      if (tau_next.count(b) && !gf.count(b)) e.fibers_agree = false;
    e.pass = e.tau == e.fiber_tau_sum && e.measure == e.image_measure && e.fibers_agree;
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

namespace detail {

inline BigInt uniform_below(const BigInt& bound, std::mt19937_64& rng) {
  const unsigned bits = boost::multiprecision::msb(bound) + 1;
  while (true) {
    BigInt x = 0;
    for (unsigned got = 0; got < bits; got += 64) x = (x << 64) | BigInt(rng());
    x &= (BigInt(1) << bits) - 1;
    if (x < bound) return x;
  }
}

}  // namespace detail

/// Root-to-leaf walk choosing each child with probability
/// mu(child) / mu(node); exact integer arithmetic on the measures.
inline Chain sample_chain(const TypeTrie& trie, std::mt19937_64& rng) {
  if (trie.levels.empty() || trie.levels[0].empty()) throw ValidationError("sample_chain: empty trie");
  Chain x;
  const TrieNode* node = &trie.levels[0].begin()->second;
  for (int l = 1; l <= trie.depth; ++l) {
    BigInt lcm = 1;
    for (const auto& ch : node->children)
      lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(trie.find(l, ch)->measure));
    std::vector<BigInt> weights;
    BigInt total = 0;
    for (const auto& ch : node->children) {
      const Rational& m = trie.find(l, ch)->measure;
      weights.push_back(boost::multiprecision::numerator(m) * (lcm / boost::multiprecision::denominator(m)));
      total += weights.back();
    }
    if (total == 0) throw ValidationError("sample_chain: node without positive-measure children");
    BigInt draw = detail::uniform_below(total, rng);
    std::size_t pick = 0;
    while (draw >= weights[pick]) draw -= weights[pick++];
    node = trie.find(l, node->children[pick]);
    x.types.push_back(node->type);
  }
  return x;
}

inline Chain sample_chain(const TypeTrie& trie, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_chain(trie, rng);
}

}  // namespace bslimit
