#pragma once

// Slow, obviously-correct reference implementations used by the tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bslimit/ball.hpp"
#include "bslimit/generators.hpp"
#include "bslimit/graph.hpp"

namespace oracle {

using bslimit::Graph;
using bslimit::RootedBall;

inline constexpr int kInf = 1 << 28;

/// Floyd–Warshall distance table.
inline std::vector<std::vector<int>> all_pairs(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (d[i][k] < kInf)
        for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Vertex set of the r-ball by scanning a distance row.
inline std::vector<int> ball_set(const std::vector<std::vector<int>>& dist, int v, int r) {
  std::vector<int> out;
  for (int u = 0; u < static_cast<int>(dist.size()); ++u)
    if (dist[v][u] <= r) out.push_back(u);
  return out;
}

inline bool adjacent(const RootedBall& b, int u, int v) {
  return std::binary_search(b.adjacency[u].begin(), b.adjacency[u].end(), v);
}

/// Root-fixing permutation search. Optional vertex labels must match too.
inline bool rooted_isomorphic(const RootedBall& a, const RootedBall& b,
                              const std::vector<std::vector<std::uint32_t>>* la = nullptr,
                              const std::vector<std::vector<std::uint32_t>>* lb = nullptr) {
  const int n = a.vertex_count();
  if (n != b.vertex_count() || a.radius != b.radius || a.edge_count() != b.edge_count()) return false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int u = 0; u < n && ok; ++u) {
      if (la && (*la)[u] != (*lb)[perm[u]]) ok = false;
      for (int v = u + 1; v < n && ok; ++v)
        if (adjacent(a, u, v) != adjacent(b, perm[u], perm[v])) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return false;
}

/// Brute-force canonical form: the least adjacency bitmask over all
/// root-fixing relabelings (n <= 8).
inline std::pair<int, std::uint64_t> brute_canon(const RootedBall& b) {
  const int n = b.vertex_count();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t mask = 0;
    int bit = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v, ++bit)
        if (adjacent(b, perm[u], perm[v])) mask |= std::uint64_t{1} << bit;
    best = std::min(best, mask);
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return {n * 16 + b.radius, best};
}

inline Graph relabel(const Graph& g, const std::vector<int>& perm) {
  std::vector<bslimit::Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return Graph(g.vertex_count(), edges, g.degree_bound());
}

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Every rooted ball with at most `max_n` vertices and maximum degree <= d,
/// one labelled graph per BFS labelling that extract_ball would produce.
/// The radius is the root's eccentricity.
inline std::vector<RootedBall> ball_corpus(int max_n, int d) {
  std::vector<RootedBall> out;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::vector<int> deg(n, 0);
      std::vector<bslimit::Edge> edges;
      bool ok = true;
      for (std::size_t k = 0; k < pairs.size() && ok; ++k)
        if (mask >> k & 1) {
          auto [u, v] = pairs[k];
          if (++deg[u] > d || ++deg[v] > d) ok = false;
          edges.emplace_back(u, v);
        }
      if (!ok) continue;
      // Quick necessary condition for BFS order: every non-root vertex has an
      // earlier neighbor.
      for (int v = 1; v < n && ok; ++v) {
        bool earlier = false;
        for (auto [a, b] : edges)
          if (b == v && a < v) earlier = true;
        ok = earlier;
      }
      if (!ok) continue;
      Graph g(n, edges, d);
      auto dist = bslimit::bfs_distances(g, 0);
      int ecc = *std::max_element(dist.begin(), dist.end());
      RootedBall b = bslimit::extract_ball(g, 0, ecc);
      bool identity = true;
      for (int v = 0; v < n; ++v) identity = identity && b.source[v] == v;
      if (identity) out.push_back(std::move(b));
    }
  }
  return out;
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// The fixed test families: cycles, paths, the 8x8 torus, seeded random
/// cubic graphs.
inline std::vector<NamedGraph> test_graphs(bool include_random = true) {
  std::vector<NamedGraph> out;
  for (int n = 8; n <= 64; n += 8) out.push_back({"C" + std::to_string(n), bslimit::gen::cycle(n)});
  for (int n = 10; n <= 40; ++n) out.push_back({"P" + std::to_string(n), bslimit::gen::path(n)});
  out.push_back({"torus8x8", bslimit::gen::torus(8, 8)});
  if (include_random)
    for (std::uint64_t s = 1; s <= 3; ++s)
      out.push_back({"cubic500-s" + std::to_string(s), bslimit::gen::random_regular(500, 3, s)});
  return out;
}

}  // namespace oracle
