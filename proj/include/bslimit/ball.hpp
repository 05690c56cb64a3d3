#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <ranges>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bslimit/error.hpp"
#include "bslimit/graph.hpp"

namespace bslimit {

template <class G>
concept AdjacencyGraph = requires(const G& g, Vertex v) {
  { g.vertex_count() } -> std::convertible_to<int>;
  { g.neighbors(v) } -> std::ranges::forward_range;
};

/// A rooted r-ball. Local ids are BFS discovery order from the root (id 0),
/// so distances are non-decreasing in the id and the ball of any smaller
/// radius is an id prefix.
struct RootedBall {
  int radius = 0;
  int degree_bound = 1;
  std::vector<int> dist;                  // distance from the root
  std::vector<std::vector<int>> adjacency;  // sorted local ids
  std::vector<Vertex> source;             // id in the graph the ball came from

  static constexpr int root() { return 0; }
  int vertex_count() const { return static_cast<int>(dist.size()); }
  const std::vector<int>& neighbors(int v) const { return adjacency[v]; }

  int edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adjacency) s += a.size();
    return static_cast<int>(s / 2);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int u = 0; u < vertex_count(); ++u)
      for (int w : adjacency[u])
        if (u < w) out.emplace_back(u, w);
    return out;
  }

  friend bool operator==(const RootedBall&, const RootedBall&) = default;
};

/// Edge and vertex colors carried by a ball. `edge[v][k]` colors the edge
/// to `adjacency[v][k]`; `tuples[v]` holds the components (Q_1, ..., Q_t).
struct BallColoring {
  std::vector<std::vector<std::uint32_t>> tuples;
  std::vector<std::vector<int>> edge;

  friend bool operator==(const BallColoring&, const BallColoring&) = default;
};

struct ColoredBall {
  RootedBall ball;
  BallColoring colors;

  /// Local id reached from `v` along its edge of color `a`, or -1.
  int neighbor_via(int v, int a) const {
    const auto& col = colors.edge[v];
    for (std::size_t k = 0; k < col.size(); ++k)
      if (col[k] == a) return ball.adjacency[v][k];
    return -1;
  }

  friend bool operator==(const ColoredBall&, const ColoredBall&) = default;
};

/// Induced subgraph on {u : d(v, u) <= r}, rooted at v. Neighbors are
/// visited in ascending id order, so the local labelling is deterministic.
template <AdjacencyGraph G>
RootedBall extract_ball(const G& g, Vertex v, int r, int degree_bound) {
  if (v < 0 || v >= g.vertex_count()) throw ValidationError("extract_ball: vertex out of range");
  if (r < 0) throw ValidationError("extract_ball: negative radius");
  RootedBall ball;
  ball.radius = r;
  ball.degree_bound = degree_bound;
  std::unordered_map<Vertex, int> local;
  ball.source.push_back(v);
  ball.dist.push_back(0);
  local.emplace(v, 0);
  for (std::size_t head = 0; head < ball.source.size(); ++head) {
    if (ball.dist[head] == r) continue;
    for (Vertex w : g.neighbors(ball.source[head]))
      if (local.emplace(w, static_cast<int>(ball.source.size())).second) {
        ball.source.push_back(w);
        ball.dist.push_back(ball.dist[head] + 1);
      }
  }
  ball.adjacency.resize(ball.source.size());
  for (std::size_t i = 0; i < ball.source.size(); ++i) {
    for (Vertex w : g.neighbors(ball.source[i]))
      if (auto it = local.find(w); it != local.end()) ball.adjacency[i].push_back(it->second);
    std::sort(ball.adjacency[i].begin(), ball.adjacency[i].end());
  }
  return ball;
}

inline RootedBall extract_ball(const Graph& g, Vertex v, int r) {
  return extract_ball(g, v, r, g.degree_bound());
}

/// Ball of radius `r` around `center` inside `cb`, with every vertex tuple
/// cut to its first `tuple_len` components. `source` of the result refers to
/// local ids of `cb`.
inline ColoredBall colored_sub_ball(const ColoredBall& cb, int center, int r, int tuple_len) {
  ColoredBall out;
  out.ball = extract_ball(cb.ball, center, r, cb.ball.degree_bound);
  const int k = out.ball.vertex_count();
  out.colors.tuples.resize(k);
  out.colors.edge.resize(k);
  for (int i = 0; i < k; ++i) {
    int src = out.ball.source[i];
    const auto& t = cb.colors.tuples[src];
    if (static_cast<int>(t.size()) < tuple_len)
      throw ValidationError("colored_sub_ball: tuple shorter than requested length");
    out.colors.tuples[i].assign(t.begin(), t.begin() + tuple_len);
    for (int w : out.ball.adjacency[i]) {
      int ws = out.ball.source[w];
      const auto& nb = cb.ball.adjacency[src];
      auto pos = std::lower_bound(nb.begin(), nb.end(), ws) - nb.begin();
      out.colors.edge[i].push_back(cb.colors.edge[src][pos]);
    }
  }
  return out;
}

/// Forgets the coloring.
inline RootedBall strip_colors(const ColoredBall& cb) { return cb.ball; }

}  // namespace bslimit
