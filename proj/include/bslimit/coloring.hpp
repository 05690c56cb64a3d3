#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bslimit/ball.hpp"
#include "bslimit/canonical.hpp"
#include "bslimit/error.hpp"
#include "bslimit/graph.hpp"

namespace bslimit {

namespace detail {

// Misra-Gries state: at[v][c] is the neighbor joined to v by color c, or -1.
class MisraGries {
 public:
  explicit MisraGries(const Graph& g) : g_(g), colors_(g.degree_bound() + 1) {
    at_.assign(g.vertex_count(), std::vector<int>(colors_, -1));
  }

  std::vector<int> run() {
    for (auto [u, v] : g_.edges()) color_edge(u, v);
    std::vector<int> out(g_.edge_count(), -1);
    for (int v = 0; v < g_.vertex_count(); ++v)
      for (int c = 0; c < colors_; ++c)
        if (int w = at_[v][c]; w >= 0) out[g_.edge_id(v, w)] = c;
    return out;
  }

 private:
  int free_color(int v) const {
    for (int c = 0; c < colors_; ++c)
      if (at_[v][c] < 0) return c;
    throw VerificationFailure("no free color at vertex " + std::to_string(v));
  }

  int color_of(int u, int w) const {
    for (int c = 0; c < colors_; ++c)
      if (at_[u][c] == w) return c;
    return -1;
  }

  void set(int u, int w, int c) {
    at_[u][c] = w;
    at_[w][c] = u;
  }

  void clear(int u, int w) {
    int c = color_of(u, w);
    if (c >= 0) {
      at_[u][c] = -1;
      at_[w][c] = -1;
    }
  }

  bool is_fan(int u, const std::vector<int>& fan, std::size_t last) const {
    for (std::size_t j = 1; j <= last; ++j) {
      int c = color_of(u, fan[j]);
      if (c < 0 || at_[fan[j - 1]][c] >= 0) return false;
    }
    return true;
  }

  void color_edge(int u, int v) {
    std::vector<int> fan{v};
    for (bool grown = true; grown;) {
      grown = false;
      int last = fan.back();
      for (int c = 0; c < colors_; ++c) {
        int x = at_[u][c];
        if (x >= 0 && at_[last][c] < 0 && std::find(fan.begin(), fan.end(), x) == fan.end()) {
          fan.push_back(x);
          grown = true;
          break;
        }
      }
    }
    const int c = free_color(u);
    const int d = free_color(fan.back());
    if (c != d) {
      // Swap colors c and d along the alternating path leaving u by d.
      std::vector<std::tuple<int, int, int>> path;
      int cur = u, want = d;
      while (true) {
        int nxt = at_[cur][want];
        if (nxt < 0) break;
        path.emplace_back(cur, nxt, want);
        cur = nxt;
        want = want == d ? c : d;
      }
      for (auto [a, b, col] : path) {
        at_[a][col] = -1;
        at_[b][col] = -1;
      }
      for (auto [a, b, col] : path) set(a, b, col == d ? c : d);
    }
    std::size_t w = fan.size();
    for (std::size_t i = 0; i < fan.size(); ++i)
      if (at_[fan[i]][d] < 0 && is_fan(u, fan, i)) {
        w = i;
        break;
      }
    if (w == fan.size()) throw VerificationFailure("Misra-Gries: no fan vertex admits the free color");
    std::vector<int> shifted;
    for (std::size_t j = 0; j < w; ++j) shifted.push_back(color_of(u, fan[j + 1]));
    for (std::size_t j = 1; j <= w; ++j) clear(u, fan[j]);
    for (std::size_t j = 0; j < w; ++j) set(u, fan[j], shifted[j]);
    set(u, fan[w], d);
  }

  const Graph& g_;
  int colors_;
  std::vector<std::vector<int>> at_;
};

}  // namespace detail

/// Proper edge coloring with colors {0..d}, indexed like `g.edges()`.
/// Edges are processed in ascending (u, v) order, so the result is
/// deterministic.
inline std::vector<int> edge_color(const Graph& g) { return detail::MisraGries(g).run(); }

/// Greedy coloring of the i-th power of g: vertices at distance <= i get
/// different colors. Vertices are taken in ascending id order, or in a
/// seeded random order when `order_seed` is set.
inline std::vector<std::uint32_t> distance_color(const Graph& g, int i,
                                                 std::optional<std::uint64_t> order_seed = {}) {
  if (i < 1) throw ValidationError("distance_color: radius must be >= 1");
  const Graph power = power_graph(g, i);
  const int n = g.vertex_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (order_seed) {
    std::mt19937_64 rng(*order_seed + static_cast<std::uint64_t>(i));
    std::shuffle(order.begin(), order.end(), rng);
  }
  constexpr std::uint32_t kUncolored = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> color(n, kUncolored);
  std::vector<char> used;
  for (int v : order) {
    used.assign(power.degree(v) + 1, 0);
    for (Vertex w : power.neighbors(v))
      if (color[w] != kUncolored && color[w] < used.size()) used[color[w]] = 1;
    std::uint32_t c = 0;
    while (used[c]) ++c;
    color[v] = c;
  }
  return color;
}

/// A proper (d+1)-edge-coloring together with distance-i vertex colorings
/// for i = 1..depth.
struct ColoringBundle {
  int depth = 0;
  int degree_bound = 1;
  std::vector<int> edge_colors;                        // aligned with Graph::edges()
  std::vector<std::vector<std::uint32_t>> vertex_colors;  // [i-1][v] in Q_i
  std::vector<std::vector<int>> via;                   // [v][a] neighbor along color a, or -1

  int edge_palette_size() const { return degree_bound + 1; }
  std::uint64_t vertex_palette_size(int i) const { return palette_size(degree_bound, i); }

  /// The neighbor of v along its a-colored edge, or -1.
  Vertex neighbor_via(Vertex v, int a) const { return via[v][a]; }

  std::vector<std::uint32_t> tuple(Vertex v, int len) const {
    std::vector<std::uint32_t> t(len);
    for (int i = 0; i < len; ++i) t[i] = vertex_colors[i][v];
    return t;
  }

  friend bool operator==(const ColoringBundle&, const ColoringBundle&) = default;
};

/// Checks every bundle invariant against g. Distance constraints are checked
/// exhaustively with a truncated BFS from each vertex.
inline void validate_bundle(const Graph& g, const ColoringBundle& b) {
  const int n = g.vertex_count();
  if (b.degree_bound != g.degree_bound()) throw VerificationFailure("bundle degree bound differs from graph");
  if (static_cast<int>(b.edge_colors.size()) != g.edge_count())
    throw VerificationFailure("bundle edge colors do not cover the graph");
  for (int v = 0; v < n; ++v) {
    std::vector<char> seen(b.edge_palette_size(), 0);
    for (int e : g.incident_edges(v)) {
      int c = b.edge_colors[e];
      if (c < 0 || c >= b.edge_palette_size()) throw VerificationFailure("edge color outside {0..d}");
      if (seen[c]) throw VerificationFailure("edge coloring not proper at vertex " + std::to_string(v));
      seen[c] = 1;
    }
  }
  if (static_cast<int>(b.vertex_colors.size()) != b.depth) throw VerificationFailure("bundle depth mismatch");
  for (int i = 1; i <= b.depth; ++i) {
    const auto& col = b.vertex_colors[i - 1];
    if (static_cast<int>(col.size()) != n) throw VerificationFailure("vertex coloring size mismatch");
    for (int v = 0; v < n; ++v) {
      if (col[v] >= b.vertex_palette_size(i)) throw VerificationFailure("vertex color outside Q_" + std::to_string(i));
      for (Vertex w : ball_vertices(g, v, i))
        if (w != v && col[w] == col[v])
          throw VerificationFailure("vertices " + std::to_string(v) + " and " + std::to_string(w) +
                                    " within distance " + std::to_string(i) + " share a Q_" +
                                    std::to_string(i) + " color");
    }
  }
}

namespace detail {

inline void fill_via(const Graph& g, ColoringBundle& b) {
  b.via.assign(g.vertex_count(), std::vector<int>(b.edge_palette_size(), -1));
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edges()[e];
    b.via[u][b.edge_colors[e]] = v;
    b.via[v][b.edge_colors[e]] = u;
  }
}

}  // namespace detail

/// Assembles and validates the coloring bundle of depth `depth`.
inline ColoringBundle build_bundle(const Graph& g, int depth, std::optional<std::uint64_t> order_seed = {},
                                   bool validate = true) {
  if (depth < 1) throw ValidationError("build_bundle: depth must be >= 1");
  ColoringBundle b;
  b.depth = depth;
  b.degree_bound = g.degree_bound();
  b.edge_colors = edge_color(g);
  for (int i = 1; i <= depth; ++i) b.vertex_colors.push_back(distance_color(g, i, order_seed));
  detail::fill_via(g, b);
  if (validate) validate_bundle(g, b);
  return b;
}

/// Rebuilds the lookup tables of a bundle whose colors were supplied
/// externally (for example read back from JSON) and validates it.
inline ColoringBundle make_bundle(const Graph& g, std::vector<int> edge_colors,
                                  std::vector<std::vector<std::uint32_t>> vertex_colors) {
  ColoringBundle b;
  b.depth = static_cast<int>(vertex_colors.size());
  b.degree_bound = g.degree_bound();
  b.edge_colors = std::move(edge_colors);
  b.vertex_colors = std::move(vertex_colors);
  if (static_cast<int>(b.edge_colors.size()) != g.edge_count())
    throw ValidationError("edge color list does not match the edge count");
  for (int c : b.edge_colors)
    if (c < 0 || c > g.degree_bound()) throw ValidationError("edge color outside {0..d}");
  detail::fill_via(g, b);
  try {
    validate_bundle(g, b);
  } catch (const VerificationFailure& e) {
    throw ValidationError(e.what());
  }
  return b;
}

/// The colored ball of radius r around v, with tuples (Q_1, ..., Q_r).
inline ColoredBall colored_ball(const Graph& g, const ColoringBundle& b, Vertex v, int r) {
  if (b.depth < r) throw ValidationError("coloring bundle depth " + std::to_string(b.depth) + " < radius " +
                                         std::to_string(r));
  ColoredBall cb;
  cb.ball = extract_ball(g, v, r);
  const int k = cb.ball.vertex_count();
  cb.colors.tuples.resize(k);
  cb.colors.edge.resize(k);
  for (int i = 0; i < k; ++i) {
    Vertex s = cb.ball.source[i];
    cb.colors.tuples[i] = b.tuple(s, r);
    for (int w : cb.ball.adjacency[i]) cb.colors.edge[i].push_back(b.edge_colors[g.edge_id(s, cb.ball.source[w])]);
  }
  return cb;
}

inline ColoredType colored_type(const Graph& g, const ColoringBundle& b, Vertex v, int r) {
  return canonical_code(colored_ball(g, b, v, r));
}

}  // namespace bslimit
