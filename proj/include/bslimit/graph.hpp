#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bslimit/error.hpp"

namespace bslimit {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph with a declared vertex degree bound.
///
/// Adjacency is stored in CSR form with every neighbor list sorted in
/// ascending order. Edges are kept as a sorted list of (u, v) pairs with
/// u < v; `edge_id` maps an adjacency slot back to that list.
class Graph {
 public:
  Graph() = default;

  /// Builds and validates a graph. Throws GraphFormatError on self-loops,
  /// duplicate edges or out-of-range ids and DegreeBoundError when a vertex
  /// exceeds `degree_bound`. When no bound is given the maximum observed
  /// degree is used (at least 1).
  Graph(int n, std::vector<Edge> edges, std::optional<int> degree_bound = {}) {
    if (n < 0) throw GraphFormatError("negative vertex count");
    n_ = n;
    for (auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n)
        throw GraphFormatError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                               ") references a vertex outside 0.." + std::to_string(n - 1));
      if (u == v) throw GraphFormatError("self-loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
      throw GraphFormatError("duplicate edge (" + std::to_string(dup->first) + "," +
                             std::to_string(dup->second) + ")");
    edges_ = std::move(edges);

    std::vector<int> deg(n, 0);
    for (auto [u, v] : edges_) {
      ++deg[u];
      ++deg[v];
    }
    int max_deg = n == 0 ? 0 : *std::max_element(deg.begin(), deg.end());
    if (degree_bound) {
      if (*degree_bound < 1) throw DegreeBoundError("degree bound must be positive");
      for (int v = 0; v < n; ++v)
        if (deg[v] > *degree_bound)
          throw DegreeBoundError("vertex " + std::to_string(v) + " has degree " +
                                 std::to_string(deg[v]) + " > declared bound " +
                                 std::to_string(*degree_bound));
      d_ = *degree_bound;
    } else {
      d_ = std::max(1, max_deg);
    }

    offsets_.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    targets_.resize(offsets_[n]);
    slot_edge_.resize(offsets_[n]);
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted, so both endpoints receive neighbors in ascending order.
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      auto [u, v] = edges_[e];
      targets_[fill[u]] = v;
      slot_edge_[fill[u]++] = e;
    }
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      auto [u, v] = edges_[e];
      targets_[fill[v]] = u;
      slot_edge_[fill[v]++] = e;
    }
    for (int v = 0; v < n; ++v) {
      // The second pass appended smaller neighbors after larger ones; restore order.
      std::vector<std::pair<int, int>> tmp;
      for (int s = offsets_[v]; s < offsets_[v + 1]; ++s) tmp.emplace_back(targets_[s], slot_edge_[s]);
      std::sort(tmp.begin(), tmp.end());
      for (int s = offsets_[v], k = 0; s < offsets_[v + 1]; ++s, ++k) {
        targets_[s] = tmp[k].first;
        slot_edge_[s] = tmp[k].second;
      }
    }
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int degree_bound() const { return d_; }
  int degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  int max_degree() const {
    int m = 0;
    for (int v = 0; v < n_; ++v) m = std::max(m, degree(v));
    return m;
  }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }

  /// Edge ids of the incident edges, aligned with `neighbors(v)`.
  std::span<const int> incident_edges(Vertex v) const {
    return {slot_edge_.data() + offsets_[v], slot_edge_.data() + offsets_[v + 1]};
  }

  const std::vector<Edge>& edges() const { return edges_; }

  /// Id of edge {u, v} in `edges()`, or -1 when absent.
  int edge_id(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return -1;
    return slot_edge_[offsets_[u] + static_cast<int>(it - nb.begin())];
  }

  bool has_edge(Vertex u, Vertex v) const { return edge_id(u, v) >= 0; }

  bool is_connected() const {
    if (n_ <= 1) return true;
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n_;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  int d_ = 1;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<Vertex> targets_;
  std::vector<int> slot_edge_;
};

struct LoadOptions {
  std::optional<int> degree_bound;  // overrides the header value when set
  bool allow_disconnected = false;
};

/// Parses the edge-list format: a header `<n> <m> [d]` followed by m lines
/// `<u> <v>`. Everything after `#` on a line is ignored.
inline Graph parse_edge_list(std::istream& in, const LoadOptions& opts = {}) {
  std::vector<std::vector<long long>> rows;
  std::string line;
  int lineno = 0;
  std::vector<int> row_line;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<long long> fields;
    std::string tok;
    while (ls >> tok) {
      std::size_t pos = 0;
      long long value = 0;
      try {
        value = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size())
        throw GraphFormatError("line " + std::to_string(lineno) + ": '" + tok + "' is not an integer");
      fields.push_back(value);
    }
    if (fields.empty()) continue;
    rows.push_back(std::move(fields));
    row_line.push_back(lineno);
  }
  if (rows.empty()) throw GraphFormatError("missing header line '<n> <m> [d]'");
  const auto& header = rows.front();
  if (header.size() < 2 || header.size() > 3)
    throw GraphFormatError("header must be '<n> <m> [d]'");
  if (header[0] < 0 || header[1] < 0) throw GraphFormatError("negative n or m in header");
  const long long n = header[0];
  const long long m = header[1];
  if (n > 100'000'000) throw GraphFormatError("vertex count too large");
  if (static_cast<long long>(rows.size()) - 1 != m)
    throw GraphFormatError("header declares " + std::to_string(m) + " edges but " +
                           std::to_string(rows.size() - 1) + " edge lines follow");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2)
      throw GraphFormatError("line " + std::to_string(row_line[i]) + ": expected '<u> <v>'");
    if (rows[i][0] < 0 || rows[i][1] < 0 || rows[i][0] >= n || rows[i][1] >= n)
      throw GraphFormatError("line " + std::to_string(row_line[i]) + ": vertex id out of range");
    edges.emplace_back(static_cast<int>(rows[i][0]), static_cast<int>(rows[i][1]));
  }
  std::optional<int> d = opts.degree_bound;
  if (!d && header.size() == 3) {
    if (header[2] < 1) throw DegreeBoundError("declared degree bound must be positive");
    d = static_cast<int>(header[2]);
  }
  Graph g(static_cast<int>(n), std::move(edges), d);
  if (!opts.allow_disconnected && !g.is_connected())
    throw GraphFormatError("graph is disconnected (use allow_disconnected to admit it)");
  return g;
}

inline Graph load_graph(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError("cannot open '" + path + "'");
  try {
    return parse_edge_list(in, opts);
  } catch (const GraphFormatError& e) {
    throw GraphFormatError(path + ": " + e.what());
  } catch (const DegreeBoundError& e) {
    throw DegreeBoundError(path + ": " + e.what());
  }
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << ' ' << g.degree_bound() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

/// Distances from `source`, truncated at `limit` (vertices further away get -1).
inline std::vector<int> bfs_distances(const Graph& g, Vertex source, int limit = -1) {
  std::vector<int> dist(g.vertex_count(), -1);
  std::queue<Vertex> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop();
    if (limit >= 0 && dist[v] == limit) continue;
    for (Vertex w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  return dist;
}

/// Vertices within distance `limit` of `source`, in BFS order.
inline std::vector<Vertex> ball_vertices(const Graph& g, Vertex source, int limit) {
  std::vector<Vertex> out{source};
  std::vector<int> depth{0};
  std::unordered_set<Vertex> seen{source};
  for (std::size_t head = 0; head < out.size(); ++head) {
    if (depth[head] == limit) continue;
    for (Vertex w : g.neighbors(out[head]))
      if (seen.insert(w).second) {
        out.push_back(w);
        depth.push_back(depth[head] + 1);
      }
  }
  return out;
}

/// The i-th power: u ~ v iff 1 <= d_G(u, v) <= i. The degree bound of the
/// result is its maximum observed degree.
inline Graph power_graph(const Graph& g, int exponent) {
  if (exponent < 1) throw ValidationError("power_graph exponent must be >= 1");
  if (exponent == 1) return Graph(g.vertex_count(), g.edges());
  const int n = g.vertex_count();
  std::vector<Edge> edges;
  std::vector<int> dist(n, -1);
  std::vector<Vertex> touched;
  for (Vertex s = 0; s < n; ++s) {
    touched.clear();
    std::vector<Vertex> frontier{s};
    dist[s] = 0;
    touched.push_back(s);
    for (int level = 1; level <= exponent && !frontier.empty(); ++level) {
      std::vector<Vertex> next;
      for (Vertex v : frontier)
        for (Vertex w : g.neighbors(v))
          if (dist[w] < 0) {
            dist[w] = level;
            touched.push_back(w);
            next.push_back(w);
            if (w > s) edges.emplace_back(s, w);
          }
      frontier = std::move(next);
    }
    for (Vertex v : touched) dist[v] = -1;
  }
  return Graph(n, std::move(edges));
}

}  // namespace bslimit
