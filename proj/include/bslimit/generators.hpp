#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "bslimit/error.hpp"
#include "bslimit/graph.hpp"

namespace bslimit::gen {

inline Graph cycle(int n) {
  if (n < 3) throw ValidationError("cycle needs n >= 3");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(e), 2);
}

inline Graph path(int n) {
  if (n < 1) throw ValidationError("path needs n >= 1");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e), n >= 3 ? std::optional<int>(2) : std::nullopt);
}

inline Graph star(int leaves) {
  std::vector<Edge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, std::move(e));
}

inline Graph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

/// The w x h discrete torus (4-regular for w, h >= 3).
inline Graph torus(int w, int h) {
  if (w < 3 || h < 3) throw ValidationError("torus needs both sides >= 3");
  std::vector<Edge> e;
  auto id = [w](int x, int y) { return y * w + x; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      e.emplace_back(id(x, y), id((x + 1) % w, y));
      e.emplace_back(id(x, y), id(x, (y + 1) % h));
    }
  return Graph(w * h, std::move(e), 4);
}

/// Uniform-ish random d-regular simple connected graph from the
/// configuration model, resampling until the pairing is simple and connected.
inline Graph random_regular(int n, int d, std::uint64_t seed) {
  if (n <= d || (static_cast<long long>(n) * d) % 2 != 0)
    throw ValidationError("random_regular: need n > d and n*d even");
  std::mt19937_64 rng(seed);
  std::vector<int> stubs;
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<Edge> seen;
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      int u = std::min(stubs[i], stubs[i + 1]);
      int v = std::max(stubs[i], stubs[i + 1]);
      simple = u != v && seen.emplace(u, v).second;
    }
    if (!simple) continue;
    Graph g(n, std::vector<Edge>(seen.begin(), seen.end()), d);
    if (g.is_connected()) return g;
  }
  throw ValidationError("random_regular: no simple connected pairing found");
}

}  // namespace bslimit::gen
