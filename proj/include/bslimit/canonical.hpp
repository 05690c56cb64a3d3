#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bslimit/ball.hpp"
#include "bslimit/error.hpp"

namespace bslimit {

inline constexpr std::uint8_t kCodeFormatVersion = 1;

/// Rooted isomorphism class of an uncolored r-ball (an element of U^{r,d}).
struct BallClass {
  std::string code;  // canonical byte string
  int radius = 0;
  int degree_bound = 1;
  auto operator<=>(const BallClass&) const = default;
};

/// Colored isomorphism class of an r-ball carrying an edge coloring by
/// {0..d} and vertex tuples in Q_1 x ... x Q_r (an element of V^{r,d}).
struct ColoredType {
  std::string code;
  int radius = 0;
  int degree_bound = 1;
  auto operator<=>(const ColoredType&) const = default;
};

/// |Q_i| = (d+1)^i + 1, saturating at the largest uint64.
inline std::uint64_t palette_size(int degree_bound, int i) {
  std::uint64_t p = 1;
  const std::uint64_t base = static_cast<std::uint64_t>(degree_bound) + 1;
  for (int k = 0; k < i; ++k) {
    if (p > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    p *= base;
  }
  return p == std::numeric_limits<std::uint64_t>::max() ? p : p + 1;
}

inline std::string to_hex(std::string_view bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

inline std::string from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ValidationError(std::string("invalid hex digit '") + c + "'");
  };
  if (hex.size() % 2) throw ValidationError("hex string of odd length");
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2)
    out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  return out;
}

namespace detail {

using Words = std::vector<std::uint32_t>;

// Layout: version byte, then LEB128 words
//   colored, radius, n, #layers, layer sizes..., m, edge pairs...,
//   [edge colors..., tuple length, tuples...]
inline std::string encode_words(const Words& w) {
  std::string out(1, static_cast<char>(kCodeFormatVersion));
  for (std::uint32_t x : w) {
    do {
      std::uint8_t byte = x & 0x7f;
      x >>= 7;
      if (x) byte |= 0x80;
      out.push_back(static_cast<char>(byte));
    } while (x);
  }
  return out;
}

inline Words decode_words(std::string_view code) {
  if (code.empty() || static_cast<std::uint8_t>(code[0]) != kCodeFormatVersion)
    throw ValidationError("canonical code has an unsupported format version");
  Words w;
  std::uint32_t cur = 0;
  int shift = 0;
  for (std::size_t i = 1; i < code.size(); ++i) {
    auto byte = static_cast<std::uint8_t>(code[i]);
    if (shift > 28) throw ValidationError("malformed canonical code");
    cur |= static_cast<std::uint32_t>(byte & 0x7f) << shift;
    if (byte & 0x80) {
      shift += 7;
    } else {
      w.push_back(cur);
      cur = 0;
      shift = 0;
    }
  }
  if (shift) throw ValidationError("truncated canonical code");
  return w;
}

// Individualization-refinement search for the lexicographically least code
// over all vertex orders compatible with an equitable partition refinement.
// Refinement only prunes; leaves are compared on the full serialization.
class Canonicalizer {
 public:
  Canonicalizer(const RootedBall& ball, const BallColoring* colors)
      : ball_(ball), colors_(colors), n_(ball.vertex_count()) {
    ecol_.resize(n_);
    for (int v = 0; v < n_; ++v) ecol_[v] = colors ? colors->edge[v] : std::vector<int>(ball.adjacency[v].size(), 0);
  }

  Words run() {
    std::vector<int> cell = initial_partition();
    search(cell, 0);
    return best_.code;
  }

 private:
  struct Leaf {
    Words code;
    std::vector<int> pos;
    std::vector<int> seq;
  };

  std::vector<int> initial_partition() const {
    std::vector<std::vector<std::uint32_t>> key(n_);
    for (int v = 0; v < n_; ++v) {
      key[v].push_back(static_cast<std::uint32_t>(ball_.dist[v]));
      key[v].push_back(static_cast<std::uint32_t>(ball_.adjacency[v].size()));
      if (colors_) key[v].insert(key[v].end(), colors_->tuples[v].begin(), colors_->tuples[v].end());
    }
    return rank(key);
  }

  // Cell id of every vertex is the first position of its cell in sorted order.
  std::vector<int> rank(const std::vector<std::vector<std::uint32_t>>& key) const {
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
    std::vector<int> cell(n_);
    for (int i = 0; i < n_; ++i)
      cell[order[i]] = (i > 0 && key[order[i]] == key[order[i - 1]]) ? cell[order[i - 1]] : i;
    return cell;
  }

  static int cell_count(const std::vector<int>& cell) {
    std::vector<char> seen(cell.size(), 0);
    int c = 0;
    for (int x : cell)
      if (!seen[x]) {
        seen[x] = 1;
        ++c;
      }
    return c;
  }

  // Signatures live in one flat buffer of fixed width; entries are stored
  // +1 and padded with 0 so that shorter signatures sort first.
  void refine(std::vector<int>& cell) const {
    int max_deg = 0;
    for (const auto& a : ball_.adjacency) max_deg = std::max(max_deg, static_cast<int>(a.size()));
    const std::size_t width = 1 + 2 * static_cast<std::size_t>(max_deg);
    flat_.assign(width * n_, 0);
    order_.resize(n_);
    int cells = cell_count(cell);
    std::vector<std::pair<int, int>> nb;
    while (cells < n_) {
      for (int v = 0; v < n_; ++v) {
        nb.clear();
        for (std::size_t k = 0; k < ball_.adjacency[v].size(); ++k)
          nb.emplace_back(ecol_[v][k], cell[ball_.adjacency[v][k]]);
        std::sort(nb.begin(), nb.end());
        std::uint32_t* s = &flat_[width * v];
        std::fill(s, s + width, 0u);
        *s++ = static_cast<std::uint32_t>(cell[v]) + 1;
        for (auto [c, x] : nb) {
          *s++ = static_cast<std::uint32_t>(c) + 1;
          *s++ = static_cast<std::uint32_t>(x) + 1;
        }
      }
      auto sig = [&](int v) { return flat_.begin() + static_cast<std::ptrdiff_t>(width * v); };
      std::iota(order_.begin(), order_.end(), 0);
      std::sort(order_.begin(), order_.end(), [&](int a, int b) {
        return std::lexicographical_compare(sig(a), sig(a) + width, sig(b), sig(b) + width);
      });
      int next = 0;
      for (int i = 0; i < n_; ++i) {
        bool same = i > 0 && std::equal(sig(order_[i]), sig(order_[i]) + width, sig(order_[i - 1]));
        cell[order_[i]] = same ? cell[order_[i - 1]] : i;
        next += !same;
      }
      if (next == cells) break;
      cells = next;
    }
  }

  Words leaf_code(const std::vector<int>& pos) const {
    std::vector<int> at(n_);
    for (int v = 0; v < n_; ++v) at[pos[v]] = v;
    Words w;
    w.push_back(colors_ ? 1u : 0u);
    w.push_back(static_cast<std::uint32_t>(ball_.radius));
    w.push_back(static_cast<std::uint32_t>(n_));
    int layers = 0;
    for (int d : ball_.dist) layers = std::max(layers, d + 1);
    w.push_back(static_cast<std::uint32_t>(layers));
    std::vector<std::uint32_t> sizes(layers, 0);
    for (int d : ball_.dist) ++sizes[d];
    w.insert(w.end(), sizes.begin(), sizes.end());
    struct E {
      int a, b, color;
      bool operator<(const E& o) const { return a != o.a ? a < o.a : b < o.b; }
    };
    std::vector<E> es;
    for (int v = 0; v < n_; ++v)
      for (std::size_t k = 0; k < ball_.adjacency[v].size(); ++k) {
        int u = ball_.adjacency[v][k];
        if (pos[v] < pos[u]) es.push_back({pos[v], pos[u], ecol_[v][k]});
      }
    std::sort(es.begin(), es.end());
    w.push_back(static_cast<std::uint32_t>(es.size()));
    for (const auto& e : es) {
      w.push_back(static_cast<std::uint32_t>(e.a));
      w.push_back(static_cast<std::uint32_t>(e.b));
    }
    if (colors_) {
      for (const auto& e : es) w.push_back(static_cast<std::uint32_t>(e.color));
      w.push_back(static_cast<std::uint32_t>(ball_.radius));
      for (int p = 0; p < n_; ++p) {
        const auto& t = colors_->tuples[at[p]];
        w.insert(w.end(), t.begin(), t.end());
      }
    }
    return w;
  }

  static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return static_cast<int>(i);
  }

  // Automorphism sending the labelling of `from` onto that of `to`.
  std::vector<int> automorphism(const std::vector<int>& from, const std::vector<int>& to) const {
    std::vector<int> at_to(n_), gamma(n_);
    for (int v = 0; v < n_; ++v) at_to[to[v]] = v;
    for (int v = 0; v < n_; ++v) gamma[v] = at_to[from[v]];
    return gamma;
  }

  // Returns -1, or the search depth to resume at.
  int process_leaf(const std::vector<int>& pos) {
    Words code = leaf_code(pos);
    if (!have_leaf_) {
      first_ = {code, pos, seq_};
      best_ = first_;
      have_leaf_ = true;
      return -1;
    }
    if (code == first_.code) {
      generators_.push_back(automorphism(first_.pos, pos));
      return common_prefix(seq_, first_.seq);
    }
    if (code == best_.code) {
      generators_.push_back(automorphism(best_.pos, pos));
      return common_prefix(seq_, best_.seq);
    }
    if (code < best_.code) best_ = {std::move(code), pos, seq_};
    return -1;
  }

  // u and v are twins when swapping them is an automorphism: same neighbors
  // apart from each other, reached by the same edge colors.
  bool twins(int u, int v) const {
    auto others = [&](int a, int skip) {
      std::vector<std::pair<int, int>> out;
      for (std::size_t k = 0; k < ball_.adjacency[a].size(); ++k)
        if (ball_.adjacency[a][k] != skip) out.emplace_back(ball_.adjacency[a][k], ecol_[a][k]);
      return out;
    };
    return others(u, v) == others(v, u);
  }

  bool only_twin_cells(const std::vector<int>& cell, const std::vector<int>& size) const {
    std::vector<std::vector<int>> members(n_);
    for (int v = 0; v < n_; ++v)
      if (size[cell[v]] > 1) members[cell[v]].push_back(v);
    for (const auto& m : members)
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
          if (!twins(m[i], m[j])) return false;
    return true;
  }

  // Orbit partition under the generators fixing the current individualized
  // prefix pointwise; entry v is the least vertex of v's orbit.
  std::vector<int> orbits() const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& g : generators_) {
      bool fixes = std::all_of(seq_.begin(), seq_.end(), [&](int s) { return g[s] == s; });
      if (!fixes) continue;
      for (int x = 0; x < n_; ++x) {
        int a = find(x), b = find(g[x]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (int x = 0; x < n_; ++x) parent[x] = find(x);
    return parent;
  }

  int search(std::vector<int> cell, int depth) {
    refine(cell);
    std::vector<int> size(n_, 0);
    for (int c : cell) ++size[c];
    int target = -1;
    for (int c = 0; c < n_; ++c)
      if (size[c] >= 2) {
        target = c;
        break;
      }
    if (target < 0) return process_leaf(cell);
    // Every leaf below a partition whose open cells hold mutual twins has the
    // same code, so one tie-break stands for the whole subtree.
    if (only_twin_cells(cell, size)) {
      std::vector<int> pos = cell;
      std::vector<int> used(n_, 0);
      for (int v = 0; v < n_; ++v) pos[v] = cell[v] + used[cell[v]]++;
      return process_leaf(pos);
    }

    std::vector<int> explored;
    std::vector<int> orbit;
    std::size_t known = ~std::size_t{0};
    for (int w = 0; w < n_; ++w) {
      if (cell[w] != target) continue;
      if (known != generators_.size()) {
        orbit = orbits();
        known = generators_.size();
      }
      if (std::any_of(explored.begin(), explored.end(), [&](int e) { return orbit[e] == orbit[w]; })) continue;
      std::vector<int> child = cell;
      for (int v = 0; v < n_; ++v)
        if (v != w && child[v] == target) child[v] = target + 1;
      seq_.push_back(w);
      int jump = search(std::move(child), depth + 1);
      seq_.pop_back();
      explored.push_back(w);
      if (jump >= 0 && jump < depth) return jump;
    }
    return -1;
  }

  const RootedBall& ball_;
  const BallColoring* colors_;
  int n_;
  std::vector<std::vector<int>> ecol_;
  std::vector<std::vector<int>> generators_;
  std::vector<int> seq_;
  Leaf first_, best_;
  bool have_leaf_ = false;
  mutable std::vector<std::uint32_t> flat_;
  mutable std::vector<int> order_;
};

inline void validate_structure(const RootedBall& ball) {
  const int n = ball.vertex_count();
  if (n == 0 || ball.dist[0] != 0) throw ValidationError("ball must contain its root at local id 0");
  if (static_cast<int>(ball.adjacency.size()) != n) throw ValidationError("ball adjacency size mismatch");
  for (int v = 0; v < n; ++v)
    if (ball.dist[v] > ball.radius || (v > 0 && ball.dist[v] < ball.dist[v - 1]))
      throw ValidationError("ball distances must be non-decreasing and within the radius");
}

inline void validate_coloring(const RootedBall& ball, const BallColoring& colors) {
  const int n = ball.vertex_count();
  if (static_cast<int>(colors.tuples.size()) != n || static_cast<int>(colors.edge.size()) != n)
    throw ValidationError("coloring does not cover every ball vertex");
  for (int v = 0; v < n; ++v) {
    const auto& t = colors.tuples[v];
    if (static_cast<int>(t.size()) != ball.radius)
      throw ValidationError("vertex color tuple length " + std::to_string(t.size()) + " != radius " +
                            std::to_string(ball.radius));
    for (int i = 0; i < ball.radius; ++i)
      if (t[i] >= palette_size(ball.degree_bound, i + 1))
        throw ValidationError("vertex color " + std::to_string(t[i]) + " outside palette Q_" + std::to_string(i + 1));
    const auto& ec = colors.edge[v];
    if (ec.size() != ball.adjacency[v].size()) throw ValidationError("edge colors misaligned with adjacency");
    for (std::size_t k = 0; k < ec.size(); ++k) {
      if (ec[k] < 0 || ec[k] > ball.degree_bound)
        throw ValidationError("edge color " + std::to_string(ec[k]) + " outside palette {0.." +
                              std::to_string(ball.degree_bound) + "}");
      for (std::size_t j = 0; j < k; ++j)
        if (ec[j] == ec[k]) throw ValidationError("edge coloring is not proper on the ball");
      int u = ball.adjacency[v][k];
      const auto& nu = ball.adjacency[u];
      auto pos = std::lower_bound(nu.begin(), nu.end(), v) - nu.begin();
      if (pos == static_cast<long>(nu.size()) || nu[pos] != v || colors.edge[u][pos] != ec[k])
        throw ValidationError("edge colors are not symmetric");
    }
  }
}

}  // namespace detail

/// For a ball that is a tree, a string that determines its rooted
/// isomorphism class (nested child encodings, sorted); nothing otherwise.
inline std::optional<std::string> tree_certificate(const RootedBall& ball) {
  const int n = ball.vertex_count();
  if (ball.edge_count() != n - 1) return std::nullopt;
  std::vector<std::string> enc(n);
  for (int v = n - 1; v >= 0; --v) {
    std::vector<int> kids;
    for (int w : ball.adjacency[v])
      if (ball.dist[w] == ball.dist[v] + 1) kids.push_back(w);
    std::sort(kids.begin(), kids.end(), [&](int a, int b) { return enc[a] < enc[b]; });
    enc[v] = "(";
    for (int k : kids) enc[v] += std::move(enc[k]);
    enc[v] += ")";
  }
  return std::to_string(ball.radius) + ":" + enc[0];
}

/// Canonical code of an uncolored rooted ball.
inline BallClass canonical_code(const RootedBall& ball) {
  detail::validate_structure(ball);
  detail::Canonicalizer c(ball, nullptr);
  return {detail::encode_words(c.run()), ball.radius, ball.degree_bound};
}

/// Canonical code of a colored rooted ball. Throws ValidationError when a
/// tuple length differs from the radius or a color leaves its palette.
inline ColoredType canonical_code(const RootedBall& ball, const BallColoring& colors) {
  detail::validate_structure(ball);
  detail::validate_coloring(ball, colors);
  detail::Canonicalizer c(ball, &colors);
  return {detail::encode_words(c.run()), ball.radius, ball.degree_bound};
}

inline ColoredType canonical_code(const ColoredBall& cb) { return canonical_code(cb.ball, cb.colors); }

namespace detail {

inline ColoredBall decode(std::string_view code, int degree_bound, bool expect_colored) {
  Words w = decode_words(code);
  std::size_t i = 0;
  auto next = [&]() -> std::uint32_t {
    if (i >= w.size()) throw ValidationError("truncated canonical code");
    return w[i++];
  };
  bool colored = next() != 0;
  if (colored != expect_colored) throw ValidationError("canonical code colored flag mismatch");
  ColoredBall cb;
  auto& b = cb.ball;
  b.radius = static_cast<int>(next());
  b.degree_bound = degree_bound;
  const int n = static_cast<int>(next());
  const int layers = static_cast<int>(next());
  for (int l = 0; l < layers; ++l) {
    std::uint32_t s = next();
    for (std::uint32_t k = 0; k < s; ++k) b.dist.push_back(l);
  }
  if (static_cast<int>(b.dist.size()) != n) throw ValidationError("canonical code layer sizes inconsistent");
  b.adjacency.assign(n, {});
  b.source.resize(n);
  std::iota(b.source.begin(), b.source.end(), 0);
  const std::uint32_t m = next();
  std::vector<Edge> es;
  for (std::uint32_t e = 0; e < m; ++e) {
    int a = static_cast<int>(next());
    int c = static_cast<int>(next());
    if (a >= n || c >= n) throw ValidationError("canonical code edge out of range");
    es.emplace_back(a, c);
  }
  std::vector<int> col(m, 0);
  if (colored) {
    for (std::uint32_t e = 0; e < m; ++e) col[e] = static_cast<int>(next());
    const int len = static_cast<int>(next());
    cb.colors.tuples.assign(n, {});
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < len; ++k) cb.colors.tuples[v].push_back(next());
  }
  if (i != w.size()) throw ValidationError("trailing data in canonical code");
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::uint32_t e = 0; e < m; ++e) {
    adj[es[e].first].emplace_back(es[e].second, col[e]);
    adj[es[e].second].emplace_back(es[e].first, col[e]);
  }
  if (colored) cb.colors.edge.assign(n, {});
  for (int v = 0; v < n; ++v) {
    std::sort(adj[v].begin(), adj[v].end());
    for (auto [u, c] : adj[v]) {
      b.adjacency[v].push_back(u);
      if (colored) cb.colors.edge[v].push_back(c);
    }
  }
  return cb;
}

}  // namespace detail

/// A concrete representative of the class (local ids = canonical positions).
inline RootedBall decode(const BallClass& c) { return detail::decode(c.code, c.degree_bound, false).ball; }
inline ColoredBall decode(const ColoredType& t) { return detail::decode(t.code, t.degree_bound, true); }

/// The colored type of the (r-1)-ball around the root, tuples cut to r-1
/// components. This is the relation A_{r-1} < A_r.
inline ColoredType restrict_type(const ColoredType& t) {
  if (t.radius < 1) throw ValidationError("restrict: radius-0 type has no restriction");
  ColoredBall rep = decode(t);
  return canonical_code(colored_sub_ball(rep, RootedBall::root(), t.radius - 1, t.radius - 1));
}

/// Restriction to any radius r' <= t.radius.
inline ColoredType restrict_to(const ColoredType& t, int radius) {
  if (radius < 0 || radius > t.radius) throw ValidationError("restrict_to: radius out of range");
  if (radius == t.radius) return t;
  ColoredBall rep = decode(t);
  return canonical_code(colored_sub_ball(rep, RootedBall::root(), radius, radius));
}

/// The uncolored class obtained by erasing all colors.
inline BallClass underlying_class(const ColoredType& t) { return canonical_code(decode(t).ball); }

inline std::string hex(const BallClass& c) { return to_hex(c.code); }
inline std::string hex(const ColoredType& c) { return to_hex(c.code); }

}  // namespace bslimit
