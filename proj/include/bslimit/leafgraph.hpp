#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bslimit/ball.hpp"
#include "bslimit/canonical.hpp"
#include "bslimit/chain_space.hpp"
#include "bslimit/coloring.hpp"
#include "bslimit/error.hpp"
#include "bslimit/graph.hpp"

namespace bslimit {

/// A sequence of edge colors, applied left to right.
struct Word {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()); }

  Word then(int a) const {
    Word w = *this;
    w.letters.push_back(a);
    return w;
  }

  Word reversed() const { return Word{{letters.rbegin(), letters.rend()}}; }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < letters.size(); ++i) s += (i ? "," : "") + std::to_string(letters[i]);
    return s + "]";
  }

  auto operator<=>(const Word&) const = default;
};

namespace detail {

// Walks from the root; each step starts within distance length-1 of the root,
// so a word no longer than the radius only reads complete neighborhoods.
inline int walk(const ColoredBall& ball, const std::vector<int>& letters) {
  int cur = RootedBall::root();
  for (int a : letters)
    if (int nxt = ball.neighbor_via(cur, a); nxt >= 0) cur = nxt;
  return cur;
}

}  // namespace detail

/// Graph-side action of a word inside a representative ball: move across the
/// a-colored edge when present, otherwise stay.
inline int apply_word_in_ball(const ColoredBall& ball, const Word& w) {
  if (w.length() >= ball.ball.radius && w.length() > 0)
    throw ValidationError("apply_word_in_ball: word of length " + std::to_string(w.length()) +
                          " needs a ball of radius > " + std::to_string(w.length()));
  return detail::walk(ball, w.letters);
}

struct KernelViolation {
  Word first, second;
  std::string kind;  // "l15": same vertex, different chains; "l16": different vertices, same chain
};

struct LeafballReconstruction {
  int radius = 0;
  RootedBall ball;                   // the reconstructed r-ball, uncolored
  std::vector<Word> words;           // shortest representative word per class
  std::vector<Chain> phi;            // class -> image chain (depth 2r)
  std::vector<int> ball_vertex;      // class -> vertex of the A_{2r} representative
  std::size_t words_enumerated = 0;
  std::vector<KernelViolation> violations;

  bool kernel_ok() const { return violations.empty(); }
};

/// Rebuilds the r-ball around chain x in its leafgraph from involution words.
///
/// Words of length <= r are enumerated breadth-first, skipping letters that
/// are stationary on the chain side. Every word is evaluated twice: as an
/// iterated involution on the chain (known to depth >= 2r) and as a walk in a
/// representative of A_{2r}. The two kernels must coincide. Classes are joined
/// when a single letter moves one to the other; edges between two classes at
/// distance exactly r are read off inside the image type of one endpoint.
inline LeafballReconstruction reconstruct_leafball(const Chain& x, int r) {
  if (r < 0) throw ValidationError("reconstruct_leafball: negative radius");
  if (x.depth() < 3 * r)
    throw ValidationError("reconstruct_leafball: chain depth " + std::to_string(x.depth()) + " < 3r = " +
                          std::to_string(3 * r));
  LeafballReconstruction out;
  out.radius = r;
  const int degree_bound = x.depth() > 0 ? x.types.front().degree_bound : 1;
  out.ball.radius = r;
  out.ball.degree_bound = degree_bound;
  if (r == 0) {
    out.ball.dist = {0};
    out.ball.adjacency = {{}};
    out.ball.source = {0};
    out.words = {Word{}};
    out.phi = {Chain{}};
    out.ball_vertex = {0};
    out.words_enumerated = 1;
    return out;
  }
  const int key_depth = 2 * r;
  const ColoredBall rep = decode(x.at(2 * r));

  struct Item {
    Word word;
    Chain image;
    int vertex;
    int cls;
  };
  std::vector<Item> items{{Word{}, x, RootedBall::root(), -1}};
  std::map<int, int> class_of_vertex;
  std::map<std::vector<ColoredType>, int> class_of_chain;
  std::vector<std::pair<std::size_t, std::size_t>> moves;  // (parent item, child item)

  for (std::size_t i = 0; i < items.size(); ++i) {
    Chain key = items[i].image.truncated(key_depth);
    auto iv = class_of_vertex.find(items[i].vertex);
    auto ic = class_of_chain.find(key.types);
    if (iv == class_of_vertex.end() && ic == class_of_chain.end()) {
      int c = static_cast<int>(out.words.size());
      class_of_vertex.emplace(items[i].vertex, c);
      class_of_chain.emplace(key.types, c);
      out.words.push_back(items[i].word);
      out.phi.push_back(key);
      out.ball_vertex.push_back(items[i].vertex);
      out.ball.dist.push_back(items[i].word.length());
      items[i].cls = c;
    } else if (iv != class_of_vertex.end() && ic != class_of_chain.end() && iv->second == ic->second) {
      items[i].cls = iv->second;
    } else if (iv != class_of_vertex.end()) {
      out.violations.push_back({out.words[iv->second], items[i].word, "l15"});
      items[i].cls = iv->second;
    } else {
      out.violations.push_back({out.words[ic->second], items[i].word, "l16"});
      items[i].cls = ic->second;
    }

    if (items[i].word.length() == r) continue;
    for (int a = 0; a <= degree_bound; ++a) {
      const bool chain_moves = has_edge_color(items[i].image.types.front(), a);
      const int next_vertex = rep.neighbor_via(items[i].vertex, a);
      if (chain_moves != (next_vertex >= 0)) {
        out.violations.push_back({items[i].word, items[i].word.then(a), "stationarity"});
        continue;
      }
      if (!chain_moves) continue;
      items.push_back({items[i].word.then(a), apply_involution(a, items[i].image), next_vertex, -1});
      moves.emplace_back(i, items.size() - 1);
    }
  }
  out.words_enumerated = items.size();

  const int k = static_cast<int>(out.words.size());
  std::vector<std::vector<int>> adj(k);
  auto link = [&](int u, int v) {
    if (u == v) return;
    if (std::find(adj[u].begin(), adj[u].end(), v) == adj[u].end()) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  };
  for (auto [p, c] : moves) link(items[p].cls, items[c].cls);

  // Same-layer edges at distance r. From class c, the vertex of class u is
  // reached by walking back along c's word and then along u's word (2r steps)
  // inside c's own 2r-type. T_a on the chains must agree wherever they meet.
  std::vector<int> outer;
  for (int c = 0; c < k; ++c)
    if (out.words[c].length() == r) outer.push_back(c);
  for (int c : outer) {
    const ColoredBall around = decode(out.phi[c].at(2 * r));
    for (int a = 0; a <= degree_bound; ++a) {
      const int q = around.neighbor_via(RootedBall::root(), a);
      if (q < 0) continue;
      const Chain stepped = apply_involution(a, out.phi[c]).truncated(2 * r - 1);
      for (int u : outer) {
        if (u == c) continue;
        std::vector<int> path = out.words[c].reversed().letters;
        path.insert(path.end(), out.words[u].letters.begin(), out.words[u].letters.end());
        if (detail::walk(around, path) != q) continue;
        if (stepped != out.phi[u].truncated(2 * r - 1))
          out.violations.push_back({out.words[c].then(a), out.words[u], "l15"});
        link(c, u);
      }
    }
  }

  out.ball.adjacency = std::move(adj);
  for (auto& nb : out.ball.adjacency) std::sort(nb.begin(), nb.end());
  out.ball.source.resize(k);
  for (int c = 0; c < k; ++c) out.ball.source[c] = c;
  return out;
}

struct LeafballVerdict {
  Vertex vertex = 0;
  bool isomorphic = false;    // reconstruction ~ B_r(v)
  bool kernel = false;        // both lemma directions
  bool bijective = false;     // class count == |B_r(v)| and classes -> chains injective
  bool forgets_colors = false;  // code == underlying_class(A_r)
  std::vector<KernelViolation> violations;

  bool pass() const { return isomorphic && kernel && bijective && forgets_colors; }
};

struct LeafballReport {
  int radius = 0;
  std::uint64_t seed = 0;
  std::vector<LeafballVerdict> verdicts;

  bool pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass(); });
  }
  std::size_t failures() const {
    return std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) { return !v.pass(); });
  }
};

inline LeafballVerdict verify_vertex_reconstruction(const Graph& g, const ColoringBundle& bundle, Vertex v, int r) {
  LeafballVerdict verdict;
  verdict.vertex = v;
  Chain x = vertex_chain(g, bundle, v, 3 * r);
  LeafballReconstruction rec = reconstruct_leafball(x, r);
  RootedBall truth = extract_ball(g, v, r);
  BallClass rebuilt = canonical_code(rec.ball);
  verdict.isomorphic = rebuilt == canonical_code(truth);
  verdict.kernel = rec.kernel_ok();
  std::set<std::vector<ColoredType>> images;
  for (const auto& c : rec.phi) images.insert(c.types);
  verdict.bijective = rec.kernel_ok() && static_cast<int>(rec.phi.size()) == truth.vertex_count() &&
                      images.size() == rec.phi.size();
  verdict.forgets_colors = r == 0 ? rebuilt.code == canonical_code(truth).code
                                  : rebuilt.code == underlying_class(x.at(r)).code;
  verdict.violations = rec.violations;
  return verdict;
}

/// Reconstructs and checks the leaf r-ball for `sample` seeded-random
/// vertices (all vertices, in order, when sample >= n).
inline LeafballReport verify_reconstruction(const Graph& g, const ColoringBundle& bundle, int r, std::size_t sample,
                                            std::uint64_t seed) {
  if (r < 0) throw ValidationError("verify_reconstruction: negative radius");
  if (bundle.depth < 3 * r)
    throw ValidationError("verify_reconstruction: bundle depth " + std::to_string(bundle.depth) + " < 3r = " +
                          std::to_string(3 * r));
  std::vector<Vertex> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  std::vector<Vertex> chosen;
  if (sample >= all.size()) {
    chosen = all;
  } else {
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), sample, rng);
  }
  LeafballReport rep;
  rep.radius = r;
  rep.seed = seed;
  for (Vertex v : chosen) rep.verdicts.push_back(verify_vertex_reconstruction(g, bundle, v, r));
  return rep;
}

}  // namespace bslimit
