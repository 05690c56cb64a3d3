#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "bslimit/chain_space.hpp"
#include "bslimit/generators.hpp"
#include "bslimit/json_io.hpp"
#include "oracles.hpp"

using namespace bslimit;

namespace {

TypeTrie trie_of(const Graph& g, int depth) { return build_trie(g, build_bundle(g, depth), depth); }

Rational level_mass(const TypeTrie& t, int l) {
  Rational s = 0;
  for (const auto& [c, node] : t.levels[l]) s += node.measure;
  return s;
}

}  // namespace

TEST(Trie, CycleTwelveIsAdditive) {
  TypeTrie t = trie_of(gen::cycle(12), 2);
  EXPECT_TRUE(check_trie(t).ok);
  for (int l = 0; l <= 2; ++l) EXPECT_EQ(level_mass(t, l), 1);
  for (int l = 0; l < 2; ++l)
    for (const auto& [c, node] : t.levels[l]) {
      Rational s = 0;
      for (const auto& ch : node.children) s += t.find(l + 1, ch)->measure;
      EXPECT_EQ(s, node.measure);
    }
}

TEST(Trie, SingleVertex) {
  TypeTrie t = trie_of(gen::path(1), 1);
  ASSERT_EQ(t.levels[1].size(), 1u);
  EXPECT_EQ(t.levels[1].begin()->second.measure, 1);
  EXPECT_TRUE(check_trie(t).ok);
}

TEST(Trie, PathTenCounts) {
  TypeTrie t = trie_of(gen::path(10), 2);
  for (int l = 1; l <= 2; ++l) {
    std::int64_t s = 0;
    for (const auto& [c, node] : t.levels[l]) s += node.count;
    EXPECT_EQ(s, 10);
  }
}

TEST(Trie, CesaroAveragesMeasures) {
  std::vector<Graph> gs{gen::path(10), gen::path(20)};
  std::vector<ColoringBundle> bs{build_bundle(gs[0], 2), build_bundle(gs[1], 2)};
  TypeTrie t = build_trie_cesaro(gs, bs, 2);
  EXPECT_TRUE(check_trie(t, true).ok);
  for (int l = 0; l <= 2; ++l) EXPECT_EQ(level_mass(t, l), 1);
  TypeTrie a = build_trie(gs[0], bs[0], 2), b = build_trie(gs[1], bs[1], 2);
  for (const auto& [c, node] : t.levels[2]) EXPECT_EQ(node.measure, (a.measure(2, c) + b.measure(2, c)) / 2);
}

TEST(Trie, CheckDetectsCorruption) {
  TypeTrie t = trie_of(gen::cycle(12), 2);
  auto& leaf = t.levels[2].begin()->second;
  leaf.measure += Rational(1, 12);
  TrieCheck c = check_trie(t);
  EXPECT_FALSE(c.ok);
  EXPECT_FALSE(c.violations.empty());
}

TEST(Trie, JsonRoundTrip) {
  TypeTrie t = trie_of(gen::random_regular(40, 3, 1), 3);
  Json j = to_json(t);
  TypeTrie back = trie_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back, t);
  EXPECT_TRUE(check_trie(back).ok);
}

TEST(Chain, DepthOne) {
  Graph g = gen::cycle(7);
  Chain x = vertex_chain(g, build_bundle(g, 1), 3, 1);
  EXPECT_EQ(x.depth(), 1);
  EXPECT_TRUE(x.is_coherent());
}

TEST(Chain, CycleUnderlyingPaths) {
  Graph g = gen::cycle(12);
  ColoringBundle b = build_bundle(g, 3);
  for (Vertex v = 0; v < 12; ++v) {
    Chain x = vertex_chain(g, b, v, 3);
    ASSERT_TRUE(x.is_coherent());
    for (int r = 1; r <= 3; ++r) {
      RootedBall u = decode(underlying_class(x.at(r)));
      EXPECT_EQ(u.vertex_count(), 2 * r + 1);
      EXPECT_EQ(u.edge_count(), 2 * r);
    }
  }
}

TEST(Involution, IsolatedRootIsFixed) {
  Graph g = gen::path(1);
  ColoringBundle b = build_bundle(g, 3);
  Chain x = vertex_chain(g, b, 0, 3);
  for (int a = 0; a <= g.degree_bound(); ++a) EXPECT_EQ(apply_involution(a, x), x);
}

TEST(Involution, CycleStepsToNeighbor) {
  Graph g = gen::cycle(12);
  ColoringBundle b = build_bundle(g, 3);
  Vertex v = 5, left = 4;
  int a = b.edge_colors[g.edge_id(v, left)];
  EXPECT_EQ(apply_involution(a, vertex_chain(g, b, v, 3)), vertex_chain(g, b, left, 2));
}

TEST(Involution, TwiceIsTruncation) {
  Graph g = gen::cycle(12);
  ColoringBundle b = build_bundle(g, 3);
  Chain x = vertex_chain(g, b, 0, 3);
  int a = b.edge_colors[g.edge_id(0, 1)];
  EXPECT_EQ(apply_involution(a, apply_involution(a, x)), x.truncated(1));
}

TEST(Involution, DepthOneWithEdgeIsAnError) {
  Graph g = gen::cycle(6);
  ColoringBundle b = build_bundle(g, 1);
  Chain x = vertex_chain(g, b, 0, 1);
  EXPECT_THROW(apply_involution(b.edge_colors[g.edge_id(0, 1)], x), ValidationError);
  EXPECT_THROW(apply_involution(7, x), ValidationError);
}

TEST(Involution, LawsOnRandomCubic) {
  Graph g = gen::random_regular(80, 3, 6);
  const int R = 4;
  ColoringBundle b = build_bundle(g, R);
  std::vector<Chain> chains;
  for (Vertex v = 0; v < 80; ++v) chains.push_back(vertex_chain(g, b, v, R));
  for (Vertex v = 0; v < 80; ++v)
    for (int a = 0; a <= 3; ++a) {
      Vertex w = b.neighbor_via(v, a);
      Chain y = apply_involution(a, chains[v]);
      if (w < 0) {
        EXPECT_EQ(y, chains[v]);
        continue;
      }
      EXPECT_EQ(y, chains[w].truncated(R - 1));
      EXPECT_EQ(apply_involution(a, y), chains[v].truncated(R - 2));
    }
}

TEST(Invariance, CycleTwelve) {
  Graph g = gen::cycle(12);
  ColoringBundle b = build_bundle(g, 2);
  TypeTrie t = build_trie(g, b, 2);
  for (int a = 0; a <= 2; ++a) EXPECT_TRUE(verify_invariance(t, g, b, a, 1).pass) << a;
}

TEST(Invariance, PathTenIncludingEndpoints) {
  Graph g = gen::path(10);
  ColoringBundle b = build_bundle(g, 2);
  TypeTrie t = build_trie(g, b, 2);
  for (int a = 0; a <= 2; ++a) {
    auto rep = verify_invariance(t, g, b, a, 1);
    EXPECT_TRUE(rep.pass);
    std::int64_t total = 0;
    for (const auto& e : rep.entries) total += e.tau;
    EXPECT_EQ(total, 10);
  }
}

TEST(Invariance, SingleVertex) {
  Graph g = gen::path(1);
  ColoringBundle b = build_bundle(g, 1);
  TypeTrie t = build_trie(g, b, 1);
  auto rep = verify_invariance(t, g, b, 0, 0);
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_EQ(rep.entries[0].tau, 1);
  EXPECT_EQ(rep.entries[0].fiber_tau_sum, 1);
  EXPECT_TRUE(rep.pass);
}

TEST(Invariance, DetectsCorruptedMeasure) {
  Graph g = gen::cycle(12);
  ColoringBundle b = build_bundle(g, 2);
  TypeTrie t = build_trie(g, b, 2);
  t.levels[2].begin()->second.measure += Rational(1, 12);
  bool all = true;
  for (int a = 0; a <= 2; ++a) all = all && verify_invariance(t, g, b, a, 1).pass;
  EXPECT_FALSE(all);
}

TEST(Sample, SinglePathTrie) {
  TypeTrie single = trie_of(gen::path(1), 3);
  Chain first = sample_chain(single, 0);
  for (std::uint64_t s = 1; s < 20; ++s) EXPECT_EQ(sample_chain(single, s), first);
  EXPECT_EQ(first.depth(), 3);
}

TEST(Sample, CycleChainsArePaths) {
  TypeTrie t = trie_of(gen::cycle(12), 3);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Chain x = sample_chain(t, rng);
    ASSERT_TRUE(x.is_coherent());
    for (int r = 1; r <= 3; ++r) EXPECT_EQ(decode(underlying_class(x.at(r))).vertex_count(), 2 * r + 1);
  }
}

TEST(Sample, FrequenciesWithinThreeSigma) {
  TypeTrie t = trie_of(gen::random_regular(60, 3, 2), 2);
  const int N = 10000;
  std::mt19937_64 rng(42);
  std::map<std::string, int> hits;
  for (int i = 0; i < N; ++i) ++hits[sample_chain(t, rng).types.back().code];
  for (const auto& [code, node] : t.levels[2]) {
    double p = to_double(node.measure);
    double sigma = std::sqrt(N * p * (1 - p));
    EXPECT_LE(std::abs(hits[code] - N * p), 3 * sigma + 1) << to_hex(code);
  }
  for (const auto& [code, k] : hits) EXPECT_NE(t.find(2, code), nullptr);
}
