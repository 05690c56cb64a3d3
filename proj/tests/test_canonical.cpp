#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "bslimit/canonical.hpp"
#include "bslimit/coloring.hpp"
#include "bslimit/generators.hpp"
#include "oracles.hpp"

using namespace bslimit;

TEST(Canonical, RelabelledCentredPaths) {
  Graph a(3, {{0, 1}, {1, 2}}), b(3, {{2, 0}, {0, 1}});
  EXPECT_EQ(canonical_code(extract_ball(a, 1, 1)), canonical_code(extract_ball(b, 0, 1)));
}

TEST(Canonical, CentreVersusEndpoint) {
  Graph p = gen::path(3);
  EXPECT_NE(canonical_code(extract_ball(p, 1, 2)), canonical_code(extract_ball(p, 0, 2)));
}

TEST(Canonical, CyclesAgreeAtRadiusOne) {
  EXPECT_EQ(canonical_code(extract_ball(gen::cycle(10), 3, 1)), canonical_code(extract_ball(gen::cycle(12), 5, 1)));
}

TEST(Canonical, FrozenCodes) {
  // Byte layout is part of the stored-report format; changing it is a
  // format version bump.
  EXPECT_EQ(hex(canonical_code(extract_ball(gen::cycle(10), 0, 1))), "010001030201020200010002");
  EXPECT_EQ(hex(canonical_code(extract_ball(gen::path(1), 0, 0))), "01000001010100");
}

TEST(Canonical, RadiusIsPartOfTheClass) {
  Graph p = gen::path(1);
  EXPECT_NE(canonical_code(extract_ball(p, 0, 0)), canonical_code(extract_ball(p, 0, 1)));
}

TEST(Canonical, DecodeRoundTrip) {
  Graph g = gen::random_regular(50, 3, 3);
  for (Vertex v = 0; v < 50; v += 4)
    for (int r = 0; r <= 3; ++r) {
      BallClass c = canonical_code(extract_ball(g, v, r));
      RootedBall rep = decode(c);
      if (rep.vertex_count() <= 9) {
        EXPECT_TRUE(oracle::rooted_isomorphic(rep, extract_ball(g, v, r)));
      }
      EXPECT_EQ(canonical_code(rep), c);
    }
}

TEST(Canonical, CorpusMatchesBruteForce) {
  auto corpus = oracle::ball_corpus(6, 3);
  std::map<std::string, std::pair<int, std::uint64_t>> by_code;
  std::map<std::pair<int, std::uint64_t>, std::string> by_brute;
  for (const auto& b : corpus) {
    auto code = canonical_code(b).code;
    auto brute = oracle::brute_canon(b);
    auto [i1, f1] = by_code.emplace(code, brute);
    ASSERT_EQ(i1->second, brute);
    auto [i2, f2] = by_brute.emplace(brute, code);
    ASSERT_EQ(i2->second, code);
  }
  EXPECT_EQ(by_code.size(), by_brute.size());
}

TEST(Canonical, RandomRelabellingInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = trial % 2 ? gen::random_regular(30, 3, trial) : gen::torus(5, 6);
    auto perm = oracle::random_permutation(g.vertex_count(), rng);
    Graph h = oracle::relabel(g, perm);
    Vertex v = static_cast<Vertex>(rng() % g.vertex_count());
    int r = 1 + trial % 3;
    ASSERT_EQ(canonical_code(extract_ball(g, v, r)), canonical_code(extract_ball(h, perm[v], r))) << trial;
  }
}

TEST(Canonical, ColoredCodesAreRelabellingInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = gen::random_regular(40, 3, 100 + trial);
    ColoringBundle b = build_bundle(g, 2);
    auto perm = oracle::random_permutation(40, rng);
    Graph h = oracle::relabel(g, perm);
    // Transport the bundle along the relabelling.
    std::vector<int> ec(h.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
      auto [u, v] = g.edges()[e];
      ec[h.edge_id(perm[u], perm[v])] = b.edge_colors[e];
    }
    std::vector<std::vector<std::uint32_t>> vc(2, std::vector<std::uint32_t>(40));
    for (int i = 0; i < 2; ++i)
      for (int v = 0; v < 40; ++v) vc[i][perm[v]] = b.vertex_colors[i][v];
    ColoringBundle bh = make_bundle(h, ec, vc);
    for (Vertex v = 0; v < 40; v += 5) ASSERT_EQ(colored_type(g, b, v, 2), colored_type(h, bh, perm[v], 2));
  }
}

TEST(Canonical, ColoredDecodeRoundTripAndUnderlying) {
  Graph g = gen::torus(6, 6);
  ColoringBundle b = build_bundle(g, 2);
  for (Vertex v = 0; v < 36; v += 5) {
    ColoredType t = colored_type(g, b, v, 2);
    EXPECT_EQ(canonical_code(decode(t)), t);
    EXPECT_EQ(underlying_class(t), canonical_code(extract_ball(g, v, 2)));
  }
}

TEST(Canonical, DifferentColoringsSameUnderlying) {
  Graph g = gen::cycle(10);
  ColoringBundle b = build_bundle(g, 1);
  ColoredType t0 = colored_type(g, b, 0, 1), t1 = colored_type(g, b, 1, 1);
  EXPECT_NE(t0, t1);
  EXPECT_EQ(underlying_class(t0), underlying_class(t1));
  EXPECT_EQ(underlying_class(t0), canonical_code(extract_ball(g, 0, 1)));
}

TEST(Canonical, TreeVersusTriangle) {
  Graph star = gen::star(3), tri = gen::complete(3);
  ColoredType a = colored_type(star, build_bundle(star, 1), 0, 1);
  ColoredType c = colored_type(tri, build_bundle(tri, 1), 0, 1);
  EXPECT_NE(underlying_class(a), underlying_class(c));
}

TEST(Restrict, IsolatedRoot) {
  Graph g = gen::path(1);
  ColoredType t = colored_type(g, build_bundle(g, 1), 0, 1);
  ColoredType r0 = restrict_type(t);
  EXPECT_EQ(r0.radius, 0);
  EXPECT_TRUE(decode(r0).colors.tuples[0].empty());
  EXPECT_EQ(underlying_class(r0), canonical_code(extract_ball(g, 0, 0)));
}

TEST(Restrict, ComposesAndMatchesDirectExtraction) {
  Graph g = gen::random_regular(60, 3, 8);
  ColoringBundle b = build_bundle(g, 3);
  for (Vertex v = 0; v < 60; v += 3) {
    ColoredType t3 = colored_type(g, b, v, 3);
    ColoredType t2 = colored_type(g, b, v, 2);
    ColoredType t1 = colored_type(g, b, v, 1);
    EXPECT_EQ(restrict_type(t3), t2);
    EXPECT_EQ(restrict_type(restrict_type(t3)), t1);
    EXPECT_EQ(restrict_to(t3, 1), t1);
  }
}

TEST(Canonical, RejectsBadColorings) {
  Graph g = gen::path(3);
  ColoredBall cb = colored_ball(g, build_bundle(g, 1), 1, 1);
  ColoredBall wrong_len = cb;
  wrong_len.colors.tuples[0].push_back(0);
  EXPECT_THROW(canonical_code(wrong_len), ValidationError);
  ColoredBall off_palette = cb;
  off_palette.colors.tuples[0][0] = static_cast<std::uint32_t>(palette_size(2, 1));
  EXPECT_THROW(canonical_code(off_palette), ValidationError);
  ColoredBall clash = cb;
  clash.colors.edge[0][1] = clash.colors.edge[0][0];
  EXPECT_THROW(canonical_code(clash), ValidationError);
}

TEST(Canonical, MalformedCodesRejected) {
  EXPECT_THROW(decode(BallClass{"", 0, 2}), ValidationError);
  EXPECT_THROW(decode(BallClass{std::string("\x02\x00", 2), 0, 2}), ValidationError);
  EXPECT_THROW(from_hex("0g"), ValidationError);
}

TEST(Palette, Sizes) {
  EXPECT_EQ(palette_size(2, 1), 4u);
  EXPECT_EQ(palette_size(3, 2), 17u);
  EXPECT_EQ(palette_size(3, 1000), std::numeric_limits<std::uint64_t>::max());
}

TEST(TreeCertificate, AgreesWithCodesOnCorpus) {
  std::map<std::string, std::string> code_of;
  for (const auto& b : oracle::ball_corpus(7, 3)) {
    auto cert = tree_certificate(b);
    if (b.edge_count() != b.vertex_count() - 1) {
      EXPECT_FALSE(cert);
      continue;
    }
    ASSERT_TRUE(cert);
    auto [it, fresh] = code_of.emplace(*cert, canonical_code(b).code);
    EXPECT_EQ(it->second, canonical_code(b).code);
  }
  std::set<std::string> codes;
  for (const auto& [cert, code] : code_of) codes.insert(code);
  EXPECT_EQ(codes.size(), code_of.size());
}

TEST(Canonical, SymmetricTreesAreFastAndInvariant) {
  // Radius-3 balls of a large 5-regular graph are mostly full trees with
  // 5! * 24^25 automorphisms.
  Graph g = gen::random_regular(20000, 5, 3);
  std::mt19937_64 rng(1);
  auto perm = oracle::random_permutation(g.vertex_count(), rng);
  Graph h = oracle::relabel(g, perm);
  for (Vertex v = 0; v < 20; ++v) ASSERT_EQ(canonical_code(extract_ball(g, v, 3)), canonical_code(extract_ball(h, perm[v], 3)));
}
