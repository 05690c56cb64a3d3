#include <gtest/gtest.h>

#include "bslimit/generators.hpp"
#include "bslimit/local_stats.hpp"
#include "oracles.hpp"

using namespace bslimit;

namespace {

std::vector<Rational> freqs(const TypeDistribution& d) {
  std::vector<Rational> out;
  for (const auto& [code, k] : d.counts) out.push_back(d.frequency(code));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Distribution, CycleIsPointMass) {
  auto d = distribution(gen::cycle(10), 1);
  EXPECT_EQ(freqs(d), (std::vector<Rational>{1}));
}

TEST(Distribution, PathTenRadiusOne) {
  auto d = distribution(gen::path(10), 1);
  EXPECT_EQ(freqs(d), (std::vector<Rational>{Rational(2, 10), Rational(8, 10)}));
}

TEST(Distribution, SingleVertexRadiusZero) {
  auto d = distribution(gen::path(1), 0);
  EXPECT_EQ(freqs(d), (std::vector<Rational>{1}));
}

TEST(Distribution, CountsMatchBruteForceClasses) {
  // Classes by permutation search, counts by direct tally.
  Graph g = gen::path(12);
  for (int r = 1; r <= 3; ++r) {
    auto d = distribution(g, r);
    std::vector<RootedBall> reps;
    std::vector<int> counts;
    for (Vertex v = 0; v < 12; ++v) {
      RootedBall b = extract_ball(g, v, r);
      std::size_t k = 0;
      while (k < reps.size() && !oracle::rooted_isomorphic(reps[k], b)) ++k;
      if (k == reps.size()) {
        reps.push_back(b);
        counts.push_back(0);
      }
      ++counts[k];
    }
    ASSERT_EQ(d.counts.size(), reps.size());
    for (std::size_t k = 0; k < reps.size(); ++k) EXPECT_EQ(d.count(canonical_code(reps[k]).code), counts[k]);
  }
}

TEST(Tv, Identity) {
  auto d = distribution(gen::random_regular(50, 3, 1), 2);
  EXPECT_EQ(tv_distance(d, d), 0);
}

TEST(Tv, CyclesAgree) { EXPECT_EQ(tv_distance(distribution(gen::cycle(10), 1), distribution(gen::cycle(12), 1)), 0); }

TEST(Tv, CycleVersusPath) {
  EXPECT_EQ(tv_distance(distribution(gen::cycle(10), 1), distribution(gen::path(10), 1)), Rational(2, 10));
}

TEST(Tv, SymmetricAndBounded) {
  auto p = distribution(gen::random_regular(40, 3, 1), 2);
  auto q = distribution(gen::torus(5, 8), 2);
  EXPECT_THROW(tv_distance(p, q), ValidationError);  // different d
  auto s = distribution(gen::random_regular(40, 3, 2), 2);
  EXPECT_EQ(tv_distance(p, s), tv_distance(s, p));
  EXPECT_LE(tv_distance(p, s), 1);
}

TEST(Pushforward, ColoredAggregatesToUncolored) {
  for (const auto& [name, g] : oracle::test_graphs(false)) {
    ColoringBundle b = build_bundle(g, 3);
    for (int r = 0; r <= 3; ++r) {
      auto colored = distribution(g, r, &b);
      EXPECT_EQ(aggregate_by_underlying(colored), distribution(g, r)) << name << " r=" << r;
      if (r > 0) {
        EXPECT_EQ(aggregate_by_restriction(colored), distribution(g, r - 1, &b)) << name;
      }
    }
  }
}

TEST(Sequence, CyclesConvergeWithZeroTv) {
  std::vector<Graph> gs{gen::cycle(8), gen::cycle(16), gen::cycle(32), gen::cycle(64)};
  auto rep = analyze_sequence(gs, 2, Rational(1, 1000000));
  ASSERT_EQ(rep.verdicts.size(), 2u);
  for (const auto& v : rep.verdicts) {
    EXPECT_TRUE(v.converged);
    for (const auto& t : v.tv) EXPECT_EQ(t, 0);
  }
}

TEST(Sequence, PathsHalving) {
  std::vector<Graph> gs{gen::path(10), gen::path(20), gen::path(40)};
  auto rep = analyze_sequence(gs, 1, Rational(5, 100));
  EXPECT_EQ(rep.verdicts[0].tv, (std::vector<Rational>{Rational(1, 10), Rational(1, 20)}));
  EXPECT_TRUE(rep.verdicts[0].converged);
}

TEST(Sequence, PathsClosedForm) {
  std::vector<Graph> gs{gen::path(10), gen::path(20), gen::path(40), gen::path(80)};
  auto rep = analyze_sequence(gs, 3, Rational(1, 1000));
  for (const auto& v : rep.verdicts)
    for (std::size_t i = 0; i < v.tv.size(); ++i) {
      int n = 10 << i;
      EXPECT_EQ(v.tv[i], Rational(2 * v.radius, n) - Rational(2 * v.radius, 2 * n));
    }
}

TEST(Sequence, CycleThenPathNotConverged) {
  auto rep = analyze_sequence({gen::cycle(10), gen::path(10)}, 1, Rational(1, 100));
  EXPECT_EQ(rep.verdicts[0].tv[0], Rational(1, 5));
  EXPECT_FALSE(rep.verdicts[0].converged);
}

TEST(Sequence, MixedDegreeBoundsRejected) {
  EXPECT_THROW(analyze_sequence({gen::cycle(10), gen::torus(4, 4)}, 1, Rational(1, 10)), ValidationError);
}

TEST(Sequence, ColoredVerdictsPresent) {
  std::vector<Graph> gs{gen::cycle(12), gen::cycle(24)};
  std::vector<ColoringBundle> bs{build_bundle(gs[0], 2), build_bundle(gs[1], 2)};
  auto rep = analyze_sequence(gs, 2, Rational(1, 10), &bs);
  EXPECT_EQ(rep.verdicts.size(), 4u);
  EXPECT_TRUE(rep.verdicts[2].colored);
}

TEST(Rule, TailWindow) {
  Rational eps(1, 20);
  EXPECT_TRUE(converged_by_rule({Rational(1, 10), Rational(1, 20)}, eps, 3));
  EXPECT_FALSE(converged_by_rule({Rational(1, 5)}, eps, 2));
  EXPECT_TRUE(converged_by_rule({Rational(1, 100), Rational(1, 5), Rational(1, 100)}, eps, 4));
  EXPECT_FALSE(converged_by_rule({Rational(1, 100), Rational(1, 10), Rational(1, 5), Rational(1, 100)}, eps, 5));
  EXPECT_FALSE(converged_by_rule({}, eps, 1));
}

TEST(Rational, DecimalParsing) {
  EXPECT_EQ(parse_decimal("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_decimal("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_decimal("2.5E+1"), Rational(25));
  EXPECT_EQ(parse_decimal("3/9"), Rational(1, 3));
  EXPECT_THROW(parse_decimal("abc"), ValidationError);
  EXPECT_THROW(parse_decimal("1e"), ValidationError);
  EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(to_string(Rational(1)), "1/1");
}

TEST(Distribution, TreeCacheMatchesDirectCodes) {
  Graph g = gen::random_regular(300, 4, 7);
  for (int r = 1; r <= 2; ++r) {
    TypeDistribution direct{r, 300, 4, false, {}};
    for (Vertex v = 0; v < 300; ++v) ++direct.counts[canonical_code(extract_ball(g, v, r)).code];
    EXPECT_EQ(distribution(g, r), direct);
  }
}
