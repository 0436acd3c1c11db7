#include <gtest/gtest.h>

#include "support.hpp"

namespace dexarb {
namespace {

using testing::make_pool;

// Most negative simple cycle anywhere in g (exhaustive; small graphs only).
double best_cycle_anywhere(const TokenGraph& g) {
  double best = kInfinity;
  for (TokenId s = 0; s < g.token_count(); ++s) best = std::min(best, testing::brute_force(g, s, g.token_count()).best_loop);
  return best;
}

TEST(BaselineMbf, InjectedTriangleIsTheOnlyCycle) {
  const auto g = build_token_graph(testing::triangle(1.05));
  const auto cycles = mbf_detect_cycles(g, 0);
  ASSERT_EQ(cycles.size(), 1u);
  EXPECT_EQ(cycles[0].tokens, (std::vector<TokenId>{0, 1, 2, 0}));
  EXPECT_EQ(cycles[0].kind, PathKind::loop);
  EXPECT_NEAR(cycles[0].total_weight, -std::log(1.05) - 3 * std::log(0.997), 1e-12);
}

TEST(BaselineMbf, FeeOnlyMarketHasNoCycles) {
  MarketSpec spec;
  spec.n_tokens = 12;
  spec.n_pools = 30;
  const auto g = build_token_graph(generate(spec));
  for (TokenId s = 0; s < g.token_count(); ++s) EXPECT_TRUE(mbf_detect_cycles(g, s).empty());
  EXPECT_TRUE(mbf_detect_all(g).empty());
}

TEST(BaselineMbf, TwoDisjointTriangles) {
  auto pools = testing::triangle(1.05);
  for (const auto& p : std::vector<PoolSnapshot>{make_pool("q-de", "D", "E", 1000, 1080), make_pool("q-ef", "E", "F", 1000, 1000),
                                                 make_pool("q-df", "D", "F", 1000, 1000), make_pool("bridge1", "C", "D", 1000, 1000),
                                                 make_pool("bridge2", "A", "F", 1000, 1000)}) {
    pools.push_back(p);
  }
  const auto g = build_token_graph(pools);
  const auto cycles = mbf_detect_cycles(g, 0);
  EXPECT_GE(cycles.size(), 1u);
  EXPECT_LE(cycles.size(), 2u);
  for (const auto& c : cycles) {
    EXPECT_LT(c.total_weight, 0.0);
    EXPECT_TRUE(testing::is_simple(c));
    EXPECT_EQ(c.tokens, canonical_loop(c.tokens));
  }
}

TEST(BaselineMbf, UnknownSource) {
  const auto g = build_token_graph(testing::triangle(1.0));
  EXPECT_THROW(mbf_detect_cycles(g, 7), UnknownTokenError);
}

TEST(CanonicalLoop, RotatesSmallestFirst) {
  EXPECT_EQ(canonical_loop({3, 1, 2, 3}), (std::vector<TokenId>{1, 2, 3, 1}));
  EXPECT_EQ(canonical_loop({0, 4, 2, 0}), (std::vector<TokenId>{0, 4, 2, 0}));
}

TEST(BaselineMbf, PropertiesOnRandomMarkets) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    MarketSpec spec;
    spec.seed = seed;
    spec.n_tokens = 4 + seed % 4;
    spec.n_pools = std::min(spec.n_tokens * (spec.n_tokens - 1) / 2, spec.n_tokens + seed % 6);
    spec.price_noise = 0.02;
    const auto g = build_token_graph(generate(spec));
    const bool any_negative = best_cycle_anywhere(g) < 0.0;
    for (TokenId s = 0; s < g.token_count(); ++s) {
      const auto cycles = mbf_detect_cycles(g, s);
      // Connected market: every cycle is reachable from every source.
      EXPECT_EQ(!cycles.empty(), any_negative) << "seed " << seed << " source " << s;
      std::set<std::vector<TokenId>> seen;
      for (const auto& c : cycles) {
        EXPECT_LT(c.total_weight, 0.0);
        EXPECT_TRUE(testing::is_simple(c));
        EXPECT_TRUE(seen.insert(c.tokens).second);
        double w = 0.0;
        for (std::size_t k = 0; k + 1 < c.tokens.size(); ++k) w += g.edge(*g.find_edge(c.tokens[k], c.tokens[k + 1])).weight;
        EXPECT_NEAR(w, c.total_weight, 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace dexarb
