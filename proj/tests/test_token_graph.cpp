#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

namespace dexarb {
namespace {

using testing::make_pool;

TEST(TokenGraph, FeeFreeSymmetricWeights) {
  auto g = build_token_graph({make_pool("p", "A", "B", 100, 200)}, 0.0);
  ASSERT_EQ(g.edge_count(), 2u);
  const auto& ab = g.edge(*g.find_edge(0, 1));
  const auto& ba = g.edge(*g.find_edge(1, 0));
  EXPECT_DOUBLE_EQ(ab.weight, -std::log(2.0));
  EXPECT_DOUBLE_EQ(ba.weight, -std::log(0.5));
  EXPECT_NEAR(ab.weight, -0.6931, 1e-4);
}

TEST(TokenGraph, EqualReservesWithUniswapFee) {
  EXPECT_EQ(kUniswapV2Fee, 0.003);
  auto g = build_token_graph({make_pool("p", "A", "B", 100, 100)}, kUniswapV2Fee);
  for (const auto& e : g.edges()) EXPECT_NEAR(e.weight, 0.0030045090202987243, 1e-15);
}

TEST(TokenGraph, SpotRates) {
  DirectedEdge e{0, 1, "p", 1000, 1000, 0};
  EXPECT_DOUBLE_EQ(spot_rate(e, 0.003), 0.997);
  e = {0, 1, "p", 100, 200, 0};
  EXPECT_DOUBLE_EQ(spot_rate(e, 0.0), 2.0);
  e = {0, 1, "p", 200, 100, 0};
  EXPECT_DOUBLE_EQ(spot_rate(e, 0.003), 0.4985);
}

TEST(TokenGraph, IdsFollowAddressOrderAndEdgesAreSorted) {
  auto g = build_token_graph({make_pool("p1", "C", "A", 1, 2), make_pool("p2", "B", "C", 3, 4)});
  ASSERT_EQ(g.token_count(), 3u);
  EXPECT_EQ(g.token(0).address, "A");
  EXPECT_EQ(g.token(2).address, "C");
  EXPECT_EQ(*g.find_token("B"), 1u);
  EXPECT_FALSE(g.find_token("Z"));
  for (std::size_t k = 1; k < g.edge_count(); ++k) {
    EXPECT_LT(std::pair(g.edge(k - 1).from, g.edge(k - 1).to), std::pair(g.edge(k).from, g.edge(k).to));
  }
  EXPECT_EQ(g.degree(2), 2u);
  EXPECT_EQ(g.out_edges(2).size(), 2u);
}

TEST(TokenGraph, ZeroReserveRejectedWithPoolIds) {
  auto pools = testing::triangle(1.0);
  pools[1].reserve1 = Decimal::parse("0");
  pools[2].reserve0 = Decimal::parse("0.0");
  try {
    build_token_graph(pools);
    FAIL();
  } catch (const RejectedPoolError& e) {
    EXPECT_NE(std::string(e.what()).find("p-bc"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("p-ac"), std::string::npos);
  }
}

TEST(TokenGraph, RejectsFeeOutOfRangeAndParallelPools) {
  EXPECT_THROW(build_token_graph(testing::triangle(1.0), 1.0), ConfigError);
  EXPECT_THROW(build_token_graph({make_pool("x", "A", "B", 1, 1), make_pool("y", "B", "A", 1, 1)}), DomainError);
}

TEST(TokenGraph, InvariantsOnRandomMarkets) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    MarketSpec spec;
    spec.seed = seed;
    spec.n_tokens = 5 + seed;
    spec.n_pools = 2 * spec.n_tokens;
    spec.price_noise = 0.2;
    const auto pools = generate(spec);
    const double fee = 0.001 * static_cast<double>(seed % 7);
    const auto g = build_token_graph(pools, fee);
    ASSERT_EQ(g.edge_count(), 2 * pools.size());
    for (const auto& e : g.edges()) {
      EXPECT_NE(e.from, e.to);
      const auto& back = g.edge(*g.find_edge(e.to, e.from));
      EXPECT_EQ(back.pool_id, e.pool_id);
      EXPECT_NEAR(e.weight + back.weight, -2.0 * std::log(1.0 - fee), 1e-9);
      EXPECT_NEAR(g.spot_rate(e), std::exp(-e.weight), 1e-12 * g.spot_rate(e));
      const double expected = -std::log((1.0 - fee) * e.reserve_to / e.reserve_from);
      EXPECT_LE(std::abs(e.weight - expected), 1e-12 * std::max(1.0, std::abs(expected)));
    }
    // Rebuilding is bitwise identical.
    EXPECT_TRUE(build_token_graph(pools, fee) == g);
  }
}

TEST(TokenGraph, CycleWeightIsNegativeLogOfRateProduct) {
  const auto g = build_token_graph(testing::triangle(1.05), 0.003);
  const std::vector<TokenId> loop{0, 1, 2, 0};
  double w = 0.0, rate = 1.0;
  for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
    const auto& e = g.edge(*g.find_edge(loop[k], loop[k + 1]));
    w += e.weight;
    rate *= g.spot_rate(e);
  }
  EXPECT_NEAR(w, -std::log(rate), 1e-12);
  EXPECT_LT(w, 0.0);
  EXPECT_GT(rate, 1.0);
}

TEST(TokenGraph, CsvDumpHeaderAndRows) {
  std::ostringstream out;
  write_graph_csv(out, build_token_graph({make_pool("p", "A", "B", 100, 200)}, 0.0));
  EXPECT_EQ(out.str(),
            "from_token,to_token,pool_id,reserve_from,reserve_to,weight\n"
            "A,B,p,100,200," + format_double(-std::log(2.0)) + "\n"
            "B,A,p,200,100," + format_double(-std::log(0.5)) + "\n");
}

}  // namespace
}  // namespace dexarb
