#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

namespace dexarb {
namespace {

std::string serialize(const std::vector<PoolSnapshot>& pools) {
  std::ostringstream out;
  write_snapshots(out, pools);
  return out.str();
}

TEST(CounterRng, MixIsSplitMix64) {
  // First SplitMix64 output for state 0.
  EXPECT_EQ(CounterRng::mix(0), 0xe220a8397b1dcdafULL);
  CounterRng a(5), b(5);
  EXPECT_EQ(a.bits(1, 2, 3), b.bits(1, 2, 3));
  EXPECT_NE(a.bits(1, 2, 3), a.bits(1, 3, 2));
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform(9, static_cast<std::uint64_t>(i));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Generate, TriangleIsDeterministic) {
  MarketSpec spec;
  spec.n_tokens = 3;
  spec.n_pools = 3;
  spec.seed = 42;
  const auto pools = generate(spec);
  ASSERT_EQ(pools.size(), 3u);
  EXPECT_EQ(testing::neighbours(pools).size(), 3u);
  EXPECT_EQ(serialize(pools), serialize(generate(spec)));
}

TEST(Generate, CompleteGraphAndInfeasibleSpec) {
  MarketSpec spec;
  spec.n_tokens = 7;
  spec.n_pools = 21;
  for (const auto& [_, n] : testing::neighbours(generate(spec))) EXPECT_EQ(n.size(), 6u);
  spec.n_pools = 22;
  EXPECT_THROW(generate(spec), InfeasibleError);
  spec.n_pools = 6;
  EXPECT_THROW(generate(spec), ConfigError);
}

TEST(Generate, SeedsDiffer) {
  MarketSpec a, b;
  b.seed = a.seed + 1;
  auto pa = generate(a), pb = generate(b);
  std::set<std::string> ra, rb;
  for (const auto& p : pa) ra.insert(p.reserve0.str());
  for (const auto& p : pb) rb.insert(p.reserve0.str());
  EXPECT_NE(ra, rb);
}

TEST(Generate, AddingPoolsKeepsEarlierDraws) {
  MarketSpec small;
  small.n_tokens = 12;
  small.n_pools = 20;
  MarketSpec large = small;
  large.n_pools = 30;
  const auto a = generate(small);
  const auto b = generate(large);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(Generate, PassesFilterUnchanged) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MarketSpec spec;
    spec.seed = seed;
    spec.n_tokens = 5 + 4 * seed;
    spec.n_pools = 3 * spec.n_tokens;
    const auto pools = generate(spec);
    for (const auto& p : pools) EXPECT_GT(p.tvl_usd, kDefaultTvlFloorUsd);
    EXPECT_EQ(filter_pools(pools, spec.date), pools);
  }
}

TEST(Generate, PricesConsistentWithReserves) {
  MarketSpec spec;
  const auto pools = generate(spec);
  const auto prices = synthetic_prices(spec);
  for (const auto& p : pools) {
    const double pa = prices.at(spec.date, p.token0.address);
    const double pb = prices.at(spec.date, p.token1.address);
    EXPECT_NEAR(p.reserve1_units() / p.reserve0_units(), pa / pb, 1e-12 * pa / pb);
  }
}

TEST(Inject, ExactRateProduct) {
  MarketSpec spec;
  spec.n_tokens = 10;
  spec.n_pools = 25;
  const auto pools = generate(spec);
  const auto cycles = find_disjoint_cycles(pools, 3, 2, 1);
  ASSERT_EQ(cycles.size(), 2u);
  auto injected = pools;
  for (const auto& c : cycles) injected = inject_arbitrage(injected, c, 1.05);
  std::size_t changed = 0;
  for (std::size_t k = 0; k < pools.size(); ++k) changed += !(pools[k] == injected[k]);
  EXPECT_EQ(changed, 2u);
  for (const auto& c : cycles) {
    EXPECT_NEAR(cycle_reserve_product(injected, c), 1.05, 1.05e-12);
    std::set<std::string> tokens(c.begin(), c.end());
    EXPECT_EQ(tokens.size(), 3u);
  }
}

TEST(Inject, DetectorSeesConstructedWeight) {
  const auto base = testing::triangle(1.0);
  const auto pools = inject_arbitrage(base, {"A", "B", "C"}, 1.05);
  const auto g0 = build_token_graph(pools, 0.0);
  const auto r0 = detect(add_source_vertex(LineGraph(g0), 0));
  ASSERT_TRUE(r0.loop);
  EXPECT_NEAR(r0.loop->total_weight, -std::log(1.05), 1e-9);

  const auto g = build_token_graph(pools, 0.003);
  const LineGraph lg(g);
  const auto r = detect(add_source_vertex(lg, 0));
  ASSERT_TRUE(r.loop);
  EXPECT_NEAR(r.loop->total_weight, -std::log(1.05) - 3 * std::log(0.997), 1e-9);
}

TEST(Inject, TinyEdgeIsEatenByFees) {
  const auto pools = inject_arbitrage(testing::triangle(1.0), {"A", "B", "C"}, 1.0 + 1e-12);
  const auto g = build_token_graph(pools, 0.003);
  const auto loop = make_arb_path({0, 1, 2, 0}, g);
  EXPECT_GT(loop.total_weight, 0.0);
  EXPECT_FALSE(detect(add_source_vertex(LineGraph(g), 0)).loop);
}

TEST(Inject, Rejections) {
  const auto pools = testing::triangle(1.0);
  EXPECT_THROW(inject_arbitrage(pools, {"A", "B"}, 1.05), DomainError);
  EXPECT_THROW(inject_arbitrage(pools, {"A", "B", "C"}, 1.0), DomainError);
  EXPECT_THROW(inject_arbitrage(pools, {"A", "B", "D"}, 1.05), DomainError);
  EXPECT_THROW(inject_arbitrage(pools, {"A", "B", "A"}, 1.05), DomainError);
}

}  // namespace
}  // namespace dexarb
