#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dexarb/date.hpp"
#include "dexarb/decimal.hpp"
#include "dexarb/errors.hpp"
#include "dexarb/market_data.hpp"

namespace dexarb {

// Counter-based generator: every draw is a pure function of
// (seed, stream, a, b), built from the SplitMix64 finalizer. Draws for one
// entity never depend on how many other entities exist. This mapping is
// part of the file format contract for generated markets; do not change it.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    return h;
  }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t a, std::uint64_t b = 0) const {
    return mix(mix(mix(mix(seed_) ^ stream) ^ a) ^ b);
  }

  // Uniform on [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t a, std::uint64_t b = 0) const {
    return static_cast<double>(bits(stream, a, b) >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi, std::uint64_t stream, std::uint64_t a, std::uint64_t b = 0) const {
    return lo + (hi - lo) * uniform(stream, a, b);
  }

 private:
  std::uint64_t seed_;
};

namespace rng_stream {
inline constexpr std::uint64_t kTokenPrice = 1;
inline constexpr std::uint64_t kCycleOrder = 2;
inline constexpr std::uint64_t kPairOrder = 3;
inline constexpr std::uint64_t kReserve = 4;
inline constexpr std::uint64_t kNoise = 5;
inline constexpr std::uint64_t kVolume = 6;
inline constexpr std::uint64_t kCyclePick = 7;
}  // namespace rng_stream

struct MarketSpec {
  std::size_t n_tokens = 10;
  std::size_t n_pools = 20;
  double reserve_min = 5e4;  // token units
  double reserve_max = 5e6;
  std::uint64_t seed = 1;
  double fee = 0.003;
  // Relative perturbation of each pool's second reserve away from the
  // price-consistent value; 0 gives a market whose only deviation from the
  // unit prices is the fee.
  double price_noise = 0.0;
  Date date = Date::from_ymd(2021, 1, 1);
  int decimals = 18;

  void validate() const {
    if (n_tokens < 3) throw ConfigError("a market needs at least 3 tokens");
    if (n_pools < n_tokens) throw ConfigError("n_pools must be at least n_tokens");
    if (n_pools > n_tokens * (n_tokens - 1) / 2) throw InfeasibleError("more pools than token pairs");
    if (!(reserve_min > 0.0) || !(reserve_max >= reserve_min)) throw ConfigError("invalid reserve range");
    if (!(fee >= 0.0 && fee < 1.0)) throw ConfigError("fee rate must lie in [0, 1)");
    if (!(price_noise >= 0.0 && price_noise < 1.0)) throw ConfigError("price_noise must lie in [0, 1)");
    if (decimals < 0 || decimals > kMaxTokenDecimals) throw ConfigError("decimals out of range");
  }
};

inline std::string synthetic_address(std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "0x%040zx", i + 1);
  return buf;
}

inline std::string synthetic_symbol(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "TK%03zu", i);
  return buf;
}

// USD unit price of token i, log-uniform on [0.5, 2].
inline double synthetic_unit_price(const MarketSpec& spec, std::size_t i) {
  CounterRng rng(spec.seed);
  return 0.5 * std::pow(4.0, rng.uniform(rng_stream::kTokenPrice, i));
}

// Unordered token pairs (smaller id first) in pool order: a random
// Hamiltonian cycle, which keeps every degree >= 2, then random extra pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> synthetic_topology(const MarketSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed);
  const std::size_t n = spec.n_tokens;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair{rng.bits(rng_stream::kCycleOrder, a), a} < std::pair{rng.bits(rng_stream::kCycleOrder, b), b};
  });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t k = 0; k < n; ++k) {
    auto p = std::minmax(order[k], order[(k + 1) % n]);
    pairs.push_back(p);
    used.insert(p);
  }
  std::vector<std::pair<std::size_t, std::size_t>> rest;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!used.count({a, b})) rest.emplace_back(a, b);
    }
  }
  auto key = [&](const std::pair<std::size_t, std::size_t>& p) {
    return rng.bits(rng_stream::kPairOrder, p.first, p.second);
  };
  std::sort(rest.begin(), rest.end(), [&](const auto& x, const auto& y) {
    return std::pair{key(x), x} < std::pair{key(y), y};
  });
  pairs.insert(pairs.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(spec.n_pools - n));
  return pairs;
}

// Random connected market for spec.date. Reserve0 is uniform in the reserve
// range; reserve1 follows from the two unit prices (times the optional
// noise), and TVL is the USD value of both reserves.
inline std::vector<PoolSnapshot> generate(const MarketSpec& spec) {
  const auto pairs = synthetic_topology(spec);
  CounterRng rng(spec.seed);
  const auto day = static_cast<std::uint64_t>(spec.date.days());
  std::vector<PoolSnapshot> pools;
  pools.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    const double pa = synthetic_unit_price(spec, a);
    const double pb = synthetic_unit_price(spec, b);
    const double ra = rng.uniform(spec.reserve_min, spec.reserve_max, rng_stream::kReserve, k, day);
    const double noise = spec.price_noise * (2.0 * rng.uniform(rng_stream::kNoise, k, day) - 1.0);
    const double rb = ra * pa / pb * (1.0 + noise);

    PoolSnapshot p;
    char id[32];
    std::snprintf(id, sizeof id, "pool-%06zu", k);
    p.pool_id = id;
    p.date = spec.date;
    p.token0 = {synthetic_address(a), synthetic_symbol(a), spec.decimals};
    p.token1 = {synthetic_address(b), synthetic_symbol(b), spec.decimals};
    p.reserve0 = Decimal::from_double(ra, spec.decimals);
    p.reserve1 = Decimal::from_double(rb, spec.decimals);
    p.tvl_usd = p.reserve0_units() * pa + p.reserve1_units() * pb;
    p.volume_usd = p.tvl_usd * rng.uniform(rng_stream::kVolume, k, day);
    p.first_trade_date = spec.date + -365;
    p.last_trade_date = spec.date + 365;
    pools.push_back(std::move(p));
  }
  return pools;
}

inline PriceTable synthetic_prices(const MarketSpec& spec) {
  PriceTable t;
  for (std::size_t i = 0; i < spec.n_tokens; ++i) t.set(spec.date, synthetic_address(i), synthetic_unit_price(spec, i));
  return t;
}

namespace detail {

struct PoolSide {
  std::size_t index;
  bool forward;  // trade direction token0 -> token1
};

inline std::optional<PoolSide> find_pool(const std::vector<PoolSnapshot>& pools, const std::string& from,
                                         const std::string& to) {
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (pools[i].token0.address == from && pools[i].token1.address == to) return PoolSide{i, true};
    if (pools[i].token1.address == from && pools[i].token0.address == to) return PoolSide{i, false};
  }
  return std::nullopt;
}

}  // namespace detail

// Fee-free reserve-ratio product around a cycle of token addresses (open
// form, closure implied).
inline double cycle_reserve_product(const std::vector<PoolSnapshot>& pools, const std::vector<std::string>& cycle) {
  double product = 1.0;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    auto side = detail::find_pool(pools, cycle[k], cycle[(k + 1) % cycle.size()]);
    if (!side) throw DomainError("no pool joins " + cycle[k] + " and " + cycle[(k + 1) % cycle.size()]);
    const auto& p = pools[side->index];
    product *= side->forward ? p.reserve1_units() / p.reserve0_units() : p.reserve0_units() / p.reserve1_units();
  }
  return product;
}

// Rescales the output reserve of the cycle's first pool so the reserve-ratio
// product around the cycle equals `rate_product`; the spot-rate product is
// then rate_product * (1 - fee)^len. TVL is left as recorded.
inline std::vector<PoolSnapshot> inject_arbitrage(std::vector<PoolSnapshot> pools, const std::vector<std::string>& cycle,
                                                  double rate_product) {
  if (cycle.size() < 3) throw DomainError("injected cycles need at least 3 tokens");
  if (std::set<std::string>(cycle.begin(), cycle.end()).size() != cycle.size()) {
    throw DomainError("injected cycle repeats a token");
  }
  if (!(rate_product > 1.0)) throw DomainError("rate_product must exceed 1");
  const double factor = rate_product / cycle_reserve_product(pools, cycle);
  auto side = *detail::find_pool(pools, cycle[0], cycle[1]);
  auto& p = pools[side.index];
  if (side.forward) {
    p.reserve1 = Decimal::from_double(p.reserve1_units() * factor, p.token1.decimals);
  } else {
    p.reserve0 = Decimal::from_double(p.reserve0_units() * factor, p.token0.decimals);
  }
  return pools;
}

// Up to `count` token-disjoint simple cycles of exactly `length` tokens,
// searched from start tokens in seeded random order.
inline std::vector<std::vector<std::string>> find_disjoint_cycles(const std::vector<PoolSnapshot>& pools,
                                                                  std::size_t length, std::size_t count,
                                                                  std::uint64_t seed) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& p : pools) {
    adj[p.token0.address].push_back(p.token1.address);
    adj[p.token1.address].push_back(p.token0.address);
  }
  for (auto& [_, v] : adj) std::sort(v.begin(), v.end());
  std::vector<std::string> starts;
  for (const auto& [a, _] : adj) starts.push_back(a);
  CounterRng rng(seed);
  std::sort(starts.begin(), starts.end(), [&](const std::string& x, const std::string& y) {
    auto kx = rng.bits(rng_stream::kCyclePick, CounterRng::fnv1a(x));
    auto ky = rng.bits(rng_stream::kCyclePick, CounterRng::fnv1a(y));
    return std::pair{kx, x} < std::pair{ky, y};
  });

  std::set<std::string> used;
  std::vector<std::vector<std::string>> found;
  std::vector<std::string> stack;
  std::function<bool()> dfs = [&]() -> bool {
    const std::string here = stack.back();
    for (const auto& next : adj[here]) {
      if (stack.size() == length) {
        if (next == stack.front()) return true;
        continue;
      }
      if (used.count(next) || std::find(stack.begin(), stack.end(), next) != stack.end()) continue;
      stack.push_back(next);
      if (dfs()) return true;
      stack.pop_back();
    }
    return false;
  };
  for (const auto& s : starts) {
    if (found.size() >= count) break;
    if (used.count(s)) continue;
    stack = {s};
    if (dfs()) {
      found.push_back(stack);
      used.insert(stack.begin(), stack.end());
    }
  }
  return found;
}

}  // namespace dexarb
