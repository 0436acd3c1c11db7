#pragma once

// Test-only helpers: hand-built pools and independent oracles. Nothing here
// calls into the code paths the oracles check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dexarb.hpp"

namespace dexarb::testing {

inline PoolSnapshot make_pool(const std::string& id, const std::string& a, const std::string& b, double ra, double rb,
                              double tvl = 1e6, Date date = Date::from_ymd(2021, 1, 1)) {
  PoolSnapshot p;
  p.pool_id = id;
  p.date = date;
  p.token0 = {a, a, 0};
  p.token1 = {b, b, 0};
  p.reserve0 = Decimal::from_double(ra);
  p.reserve1 = Decimal::from_double(rb);
  p.tvl_usd = tvl;
  p.volume_usd = 0.0;
  p.first_trade_date = date + -10;
  p.last_trade_date = date + 10;
  return p;
}

// Balanced triangle A, B, C whose A->B->C->A reserve-ratio product is `product`.
inline std::vector<PoolSnapshot> triangle(double product, Date date = Date::from_ymd(2021, 1, 1)) {
  return {make_pool("p-ab", "A", "B", 1000.0, 1000.0 * product, 1e6, date),
          make_pool("p-bc", "B", "C", 1000.0, 1000.0, 1e6, date),
          make_pool("p-ac", "A", "C", 1000.0, 1000.0, 1e6, date)};
}

// Undirected neighbour sets straight from the pool list.
inline std::map<std::string, std::set<std::string>> neighbours(const std::vector<PoolSnapshot>& pools) {
  std::map<std::string, std::set<std::string>> n;
  for (const auto& p : pools) {
    n[p.token0.address].insert(p.token1.address);
    n[p.token1.address].insert(p.token0.address);
  }
  return n;
}

// Every non-backtracking transition (i, j, l) by address.
inline std::set<std::tuple<std::string, std::string, std::string>> enumerate_transitions(
    const std::vector<PoolSnapshot>& pools) {
  const auto n = neighbours(pools);
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& [i, ni] : n) {
    for (const auto& j : ni) {
      for (const auto& l : n.at(j)) {
        if (l != i) out.emplace(i, j, l);
      }
    }
  }
  return out;
}

inline std::set<std::string> common_neighbours(const std::vector<PoolSnapshot>& pools, const std::string& a,
                                               const std::string& b) {
  const auto n = neighbours(pools);
  std::set<std::string> out;
  std::set_intersection(n.at(a).begin(), n.at(a).end(), n.at(b).begin(), n.at(b).end(),
                        std::inserter(out, out.begin()));
  return out;
}

inline std::size_t sum_degree_squares(const std::vector<PoolSnapshot>& pools) {
  std::size_t s = 0;
  for (const auto& [_, ni] : neighbours(pools)) s += ni.size() * ni.size();
  return s;
}

struct BruteForce {
  std::vector<double> best_path;  // min over simple source->t paths, +inf if none
  double best_loop = std::numeric_limits<double>::infinity();  // min simple loop through source, >= 3 swaps
};

// Exhaustive DFS over simple paths from `source` with at most `max_swaps` swaps.
inline BruteForce brute_force(const TokenGraph& g, TokenId source, std::size_t max_swaps) {
  BruteForce bf;
  bf.best_path.assign(g.token_count(), std::numeric_limits<double>::infinity());
  std::vector<bool> on(g.token_count(), false);
  on[source] = true;
  std::function<void(TokenId, double, std::size_t)> dfs = [&](TokenId at, double w, std::size_t swaps) {
    if (swaps == max_swaps) return;
    for (const auto& e : g.edges()) {
      if (e.from != at) continue;
      const double nw = w + e.weight;
      if (e.to == source) {
        if (swaps + 1 >= 3) bf.best_loop = std::min(bf.best_loop, nw);
        continue;
      }
      if (on[e.to]) continue;
      bf.best_path[e.to] = std::min(bf.best_path[e.to], nw);
      on[e.to] = true;
      dfs(e.to, nw, swaps + 1);
      on[e.to] = false;
    }
  };
  dfs(source, 0.0, 0);
  return bf;
}

inline bool is_simple(const ArbPath& p) {
  std::vector<TokenId> body(p.tokens.begin(), p.tokens.end() - (p.kind == PathKind::loop ? 1 : 0));
  std::sort(body.begin(), body.end());
  return std::adjacent_find(body.begin(), body.end()) == body.end();
}

template <typename F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Argmax of f over `points + 1` evenly spaced samples of [0, upper].
template <typename F>
double grid_argmax(F&& f, double upper, std::size_t points) {
  double best_x = 0.0;
  double best = f(0.0);
  for (std::size_t k = 1; k <= points; ++k) {
    const double x = upper * static_cast<double>(k) / static_cast<double>(points);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

// Swap fold written directly from the invariant (x + (1 - fee) dx)(y - dy) = x y.
// Constant-product invariant form in quad precision. Deep in the saturated
// region a double forward evaluation loses most of its digits to the
// rounding of near-reserve outputs, so the oracle carries 113 bits.
using Quad = __float128;

inline Quad reference_path_out_q(const std::vector<SwapLeg>& legs, Quad dx) {
  Quad amount = dx;
  for (const auto& l : legs) {
    const Quad x = l.reserve_in, y = l.reserve_out;
    const Quad eff = (Quad(1) - Quad(l.fee)) * amount;
    amount = y - x * y / (x + eff);
  }
  return amount;
}

inline double reference_path_out(const std::vector<SwapLeg>& legs, double dx) {
  return static_cast<double>(reference_path_out_q(legs, dx));
}

// Fourth-order central difference of the quad oracle.
inline double reference_path_marginal(const std::vector<SwapLeg>& legs, double dx) {
  const Quad x = dx, h = Quad(dx) * Quad(1e-4) + Quad(1e-12);
  const auto f = [&](Quad v) { return reference_path_out_q(legs, v); };
  const Quad d = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
  return static_cast<double>(d);
}

}  // namespace dexarb::testing
