#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dexarb/decimal.hpp"
#include "dexarb/errors.hpp"
#include "dexarb/market_data.hpp"

namespace dexarb {

using TokenId = std::uint32_t;

inline constexpr double kUniswapV2Fee = 0.003;

struct DirectedEdge {
  TokenId from = 0;
  TokenId to = 0;
  std::string pool_id;
  double reserve_from = 0.0;  // token units, decimals applied
  double reserve_to = 0.0;
  double weight = 0.0;        // -log((1 - fee) * reserve_to / reserve_from)

  bool operator==(const DirectedEdge&) const = default;
};

inline double edge_weight(double reserve_from, double reserve_to, double fee) {
  return -std::log((1.0 - fee) * reserve_to / reserve_from);
}

// Marginal exchange rate at zero input; exp(-weight).
inline double spot_rate(const DirectedEdge& e, double fee) { return (1.0 - fee) * e.reserve_to / e.reserve_from; }

// Directed token exchange graph. Every pool contributes both directions.
// Token ids are dense and follow ascending address order; edges are stored
// sorted by (from, to) so out-edges of a token are contiguous.
class TokenGraph {
 public:
  TokenGraph() = default;

  std::size_t token_count() const { return tokens_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t pool_count() const { return edges_.size() / 2; }
  double fee() const { return fee_; }
  bool empty() const { return tokens_.empty(); }

  const std::vector<TokenMeta>& tokens() const { return tokens_; }
  const TokenMeta& token(TokenId id) const { return tokens_.at(id); }
  const std::vector<DirectedEdge>& edges() const { return edges_; }
  const DirectedEdge& edge(std::size_t index) const { return edges_[index]; }

  std::span<const DirectedEdge> out_edges(TokenId t) const {
    return {edges_.data() + out_begin_[t], edges_.data() + out_begin_[t + 1]};
  }
  std::size_t out_begin(TokenId t) const { return out_begin_[t]; }
  std::size_t out_end(TokenId t) const { return out_begin_[t + 1]; }

  // Undirected pool degree; equals the out-degree with one pool per pair.
  std::size_t degree(TokenId t) const { return out_begin_[t + 1] - out_begin_[t]; }

  // Index into edges(), if a pool joins `from` and `to`.
  std::optional<std::size_t> find_edge(TokenId from, TokenId to) const {
    if (from >= token_count()) return std::nullopt;
    auto first = edges_.begin() + static_cast<std::ptrdiff_t>(out_begin_[from]);
    auto last = edges_.begin() + static_cast<std::ptrdiff_t>(out_begin_[from + 1]);
    auto it = std::lower_bound(first, last, to, [](const DirectedEdge& e, TokenId t) { return e.to < t; });
    if (it == last || it->to != to) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
  }

  std::optional<TokenId> find_token(const std::string& address) const {
    auto it = std::lower_bound(tokens_.begin(), tokens_.end(), address,
                               [](const TokenMeta& m, const std::string& a) { return m.address < a; });
    if (it == tokens_.end() || it->address != address) return std::nullopt;
    return static_cast<TokenId>(it - tokens_.begin());
  }

  double spot_rate(const DirectedEdge& e) const { return dexarb::spot_rate(e, fee_); }

  bool operator==(const TokenGraph&) const = default;

 private:
  friend TokenGraph build_token_graph(const std::vector<PoolSnapshot>&, double);

  std::vector<TokenMeta> tokens_;
  std::vector<DirectedEdge> edges_;
  std::vector<std::size_t> out_begin_{0};
  double fee_ = kUniswapV2Fee;
};

inline TokenGraph build_token_graph(const std::vector<PoolSnapshot>& pools, double fee = kUniswapV2Fee) {
  if (!(fee >= 0.0 && fee < 1.0)) throw ConfigError("fee rate must lie in [0, 1)");

  std::string rejected;
  for (const auto& p : pools) {
    if (p.reserve0.is_zero() || p.reserve1.is_zero() || !(p.reserve0_units() > 0.0) || !(p.reserve1_units() > 0.0)) {
      rejected += (rejected.empty() ? "" : ", ") + p.pool_id;
    }
  }
  if (!rejected.empty()) throw RejectedPoolError("pools with zero reserve: " + rejected);

  TokenGraph g;
  g.fee_ = fee;
  for (const auto& p : pools) {
    g.tokens_.push_back(p.token0);
    g.tokens_.push_back(p.token1);
  }
  std::stable_sort(g.tokens_.begin(), g.tokens_.end(),
                   [](const TokenMeta& a, const TokenMeta& b) { return a.address < b.address; });
  g.tokens_.erase(std::unique(g.tokens_.begin(), g.tokens_.end(),
                              [](const TokenMeta& a, const TokenMeta& b) { return a.address == b.address; }),
                  g.tokens_.end());

  g.edges_.reserve(2 * pools.size());
  for (const auto& p : pools) {
    const TokenId a = *g.find_token(p.token0.address);
    const TokenId b = *g.find_token(p.token1.address);
    const double ra = p.reserve0_units();
    const double rb = p.reserve1_units();
    g.edges_.push_back({a, b, p.pool_id, ra, rb, edge_weight(ra, rb, fee)});
    g.edges_.push_back({b, a, p.pool_id, rb, ra, edge_weight(rb, ra, fee)});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const DirectedEdge& x, const DirectedEdge& y) {
    return x.from != y.from ? x.from < y.from : x.to < y.to;
  });
  for (std::size_t i = 1; i < g.edges_.size(); ++i) {
    if (g.edges_[i].from == g.edges_[i - 1].from && g.edges_[i].to == g.edges_[i - 1].to) {
      throw DomainError("pools " + g.edges_[i - 1].pool_id + " and " + g.edges_[i].pool_id +
                        " join the same token pair");
    }
  }

  g.out_begin_.assign(g.tokens_.size() + 1, 0);
  for (const auto& e : g.edges_) ++g.out_begin_[e.from + 1];
  for (std::size_t t = 0; t < g.tokens_.size(); ++t) g.out_begin_[t + 1] += g.out_begin_[t];
  return g;
}

// Debug dump: `from_token,to_token,pool_id,reserve_from,reserve_to,weight`.
inline void write_graph_csv(std::ostream& out, const TokenGraph& g) {
  out << "from_token,to_token,pool_id,reserve_from,reserve_to,weight\n";
  for (const auto& e : g.edges()) {
    out << g.token(e.from).address << ',' << g.token(e.to).address << ',' << e.pool_id << ','
        << format_double(e.reserve_from) << ',' << format_double(e.reserve_to) << ',' << format_double(e.weight)
        << '\n';
  }
}

}  // namespace dexarb
