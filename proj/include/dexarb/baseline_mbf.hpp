#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "dexarb/mmbf.hpp"
#include "dexarb/token_graph.hpp"

namespace dexarb {

// Rotates a closed loop [a, ..., a] so the smallest token id comes first.
inline std::vector<TokenId> canonical_loop(const std::vector<TokenId>& loop) {
  std::vector<TokenId> ring(loop.begin(), loop.end() - 1);
  std::rotate(ring.begin(), std::min_element(ring.begin(), ring.end()), ring.end());
  ring.push_back(ring.front());
  return ring;
}

struct PredecessorState {
  std::vector<double> dist;
  std::vector<std::optional<TokenId>> pred;
};

// Classical Moore-Bellman-Ford from `source` with |V| - 1 passes, then one
// more pass; every vertex still relaxable is walked back through its
// predecessors |V| times to land inside a cycle ("walk to the root").
// Distinct cycles (by canonical rotation) with negative weight are returned.
inline std::vector<ArbPath> mbf_detect_cycles(const TokenGraph& g, TokenId source) {
  const std::size_t n = g.token_count();
  if (source >= n) throw UnknownTokenError("source token id " + std::to_string(source) + " is unknown");

  PredecessorState st;
  st.dist.assign(n, kInfinity);
  st.pred.assign(n, std::nullopt);
  st.dist[source] = 0.0;

  auto pass = [&](std::vector<TokenId>* relaxed) {
    bool changed = false;
    for (const auto& e : g.edges()) {
      if (st.dist[e.from] == kInfinity) continue;
      const double cand = st.dist[e.from] + e.weight;
      if (cand < st.dist[e.to]) {
        st.dist[e.to] = cand;
        st.pred[e.to] = e.from;
        changed = true;
        if (relaxed) relaxed->push_back(e.to);
      }
    }
    return changed;
  };

  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!pass(nullptr)) return {};
  }
  std::vector<TokenId> relaxed;
  pass(&relaxed);

  std::set<std::vector<TokenId>> seen;
  std::vector<ArbPath> cycles;
  for (TokenId start : relaxed) {
    std::optional<TokenId> x = start;
    for (std::size_t k = 0; k < n && x; ++k) x = st.pred[*x];
    if (!x) continue;

    std::vector<TokenId> rev{*x};
    for (std::optional<TokenId> y = st.pred[*x]; y && *y != *x; y = st.pred[*y]) rev.push_back(*y);
    rev.push_back(*x);
    std::reverse(rev.begin(), rev.end());
    auto canon = canonical_loop(rev);
    if (!seen.insert(canon).second) continue;
    ArbPath p = make_arb_path(canon, g);
    if (p.total_weight < 0.0) cycles.push_back(std::move(p));
  }
  return cycles;
}

// Union of deduplicated cycles over every token as source.
inline std::vector<ArbPath> mbf_detect_all(const TokenGraph& g) {
  std::set<std::vector<TokenId>> seen;
  std::vector<ArbPath> out;
  for (TokenId s = 0; s < g.token_count(); ++s) {
    for (auto& c : mbf_detect_cycles(g, s)) {
      if (seen.insert(c.tokens).second) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace dexarb
