#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dexarb/errors.hpp"
#include "dexarb/line_graph.hpp"
#include "dexarb/token_graph.hpp"

namespace dexarb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kWeightTolerance = 1e-9;

enum class PathKind { loop, non_loop };

inline const char* to_string(PathKind k) { return k == PathKind::loop ? "loop" : "non-loop"; }

// Token path through the exchange graph. `pools[k]` joins tokens[k] and
// tokens[k + 1].
struct ArbPath {
  std::vector<TokenId> tokens;
  std::vector<std::string> pools;
  double total_weight = 0.0;
  PathKind kind = PathKind::non_loop;

  std::size_t length() const { return tokens.empty() ? 0 : tokens.size() - 1; }
  TokenId start() const { return tokens.front(); }
  TokenId end() const { return tokens.back(); }

  bool operator==(const ArbPath&) const = default;
};

// Resolves pools and sums weights left to right along `tokens`.
inline ArbPath make_arb_path(const std::vector<TokenId>& tokens, const TokenGraph& g) {
  if (tokens.size() < 2) throw CorruptionError("a path needs at least two tokens");
  ArbPath p;
  p.tokens = tokens;
  p.kind = tokens.front() == tokens.back() ? PathKind::loop : PathKind::non_loop;
  for (std::size_t k = 0; k + 1 < tokens.size(); ++k) {
    auto e = g.find_edge(tokens[k], tokens[k + 1]);
    if (!e) {
      throw CorruptionError("no pool joins token " + std::to_string(tokens[k]) + " and " +
                            std::to_string(tokens[k + 1]));
    }
    p.pools.push_back(g.edge(*e).pool_id);
    p.total_weight += g.edge(*e).weight;
  }
  return p;
}

// Per-line-vertex relaxation state. Indexed by SourcedLineGraph vertex id;
// the source vertex is the last entry.
struct RelaxState {
  std::vector<double> dis;
  std::vector<std::vector<TokenId>> path;
  std::size_t passes = 0;  // passes that ran before convergence or the cap
};

struct DetectionResult {
  TokenId source = 0;
  std::vector<double> d_token;               // +inf if unreached
  std::vector<std::vector<TokenId>> p_token;  // tokens from source to t
  std::optional<ArbPath> loop;               // present only if strictly negative
};

// Bellman-Ford-style relaxation over the source-augmented line graph.
// (i, j) -> (j, l) relaxes only if l is not already on the stored path of
// (i, j), unless l is the source token, which closes a loop. Closed loops are
// terminal. Passes stop early once one makes no update, which cannot change
// the outcome of later passes.
inline RelaxState relax(const SourcedLineGraph& slg, std::optional<std::size_t> rounds = std::nullopt) {
  const std::size_t passes = rounds.value_or(slg.origin().token_count());
  const TokenId v0 = slg.source_token();
  const LineVertexId src = slg.source_vertex();
  const std::size_t n = slg.vertex_count();

  RelaxState st;
  st.dis.assign(n, kInfinity);
  st.path.assign(n, {});
  st.dis[src] = 0.0;
  st.path[src] = {v0};

  auto relax_from = [&](LineVertexId u) {
    bool changed = false;
    const double du = st.dis[u];
    if (du == kInfinity) return false;
    if (u != src && slg.vertex(u).second == v0) return false;
    const auto succ = slg.successors(u);
    const auto w = slg.successor_weights(u);
    for (std::size_t k = 0; k < succ.size(); ++k) {
      const LineVertexId v = succ[k];
      const double cand = du + w[k];
      if (!(cand < st.dis[v])) continue;
      const TokenId l = slg.vertex(v).second;
      const auto& pu = st.path[u];
      if (l != v0 && std::find(pu.begin(), pu.end(), l) != pu.end()) continue;
      st.dis[v] = cand;
      auto& pv = st.path[v];
      pv.reserve(pu.size() + 1);
      pv.assign(pu.begin(), pu.end());
      pv.push_back(l);
      changed = true;
    }
    return changed;
  };

  for (std::size_t m = 0; m < passes; ++m) {
    bool changed = relax_from(src);
    for (LineVertexId u = 0; u < src; ++u) changed = relax_from(u) || changed;
    ++st.passes;
    if (!changed) break;
  }
  return st;
}

// Aggregates line-vertex distances to per-token minima keyed by each
// vertex's last token. The source vertex itself does not count as a path.
inline DetectionResult aggregate(const SourcedLineGraph& slg, const RelaxState& st) {
  const auto& g = slg.origin();
  DetectionResult r;
  r.source = slg.source_token();
  r.d_token.assign(g.token_count(), kInfinity);
  r.p_token.assign(g.token_count(), {});
  for (LineVertexId v = 0; v < slg.source_vertex(); ++v) {
    const TokenId t = slg.vertex(v).second;
    if (st.dis[v] < r.d_token[t]) {
      r.d_token[t] = st.dis[v];
      r.p_token[t] = st.path[v];
    }
  }
  if (r.d_token[r.source] < 0.0) r.loop = make_arb_path(r.p_token[r.source], g);
  return r;
}

inline DetectionResult detect(const SourcedLineGraph& slg, std::optional<std::size_t> rounds = std::nullopt) {
  return aggregate(slg, relax(slg, rounds));
}

// Runs detect with every token as source, each on a private overlay of the
// shared line graph. Results are ordered by source id.
inline std::vector<DetectionResult> detect_all(const LineGraph& lg, std::optional<std::size_t> rounds = std::nullopt,
                                               unsigned threads = 0) {
  const std::size_t n = lg.vertex_count() == 0 ? 0 : lg.origin().token_count();
  std::vector<DetectionResult> results(n);
  if (n == 0) return results;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s; (s = next.fetch_add(1)) < n;) {
      results[s] = detect(SourcedLineGraph(lg, static_cast<TokenId>(s)), rounds);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return results;
}

// Converts a result into ArbPaths: the loop (if any) first, then one
// non-loop per reached token in id order. Each path's weight is recomputed
// from the graph and must agree with the stored distance.
inline std::vector<ArbPath> extract_paths(const DetectionResult& r, const TokenGraph& g) {
  std::vector<ArbPath> out;
  auto checked = [&](TokenId t) {
    ArbPath p = make_arb_path(r.p_token.at(t), g);
    if (p.tokens.front() != r.source || p.tokens.back() != t) {
      throw CorruptionError("stored path for token " + std::to_string(t) + " has wrong endpoints");
    }
    if (!(std::abs(p.total_weight - r.d_token[t]) <= kWeightTolerance)) {
      throw CorruptionError("stored distance for token " + std::to_string(t) + " disagrees with its path");
    }
    return p;
  };
  if (r.loop) out.push_back(checked(r.source));
  for (TokenId t = 0; t < r.d_token.size(); ++t) {
    if (t == r.source || r.d_token[t] == kInfinity) continue;
    out.push_back(checked(t));
  }
  return out;
}

}  // namespace dexarb
