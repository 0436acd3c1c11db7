#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "dexarb/amm.hpp"
#include "dexarb/date.hpp"
#include "dexarb/errors.hpp"
#include "dexarb/market_data.hpp"
#include "dexarb/mmbf.hpp"
#include "dexarb/token_graph.hpp"

namespace dexarb {

struct OptimizerParams {
  double seed_fraction = 1e-9;  // initial bracket: first-leg reserve_in * seed_fraction
  double rel_tolerance = 1e-9;
  int max_iterations = 200;
};

enum class Valuation { start_token, usd };

struct Opportunity {
  ArbPath path;
  double optimal_input = 0.0;   // start-token units
  double output = 0.0;          // end-token units
  double target_marginal = 1.0;
  double marginal_at_opt = 0.0;
  // Profit expressed in start-token units (output / target_marginal - input).
  double profit_token = 0.0;
  // profit_token for loops; USD for priced non-loops.
  double profit_numeraire = 0.0;
  Valuation numeraire = Valuation::start_token;
  // Set when the price table covers the profit-bearing tokens.
  std::optional<double> profit_usd;
};

// Marginal output rate at which extra input stops paying off. Loops: 1.
// Non-loops: P_start / P_end from the price table when both prices exist;
// otherwise the reserve ratio R_end / R_start of a pool joining the endpoints.
inline double target_marginal(const ArbPath& path, const TokenGraph& g, const PriceTable* prices, Date date,
                              bool* priced = nullptr) {
  if (priced) *priced = false;
  if (path.kind == PathKind::loop) return 1.0;
  const auto& from = g.token(path.start()).address;
  const auto& to = g.token(path.end()).address;
  if (prices) {
    auto ps = prices->find(date, from);
    auto pe = prices->find(date, to);
    if (ps && pe) {
      if (priced) *priced = true;
      return *ps / *pe;
    }
  }
  if (auto e = g.find_edge(path.start(), path.end())) return g.edge(*e).reserve_to / g.edge(*e).reserve_from;
  throw PriceMissingError("no price for the endpoints of a non-loop from " + from + " to " + to);
}

inline double profit_usd(const Opportunity& opp, const TokenGraph& g, const PriceTable& prices, Date date) {
  const double ps = prices.at(date, g.token(opp.path.start()).address);
  if (opp.path.kind == PathKind::loop) return (opp.output - opp.optimal_input) * ps;
  const double pe = prices.at(date, g.token(opp.path.end()).address);
  return opp.output * pe - opp.optimal_input * ps;
}

struct LegOptimum {
  double input = 0.0;
  double output = 0.0;
  double marginal = 0.0;
};

// Input maximizing path_out(dx) - target * dx. Because path output is
// concave, the optimum is the root of path_marginal(dx) = target; it is
// bracketed by doubling from a tiny seed and then bisected. Absent when even
// the first unit does not beat the target.
inline std::optional<LegOptimum> maximize_along(std::span<const SwapLeg> legs, double target,
                                                const OptimizerParams& params = {}) {
  auto marginal = [&](double dx) { return path_marginal(legs, dx); };
  if (!(marginal(0.0) > target)) return std::nullopt;

  double lo = 0.0;
  double hi = legs.front().reserve_in * params.seed_fraction;
  while (marginal(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::nullopt;
  }
  for (int it = 0; it < params.max_iterations && hi - lo > params.rel_tolerance * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (marginal(mid) > target ? lo : hi) = mid;
  }
  LegOptimum opt;
  opt.input = 0.5 * (lo + hi);
  opt.output = path_out(legs, opt.input);
  opt.marginal = marginal(opt.input);
  return opt;
}

// Sizes the trade along `path`: target marginal 1 for loops, the external
// price ratio (or direct-pool reserve ratio) for non-loops.
inline std::optional<Opportunity> optimize(const ArbPath& path, const TokenGraph& g, const PriceTable* prices = nullptr,
                                           Date date = {}, const OptimizerParams& params = {}) {
  const auto legs = legs_along(path, g);
  bool priced = false;
  const double target = target_marginal(path, g, prices, date, &priced);
  const auto best = maximize_along(legs, target, params);
  if (!best) return std::nullopt;

  Opportunity opp;
  opp.path = path;
  opp.optimal_input = best->input;
  opp.output = best->output;
  opp.target_marginal = target;
  opp.marginal_at_opt = best->marginal;
  opp.profit_token = opp.output / target - opp.optimal_input;
  if (!(opp.profit_token > 0.0)) return std::nullopt;
  if (priced) {
    opp.numeraire = Valuation::usd;
    opp.profit_numeraire = opp.output * prices->at(date, g.token(path.end()).address) -
                           opp.optimal_input * prices->at(date, g.token(path.start()).address);
  } else {
    opp.profit_numeraire = opp.profit_token;
  }
  if (prices && (priced || path.kind == PathKind::loop)) {
    if (auto ps = prices->find(date, g.token(path.start()).address)) {
      opp.profit_usd = path.kind == PathKind::loop ? (opp.output - opp.optimal_input) * *ps : opp.profit_numeraire;
    }
  }
  return opp;
}
}  // namespace dexarb
