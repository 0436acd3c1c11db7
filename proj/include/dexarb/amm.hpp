#pragma once

#include <span>
#include <vector>

#include "dexarb/errors.hpp"
#include "dexarb/mmbf.hpp"
#include "dexarb/token_graph.hpp"

namespace dexarb {

// One constant-product swap: (x + (1 - fee) dx)(y - dy) = x y.
struct SwapLeg {
  double reserve_in = 0.0;
  double reserve_out = 0.0;
  double fee = 0.0;

  void validate() const {
    if (!(reserve_in > 0.0) || !(reserve_out > 0.0)) throw DomainError("swap reserves must be positive");
    if (!(fee >= 0.0 && fee < 1.0)) throw DomainError("swap fee must lie in [0, 1)");
  }

  double spot_rate() const { return (1.0 - fee) * reserve_out / reserve_in; }
};

inline double swap_out(const SwapLeg& leg, double dx) {
  leg.validate();
  if (!(dx >= 0.0)) throw DomainError("swap input must be non-negative");
  const double eff = (1.0 - leg.fee) * dx;
  return leg.reserve_out * eff / (leg.reserve_in + eff);
}

// d(swap_out)/d(dx).
inline double swap_marginal(const SwapLeg& leg, double dx) {
  leg.validate();
  if (!(dx >= 0.0)) throw DomainError("swap input must be non-negative");
  const double denom = leg.reserve_in + (1.0 - leg.fee) * dx;
  return (1.0 - leg.fee) * leg.reserve_in * leg.reserve_out / (denom * denom);
}

inline double path_out(std::span<const SwapLeg> legs, double dx) {
  if (legs.empty()) throw DomainError("a swap path needs at least one leg");
  double amount = dx;
  for (const auto& leg : legs) amount = swap_out(leg, amount);
  return amount;
}

// Chain rule over the intermediate amounts.
inline double path_marginal(std::span<const SwapLeg> legs, double dx) {
  if (legs.empty()) throw DomainError("a swap path needs at least one leg");
  double amount = dx;
  double slope = 1.0;
  for (const auto& leg : legs) {
    slope *= swap_marginal(leg, amount);
    amount = swap_out(leg, amount);
  }
  return slope;
}

// Snapshot reserves of each pool along the path, in trade direction.
inline std::vector<SwapLeg> legs_along(const ArbPath& path, const TokenGraph& g) {
  std::vector<SwapLeg> legs;
  legs.reserve(path.length());
  for (std::size_t k = 0; k + 1 < path.tokens.size(); ++k) {
    auto e = g.find_edge(path.tokens[k], path.tokens[k + 1]);
    if (!e) throw CorruptionError("path uses a token pair with no pool");
    legs.push_back({g.edge(*e).reserve_from, g.edge(*e).reserve_to, g.fee()});
  }
  return legs;
}

}  // namespace dexarb
