#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dexarb/date.hpp"
#include "dexarb/decimal.hpp"
#include "dexarb/errors.hpp"

namespace dexarb {

inline constexpr int kMaxTokenDecimals = 77;
inline constexpr double kDefaultTvlFloorUsd = 20'000.0;
inline constexpr std::size_t kDefaultMaxTokens = 100;

struct TokenMeta {
  std::string address;
  std::string symbol;
  int decimals = 18;

  bool operator==(const TokenMeta&) const = default;
};

// One liquidity pool on one day. Reserves are raw on-chain units.
struct PoolSnapshot {
  std::string pool_id;
  Date date;
  TokenMeta token0;
  TokenMeta token1;
  Decimal reserve0;
  Decimal reserve1;
  double tvl_usd = 0.0;
  double volume_usd = 0.0;
  Date first_trade_date;
  Date last_trade_date;

  double reserve0_units() const { return reserve0.to_double(token0.decimals); }
  double reserve1_units() const { return reserve1.to_double(token1.decimals); }
  bool active_on(Date d) const { return first_trade_date <= d && d <= last_trade_date; }

  bool operator==(const PoolSnapshot&) const = default;
};

// USD prices keyed by (date, token address).
class PriceTable {
 public:
  void set(Date date, const std::string& address, double usd_price) {
    if (!(usd_price > 0.0)) throw DomainError("price for " + address + " must be strictly positive");
    prices_[{date, address}] = usd_price;
  }

  std::optional<double> find(Date date, const std::string& address) const {
    auto it = prices_.find({date, address});
    if (it == prices_.end()) return std::nullopt;
    return it->second;
  }

  double at(Date date, const std::string& address) const {
    if (auto p = find(date, address)) return *p;
    throw PriceMissingError("no USD price for " + address + " on " + date.iso());
  }

  std::size_t size() const { return prices_.size(); }
  bool empty() const { return prices_.empty(); }

  const std::map<std::pair<Date, std::string>, double>& entries() const { return prices_; }

 private:
  std::map<std::pair<Date, std::string>, double> prices_;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'", line);
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_string()) throw ParseError(std::string("'") + key + "' must be a string", line);
  return v.get<std::string>();
}

inline double require_non_negative(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_number()) throw ParseError(std::string("'") + key + "' must be a number", line);
  const double x = v.get<double>();
  if (!(x >= 0.0)) throw ParseError(std::string("'") + key + "' must be non-negative", line);
  return x;
}

inline Date require_date(const nlohmann::json& obj, const char* key, std::size_t line) {
  try {
    return Date::parse(require_string(obj, key, line));
  } catch (const ParseError& e) {
    if (e.line()) throw;
    throw ParseError(std::string("'") + key + "': " + e.what(), line);
  }
}

inline Decimal require_decimal(const nlohmann::json& obj, const char* key, std::size_t line) {
  try {
    return Decimal::parse(require_string(obj, key, line));
  } catch (const ParseError& e) {
    if (e.line()) throw;
    throw ParseError(std::string("'") + key + "': " + e.what(), line);
  }
}

inline TokenMeta parse_token(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto& t = require(obj, key, line);
  if (!t.is_object()) throw ParseError(std::string("'") + key + "' must be an object", line);
  TokenMeta meta;
  meta.address = require_string(t, "address", line);
  meta.symbol = require_string(t, "symbol", line);
  const auto& dec = require(t, "decimals", line);
  if (!dec.is_number_integer() || dec.get<long long>() < 0 || dec.get<long long>() > kMaxTokenDecimals) {
    throw ParseError(std::string("'") + key + ".decimals' must be an integer in [0, 77]", line);
  }
  meta.decimals = dec.get<int>();
  return meta;
}

inline PoolSnapshot parse_snapshot_line(const std::string& text, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!obj.is_object()) throw ParseError("record must be a JSON object", line);
  PoolSnapshot p;
  p.date = require_date(obj, "date", line);
  p.pool_id = require_string(obj, "pool_id", line);
  p.token0 = parse_token(obj, "token0", line);
  p.token1 = parse_token(obj, "token1", line);
  p.reserve0 = require_decimal(obj, "reserve0", line);
  p.reserve1 = require_decimal(obj, "reserve1", line);
  p.tvl_usd = require_non_negative(obj, "tvl_usd", line);
  p.volume_usd = require_non_negative(obj, "volume_usd", line);
  p.first_trade_date = require_date(obj, "first_trade_date", line);
  p.last_trade_date = require_date(obj, "last_trade_date", line);
  if (p.token0.address == p.token1.address) throw ParseError("token0 and token1 share an address", line);
  if (p.first_trade_date > p.last_trade_date) throw ParseError("first_trade_date after last_trade_date", line);
  return p;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

}  // namespace detail

// Parses a JSON Lines snapshot stream. With `date`, keeps only that day's
// records; every line is validated regardless.
inline std::vector<PoolSnapshot> parse_snapshots(std::istream& in, std::optional<Date> date = std::nullopt) {
  std::vector<PoolSnapshot> out;
  std::set<std::pair<Date, std::string>> seen;
  std::map<std::pair<Date, std::string>, TokenMeta> tokens;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    detail::strip_cr(text);
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    PoolSnapshot p = detail::parse_snapshot_line(text, line);
    if (!seen.emplace(p.date, p.pool_id).second) {
      throw DuplicateError("line " + std::to_string(line) + ": duplicate pool_id '" + p.pool_id + "' for " +
                           p.date.iso());
    }
    for (const TokenMeta* t : {&p.token0, &p.token1}) {
      auto [it, fresh] = tokens.emplace(std::pair{p.date, t->address}, *t);
      if (!fresh && it->second.decimals != t->decimals) {
        throw ParseError("token " + t->address + " has inconsistent decimals", line);
      }
    }
    if (!date || p.date == *date) out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<PoolSnapshot> load_snapshots(const std::string& path, std::optional<Date> date = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open snapshot file '" + path + "'");
  return parse_snapshots(in, date);
}

inline void write_snapshots(std::ostream& out, const std::vector<PoolSnapshot>& pools) {
  auto token = [](const TokenMeta& t) {
    return nlohmann::ordered_json{{"address", t.address}, {"symbol", t.symbol}, {"decimals", t.decimals}};
  };
  for (const auto& p : pools) {
    nlohmann::ordered_json obj{{"date", p.date.iso()},
                               {"pool_id", p.pool_id},
                               {"token0", token(p.token0)},
                               {"token1", token(p.token1)},
                               {"reserve0", p.reserve0.str()},
                               {"reserve1", p.reserve1.str()},
                               {"tvl_usd", p.tvl_usd},
                               {"volume_usd", p.volume_usd},
                               {"first_trade_date", p.first_trade_date.iso()},
                               {"last_trade_date", p.last_trade_date.iso()}};
    out << obj.dump() << '\n';
  }
}

// CSV with header `date,token_address,usd_price`.
inline PriceTable parse_price_table(std::istream& in) {
  PriceTable table;
  std::string text;
  std::size_t line = 0;
  if (!std::getline(in, text)) return table;
  ++line;
  detail::strip_cr(text);
  if (text != "date,token_address,usd_price") throw ParseError("expected header 'date,token_address,usd_price'", 1);
  while (std::getline(in, text)) {
    ++line;
    detail::strip_cr(text);
    if (text.empty()) continue;
    auto fields = detail::split_csv_line(text);
    if (fields.size() != 3) throw ParseError("expected 3 fields", line);
    Date d;
    try {
      d = Date::parse(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    double price = 0.0;
    auto r = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), price);
    if (r.ec != std::errc{} || r.ptr != fields[2].data() + fields[2].size() || !(price > 0.0)) {
      throw ParseError("usd_price must be a positive number", line);
    }
    table.set(d, fields[1], price);
  }
  return table;
}

inline PriceTable load_price_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open price file '" + path + "'");
  return parse_price_table(in);
}

inline void write_price_table(std::ostream& out, const PriceTable& table) {
  out << "date,token_address,usd_price\n";
  for (const auto& [key, price] : table.entries()) {
    out << key.first.iso() << ',' << key.second << ',' << format_double(price) << '\n';
  }
}

struct FilterParams {
  double tvl_floor = kDefaultTvlFloorUsd;
  std::size_t max_tokens = kDefaultMaxTokens;
};

namespace detail {

inline bool tvl_less(const PoolSnapshot& a, const PoolSnapshot& b) {
  if (a.tvl_usd != b.tvl_usd) return a.tvl_usd < b.tvl_usd;
  return a.pool_id < b.pool_id;
}

inline std::pair<std::string, std::string> pair_key(const PoolSnapshot& p) {
  return std::minmax(p.token0.address, p.token1.address);
}

}  // namespace detail

// Keeps the highest-TVL pool of every unordered token pair (ties: smaller
// pool_id wins).
inline std::vector<PoolSnapshot> dedupe_pairs(const std::vector<PoolSnapshot>& pools) {
  std::map<std::pair<std::string, std::string>, const PoolSnapshot*> best;
  for (const auto& p : pools) {
    auto [it, fresh] = best.emplace(detail::pair_key(p), &p);
    if (!fresh && detail::tvl_less(*it->second, p)) it->second = &p;
  }
  std::vector<PoolSnapshot> out;
  out.reserve(best.size());
  for (const auto& p : pools) {
    if (best.at(detail::pair_key(p)) == &p) out.push_back(p);
  }
  return out;
}

// Activity window, strict TVL floor, degree-1 cascade, then smallest-TVL
// eviction until at most `max_tokens` tokens remain. Output is sorted by
// pool_id. An empty result means the day has no usable market.
inline std::vector<PoolSnapshot> filter_pools(const std::vector<PoolSnapshot>& pools, Date date,
                                              const FilterParams& params = {}) {
  if (!(params.tvl_floor >= 0.0)) throw ConfigError("tvl_floor must be non-negative");
  if (params.max_tokens < 2) throw ConfigError("max_tokens must be at least 2");

  std::vector<PoolSnapshot> candidates;
  for (const auto& p : dedupe_pairs(pools)) {
    if (p.active_on(date) && p.tvl_usd > params.tvl_floor) candidates.push_back(p);
  }

  std::unordered_map<std::string, std::size_t> token_index;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (const auto& p : candidates) {
    auto a = token_index.emplace(p.token0.address, token_index.size()).first->second;
    auto b = token_index.emplace(p.token1.address, token_index.size()).first->second;
    ends.emplace_back(a, b);
  }
  std::vector<std::vector<std::size_t>> incident(token_index.size());
  std::vector<std::size_t> degree(token_index.size(), 0);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    incident[ends[i].first].push_back(i);
    incident[ends[i].second].push_back(i);
    ++degree[ends[i].first];
    ++degree[ends[i].second];
  }
  std::vector<bool> alive(candidates.size(), true);
  std::size_t live_tokens = token_index.size();

  auto remove_pool = [&](std::size_t pool, std::queue<std::size_t>& pending) {
    alive[pool] = false;
    for (std::size_t t : {ends[pool].first, ends[pool].second}) {
      if (--degree[t] == 0) --live_tokens;
      if (degree[t] == 1) pending.push(t);
    }
  };
  auto cascade = [&](std::queue<std::size_t>& pending) {
    while (!pending.empty()) {
      const std::size_t t = pending.front();
      pending.pop();
      if (degree[t] != 1) continue;
      for (std::size_t pool : incident[t]) {
        if (alive[pool]) {
          remove_pool(pool, pending);
          break;
        }
      }
    }
  };

  std::queue<std::size_t> pending;
  for (std::size_t t = 0; t < degree.size(); ++t) {
    if (degree[t] == 1) pending.push(t);
  }
  cascade(pending);

  std::vector<std::size_t> by_tvl(candidates.size());
  for (std::size_t i = 0; i < by_tvl.size(); ++i) by_tvl[i] = i;
  std::sort(by_tvl.begin(), by_tvl.end(),
            [&](std::size_t a, std::size_t b) { return detail::tvl_less(candidates[a], candidates[b]); });
  for (std::size_t k = 0; live_tokens > params.max_tokens && k < by_tvl.size(); ++k) {
    if (!alive[by_tvl[k]]) continue;
    remove_pool(by_tvl[k], pending);
    cascade(pending);
  }

  std::vector<PoolSnapshot> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (alive[i]) out.push_back(std::move(candidates[i]));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.pool_id < b.pool_id; });
  return out;
}

}  // namespace dexarb
