#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dexarb/analytics.hpp"
#include "dexarb/baseline_mbf.hpp"
#include "dexarb/line_graph.hpp"
#include "dexarb/market_data.hpp"
#include "dexarb/mmbf.hpp"
#include "dexarb/optimizer.hpp"
#include "dexarb/synthetic.hpp"
#include "dexarb/token_graph.hpp"

namespace dexarb {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitConfigError = 3;

struct RunConfig {
  std::string snapshot_path;
  std::optional<std::string> price_path;
  Date date;
  std::optional<Date> end_date;  // inclusive; stats only
  double tvl_floor = kDefaultTvlFloorUsd;
  std::size_t max_tokens = kDefaultMaxTokens;
  double fee = kUniswapV2Fee;
  std::optional<std::size_t> rounds;
  std::optional<std::string> source;  // token address
  std::optional<std::uint64_t> seed;
  std::string output_dir = ".";
  unsigned threads = 0;
  bool dump_graph = false;

  void validate() const {
    if (!(tvl_floor >= 0.0)) throw ConfigError("--tvl-floor must be non-negative");
    if (max_tokens < 2) throw ConfigError("--max-tokens must be at least 2");
    if (!(fee >= 0.0 && fee < 1.0)) throw ConfigError("--fee must lie in [0, 1)");
    if (end_date && *end_date < date) throw ConfigError("date range start is after its end");
    if (rounds && *rounds == 0) throw ConfigError("--rounds must be positive");
  }
};

struct FoundOpportunity {
  Date date;
  TokenId source = 0;
  Opportunity opp;
};

// Everything derived from one day's snapshot.
struct DayAnalysis {
  Date date;
  TokenGraph graph;
  std::vector<DetectionResult> detections;
  std::vector<FoundOpportunity> opportunities;
  std::size_t unvalued_nonloops = 0;  // no price and no direct pool
};

inline DayAnalysis analyze_day(const std::vector<PoolSnapshot>& pools, Date date, const PriceTable* prices,
                               const RunConfig& cfg) {
  DayAnalysis day;
  day.date = date;
  const auto filtered = filter_pools(pools, date, {cfg.tvl_floor, cfg.max_tokens});
  if (filtered.empty()) return day;
  day.graph = build_token_graph(filtered, cfg.fee);
  const LineGraph lg(day.graph);

  if (cfg.source) {
    auto id = day.graph.find_token(*cfg.source);
    if (!id) throw UnknownTokenError("source token " + *cfg.source + " is not in the filtered market");
    day.detections.push_back(detect(SourcedLineGraph(lg, *id), cfg.rounds));
  } else {
    day.detections = detect_all(lg, cfg.rounds, cfg.threads);
  }

  for (const auto& r : day.detections) {
    for (const auto& path : extract_paths(r, day.graph)) {
      try {
        if (auto opp = optimize(path, day.graph, prices, date)) day.opportunities.push_back({date, r.source, *opp});
      } catch (const PriceMissingError&) {
        ++day.unvalued_nonloops;
      }
    }
  }
  return day;
}

namespace detail {

// Symbols, disambiguated as SYMBOL@address when two tokens share one.
inline std::vector<std::string> token_labels(const TokenGraph& g) {
  std::map<std::string, int> uses;
  for (const auto& t : g.tokens()) ++uses[t.symbol];
  std::vector<std::string> labels;
  for (const auto& t : g.tokens()) labels.push_back(uses[t.symbol] > 1 ? t.symbol + "@" + t.address : t.symbol);
  return labels;
}

template <typename Range, typename F>
std::string join(const Range& r, F&& f) {
  std::string s;
  for (const auto& x : r) {
    if (!s.empty()) s += '>';
    s += f(x);
  }
  return s;
}

inline void sort_rows(std::vector<FoundOpportunity>& rows) {
  std::sort(rows.begin(), rows.end(), [](const FoundOpportunity& a, const FoundOpportunity& b) {
    const double pa = a.opp.profit_usd.value_or(-kInfinity);
    const double pb = b.opp.profit_usd.value_or(-kInfinity);
    return std::tie(a.date, pb, a.source, a.opp.path.tokens) < std::tie(b.date, pa, b.source, b.opp.path.tokens);
  });
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const UnknownTokenError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

inline std::optional<PriceTable> load_prices(const RunConfig& cfg) {
  if (!cfg.price_path) return std::nullopt;
  return load_price_table(*cfg.price_path);
}

}  // namespace detail

inline void write_opportunities_csv(std::ostream& out, std::vector<FoundOpportunity> rows, const TokenGraph& g) {
  detail::sort_rows(rows);
  const auto labels = detail::token_labels(g);
  out << "date,kind,source,path_tokens,path_pools,total_weight,optimal_input,output,profit_token,profit_usd\n";
  for (const auto& row : rows) {
    const auto& o = row.opp;
    out << row.date.iso() << ',' << to_string(o.path.kind) << ',' << labels[row.source] << ','
        << detail::join(o.path.tokens, [&](TokenId t) { return labels[t]; }) << ','
        << detail::join(o.path.pools, [](const std::string& p) { return p; }) << ','
        << format_double(o.path.total_weight) << ',' << format_double(o.optimal_input) << ','
        << format_double(o.output) << ',' << format_double(o.profit_token) << ','
        << (o.profit_usd ? format_double(*o.profit_usd) : std::string()) << '\n';
  }
}

// load -> filter -> graphs -> MMBF -> optimize -> opportunities.csv
inline int cmd_detect(const RunConfig& cfg, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const auto pools = load_snapshots(cfg.snapshot_path, cfg.date);
    const auto prices = detail::load_prices(cfg);
    const auto day = analyze_day(pools, cfg.date, prices ? &*prices : nullptr, cfg);
    if (day.unvalued_nonloops) {
      err << "warning: " << day.unvalued_nonloops << " non-loop paths skipped for lack of prices\n";
    }
    std::filesystem::create_directories(cfg.output_dir);
    std::ostringstream csv;
    write_opportunities_csv(csv, day.opportunities, day.graph);
    detail::write_file(std::filesystem::path(cfg.output_dir) / "opportunities.csv", csv.str());
    if (cfg.dump_graph) {
      std::ostringstream graph;
      write_graph_csv(graph, day.graph);
      detail::write_file(std::filesystem::path(cfg.output_dir) / "graph.csv", graph.str());
    }
  });
}

struct MethodSummary {
  std::string method;
  std::size_t loop_count = 0;           // negative loops detected
  std::size_t distinct_loop_count = 0;  // by canonical rotation
  std::size_t nonloop_count = 0;        // non-loops with positive optimized profit
  double total_profit_usd = 0.0;        // over opportunities with a USD value
};

inline std::pair<MethodSummary, MethodSummary> compare_methods(const DayAnalysis& day, const PriceTable* prices) {
  MethodSummary mmbf{"mmbf"};
  MethodSummary mbf{"mbf_walk_to_root"};
  std::set<std::vector<TokenId>> distinct;
  for (const auto& r : day.detections) {
    if (r.loop) {
      ++mmbf.loop_count;
      distinct.insert(canonical_loop(r.loop->tokens));
    }
  }
  mmbf.distinct_loop_count = distinct.size();
  for (const auto& f : day.opportunities) {
    if (f.opp.path.kind == PathKind::non_loop) ++mmbf.nonloop_count;
    if (f.opp.profit_usd) mmbf.total_profit_usd += *f.opp.profit_usd;
  }
  if (!day.graph.empty()) {
    const auto cycles = mbf_detect_all(day.graph);
    mbf.loop_count = mbf.distinct_loop_count = cycles.size();
    for (const auto& c : cycles) {
      if (auto opp = optimize(c, day.graph, prices, day.date); opp && opp->profit_usd) {
        mbf.total_profit_usd += *opp->profit_usd;
      }
    }
  }
  return {mmbf, mbf};
}

inline void write_comparison_csv(std::ostream& out, const std::vector<MethodSummary>& rows) {
  out << "method,loop_count,distinct_loop_count,nonloop_count,total_profit_usd\n";
  for (const auto& m : rows) {
    out << m.method << ',' << m.loop_count << ',' << m.distinct_loop_count << ',' << m.nonloop_count << ','
        << format_double(m.total_profit_usd) << '\n';
  }
}

// MMBF over every source vs. the union of walk-to-the-root cycles.
inline int cmd_compare(const RunConfig& cfg, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    cfg.validate();
    RunConfig all = cfg;
    all.source.reset();
    const auto pools = load_snapshots(cfg.snapshot_path, cfg.date);
    const auto prices = detail::load_prices(cfg);
    const PriceTable* pt = prices ? &*prices : nullptr;
    const auto day = analyze_day(pools, cfg.date, pt, all);
    const auto [mmbf, mbf] = compare_methods(day, pt);
    std::filesystem::create_directories(cfg.output_dir);
    std::ostringstream csv;
    write_comparison_csv(csv, {mmbf, mbf});
    detail::write_file(std::filesystem::path(cfg.output_dir) / "comparison.csv", csv.str());
  });
}

// Per-day detection over [date, end_date], then histograms and the profit
// time series.
inline int cmd_stats(const RunConfig& cfg, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    cfg.validate();
    const Date last = cfg.end_date.value_or(cfg.date);
    std::map<Date, std::vector<PoolSnapshot>> by_day;
    for (auto& p : load_snapshots(cfg.snapshot_path)) {
      if (cfg.date <= p.date && p.date <= last) by_day[p.date].push_back(std::move(p));
    }
    const auto prices = detail::load_prices(cfg);
    const PriceTable* pt = prices ? &*prices : nullptr;

    std::vector<DailyReport> reports;
    std::vector<Opportunity> all;
    std::size_t unpriced = 0;
    for (Date d = cfg.date; d <= last; d = d + 1) {
      auto it = by_day.find(d);
      if (it == by_day.end()) {
        err << "warning: no snapshot data for " << d.iso() << "; reporting zero profit\n";
        reports.push_back(make_daily_report(d, {}));
        continue;
      }
      auto day = analyze_day(it->second, d, pt, cfg);
      std::vector<Opportunity> opps;
      for (auto& f : day.opportunities) {
        if (!f.opp.profit_usd) ++unpriced;
        opps.push_back(f.opp);
      }
      all.insert(all.end(), opps.begin(), opps.end());
      reports.push_back(make_daily_report(d, std::move(opps)));
    }
    if (unpriced) err << "warning: " << unpriced << " opportunities lack USD prices and are excluded from totals\n";

    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    std::ostringstream lengths, profits, series, trend;
    write_length_csv(lengths, length_histogram(all));
    write_profit_histogram_csv(profits, profit_histogram(std::span<const Opportunity>(all)));
    const auto ts = profit_timeseries(reports);
    write_timeseries_csv(series, ts);
    trend << "slope_per_day\n" << (ts.trend_slope ? format_double(*ts.trend_slope) : std::string()) << '\n';
    detail::write_file(dir / "length_histogram.csv", lengths.str());
    detail::write_file(dir / "profit_histogram.csv", profits.str());
    detail::write_file(dir / "timeseries.csv", series.str());
    detail::write_file(dir / "trend.csv", trend.str());
  });
}

struct GenConfig {
  MarketSpec spec;
  std::size_t days = 1;
  std::size_t inject_loops = 0;
  std::size_t loop_length = 3;
  double rate_product = 1.05;
  std::string output_dir = ".";
};

// Market for spec.date with `inject_loops` disjoint loops injected, plus the
// matching unit-price table.
inline std::pair<std::vector<PoolSnapshot>, std::vector<std::vector<std::string>>> generate_injected(
    const MarketSpec& spec, std::size_t loops, std::size_t length, double rate_product) {
  auto pools = generate(spec);
  auto cycles = find_disjoint_cycles(pools, length, loops, spec.seed);
  if (cycles.size() < loops) throw InfeasibleError("market has too few disjoint cycles to inject");
  for (const auto& c : cycles) pools = inject_arbitrage(std::move(pools), c, rate_product);
  return {std::move(pools), std::move(cycles)};
}

inline int cmd_gen(const GenConfig& cfg, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    cfg.spec.validate();
    if (cfg.days == 0) throw ConfigError("--days must be positive");
    std::ostringstream snaps, prices;
    PriceTable table;
    for (std::size_t d = 0; d < cfg.days; ++d) {
      MarketSpec spec = cfg.spec;
      spec.date = cfg.spec.date + static_cast<std::int64_t>(d);
      write_snapshots(snaps, generate_injected(spec, cfg.inject_loops, cfg.loop_length, cfg.rate_product).first);
      const auto day_prices = synthetic_prices(spec);
      for (const auto& [key, price] : day_prices.entries()) table.set(key.first, key.second, price);
    }
    write_price_table(prices, table);
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    detail::write_file(dir / "snapshots.jsonl", snaps.str());
    detail::write_file(dir / "prices.csv", prices.str());
  });
}

}  // namespace dexarb
