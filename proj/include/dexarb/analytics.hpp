#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "dexarb/date.hpp"
#include "dexarb/decimal.hpp"
#include "dexarb/errors.hpp"
#include "dexarb/optimizer.hpp"

namespace dexarb {

struct DailyReport {
  Date date;
  std::vector<Opportunity> opportunities;
  double total_profit_usd = 0.0;
  std::size_t loop_count = 0;
  std::size_t nonloop_count = 0;
};

inline DailyReport make_daily_report(Date date, std::vector<Opportunity> opps) {
  DailyReport r;
  r.date = date;
  for (const auto& o : opps) {
    (o.path.kind == PathKind::loop ? r.loop_count : r.nonloop_count) += 1;
    if (o.profit_usd) r.total_profit_usd += *o.profit_usd;
  }
  r.opportunities = std::move(opps);
  return r;
}

// Swap count -> number of opportunities.
inline std::map<std::size_t, std::size_t> length_histogram(std::span<const Opportunity> opps) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& o : opps) ++h[o.path.length()];
  return h;
}

struct ProfitHistogram {
  std::vector<double> edges;         // bin k is [edges[k], edges[k + 1])
  std::vector<std::size_t> counts;   // edges.size() - 1 entries
  std::size_t underflow = 0;         // below edges.front()
  std::size_t overflow = 0;          // at or above edges.back()
  std::size_t unpriced = 0;          // opportunities without a USD profit

  std::size_t total() const {
    std::size_t s = underflow + overflow + unpriced;
    for (auto c : counts) s += c;
    return s;
  }
};

// Decades from 1e-2 to 1e7 USD.
inline std::vector<double> default_profit_edges() {
  std::vector<double> e;
  for (int k = -2; k <= 7; ++k) e.push_back(std::pow(10.0, k));
  return e;
}

inline ProfitHistogram profit_histogram(std::span<const double> profits,
                                        std::vector<double> edges = default_profit_edges()) {
  if (edges.size() < 2) throw ConfigError("profit histogram needs at least two bin edges");
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (!(edges[k - 1] < edges[k])) throw ConfigError("profit histogram bin edges must be strictly ascending");
  }
  ProfitHistogram h;
  h.edges = std::move(edges);
  h.counts.assign(h.edges.size() - 1, 0);
  for (double p : profits) {
    if (p < h.edges.front()) {
      ++h.underflow;
    } else if (p >= h.edges.back()) {
      ++h.overflow;
    } else {
      auto it = std::upper_bound(h.edges.begin(), h.edges.end(), p);
      ++h.counts[static_cast<std::size_t>(it - h.edges.begin()) - 1];
    }
  }
  return h;
}

// Bins USD profits; opportunities without one are tallied as unpriced.
inline ProfitHistogram profit_histogram(std::span<const Opportunity> opps,
                                        std::vector<double> edges = default_profit_edges()) {
  std::vector<double> usd;
  std::size_t unpriced = 0;
  for (const auto& o : opps) {
    if (o.profit_usd) {
      usd.push_back(*o.profit_usd);
    } else {
      ++unpriced;
    }
  }
  auto h = profit_histogram(std::span<const double>(usd), std::move(edges));
  h.unpriced = unpriced;
  return h;
}

struct ProfitSeries {
  std::vector<std::pair<Date, double>> points;
  // OLS slope of log10(total + 1) per day; absent with fewer than 2 days.
  std::optional<double> trend_slope;
};

inline ProfitSeries profit_timeseries(std::span<const DailyReport> reports) {
  ProfitSeries s;
  for (const auto& r : reports) s.points.emplace_back(r.date, r.total_profit_usd);
  std::stable_sort(s.points.begin(), s.points.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (s.points.size() < 2) return s;

  const Date origin = s.points.front().first;
  double mx = 0.0, my = 0.0;
  for (const auto& [d, v] : s.points) {
    mx += static_cast<double>(d - origin);
    my += std::log10(v + 1.0);
  }
  const auto n = static_cast<double>(s.points.size());
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [d, v] : s.points) {
    const double dx = static_cast<double>(d - origin) - mx;
    sxy += dx * (std::log10(v + 1.0) - my);
    sxx += dx * dx;
  }
  if (sxx > 0.0) s.trend_slope = sxy / sxx;
  return s;
}

inline void write_length_csv(std::ostream& out, const std::map<std::size_t, std::size_t>& h) {
  out << "length,count\n";
  for (const auto& [len, count] : h) out << len << ',' << count << '\n';
}

// Underflow is written as [0, first edge), overflow as [last edge, inf).
inline void write_profit_histogram_csv(std::ostream& out, const ProfitHistogram& h) {
  out << "bin_low,bin_high,count\n";
  out << "0," << format_double(h.edges.front()) << ',' << h.underflow << '\n';
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << format_double(h.edges[k]) << ',' << format_double(h.edges[k + 1]) << ',' << h.counts[k] << '\n';
  }
  out << format_double(h.edges.back()) << ",inf," << h.overflow << '\n';
}

inline void write_timeseries_csv(std::ostream& out, const ProfitSeries& s) {
  out << "date,total_profit_usd\n";
  for (const auto& [d, v] : s.points) out << d.iso() << ',' << format_double(v) << '\n';
}

}  // namespace dexarb
