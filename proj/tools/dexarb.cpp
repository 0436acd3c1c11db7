// dexarb: arbitrage loop / non-loop detection on constant-product DEX snapshots.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dexarb/pipeline.hpp"

namespace {

struct Raw {
  std::string date;
  std::string end_date;
  std::string start_date = "2021-01-01";
};

void add_run_options(CLI::App* cmd, dexarb::RunConfig& cfg, Raw& raw, bool range) {
  cmd->add_option("--snapshots", cfg.snapshot_path, "Snapshot file (JSON Lines)")->required();
  cmd->add_option("--prices", cfg.price_path, "USD price table (CSV: date,token_address,usd_price)");
  cmd->add_option("--date", raw.date, range ? "First day of the range (YYYY-MM-DD)" : "Day to analyze (YYYY-MM-DD)")
      ->required();
  if (range) cmd->add_option("--end-date", raw.end_date, "Last day of the range, inclusive (default: --date)");
  cmd->add_option("--tvl-floor", cfg.tvl_floor, "Keep pools with TVL strictly above this (USD)")->capture_default_str();
  cmd->add_option("--max-tokens", cfg.max_tokens, "Token cap after filtering")->capture_default_str();
  cmd->add_option("--fee", cfg.fee, "Pool fee rate")->capture_default_str();
  cmd->add_option("--rounds", cfg.rounds, "Relaxation passes (default: token count)");
  cmd->add_option("--source", cfg.source, "Only detect from this token address (default: every token)");
  cmd->add_option("--seed", cfg.seed, "Seed recorded for reproducibility");
  cmd->add_option("--threads", cfg.threads, "Worker threads for per-source detection (0: all cores)")
      ->capture_default_str();
  cmd->add_option("--output-dir", cfg.output_dir, "Directory for output files")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect arbitrage loops and non-loop paths in constant-product DEX markets"};
  app.require_subcommand(1);

  dexarb::RunConfig cfg;
  Raw raw;
  auto* detect = app.add_subcommand("detect", "Detect and size opportunities; writes opportunities.csv");
  add_run_options(detect, cfg, raw, false);
  detect->add_flag("--dump-graph", cfg.dump_graph, "Also write the token graph to graph.csv");
  auto* compare = app.add_subcommand("compare", "Compare MMBF against MBF walk-to-the-root; writes comparison.csv");
  add_run_options(compare, cfg, raw, false);
  auto* stats = app.add_subcommand("stats", "Per-day detection over a date range; writes analytics CSVs");
  add_run_options(stats, cfg, raw, true);

  dexarb::GenConfig gen;
  auto* gen_cmd = app.add_subcommand("gen", "Emit a synthetic market (snapshots.jsonl, prices.csv)");
  gen_cmd->add_option("--tokens", gen.spec.n_tokens, "Token count")->capture_default_str();
  gen_cmd->add_option("--pools", gen.spec.n_pools, "Pool count")->capture_default_str();
  gen_cmd->add_option("--reserve-min", gen.spec.reserve_min, "Smallest reserve0 (token units)")->capture_default_str();
  gen_cmd->add_option("--reserve-max", gen.spec.reserve_max, "Largest reserve0 (token units)")->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--fee", gen.spec.fee, "Pool fee rate")->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.price_noise, "Relative reserve noise around unit prices")
      ->capture_default_str();
  gen_cmd->add_option("--date", raw.start_date, "First day")->capture_default_str();
  gen_cmd->add_option("--days", gen.days, "Number of daily snapshots")->capture_default_str();
  gen_cmd->add_option("--inject-loops", gen.inject_loops, "Disjoint arbitrage loops to inject")->capture_default_str();
  gen_cmd->add_option("--loop-length", gen.loop_length, "Tokens per injected loop")->capture_default_str();
  gen_cmd->add_option("--rate-product", gen.rate_product, "Fee-free rate product of injected loops")
      ->capture_default_str();
  gen_cmd->add_option("--output-dir", gen.output_dir, "Directory for output files")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dexarb::kExitConfigError;
  }

  try {
    if (gen_cmd->parsed()) {
      gen.spec.date = dexarb::Date::parse(raw.start_date);
      return dexarb::cmd_gen(gen);
    }
    cfg.date = dexarb::Date::parse(raw.date);
    if (!raw.end_date.empty()) cfg.end_date = dexarb::Date::parse(raw.end_date);
  } catch (const dexarb::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dexarb::kExitConfigError;
  }
  if (detect->parsed()) return dexarb::cmd_detect(cfg);
  if (compare->parsed()) return dexarb::cmd_compare(cfg);
  return dexarb::cmd_stats(cfg);
}
