// leoveri: scenario driver.
//
//   leoveri gen      --config c.cfg [--slots a..b] --out dir   snapshots
//   leoveri plan     --config c.cfg [--slots a..b] --out dir   relay plans
//   leoveri run      --config c.cfg [--seed s] --out dir       full verification run
//   leoveri goodput  [--config c.cfg] --out dir                header length table
//   leoveri baseline --config c.cfg --out dir                  delay-bound comparison

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "leoveri/baseline.hpp"
#include "leoveri/error.hpp"
#include "leoveri/harness.hpp"
#include "leoveri/reports.hpp"

namespace fs = std::filesystem;
using namespace leoveri;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string slots;
};

ScenarioConfig load(const Common& c) {
  auto cfg = load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.slots.empty()) cfg.slots = parse_slot_range(c.slots);
  cfg.validate();
  return cfg;
}

template <class F>
void emit(const fs::path& path, F&& writer) {
  std::ostringstream s;
  writer(s);
  write_file(path, s.str());
  std::cout << "wrote " << path.string() << '\n';
}

void cmd_gen(const Common& c) {
  const auto cfg = load(c);
  const Shell shell(cfg.shell);
  std::ostringstream sats, links;
  for (long slot = cfg.slots.first; slot <= cfg.slots.last; ++slot) {
    const auto snap = Snapshot::build(shell, static_cast<double>(slot) * cfg.slot_length_s, cfg.ground, cfg.topology);
    write_satellites_csv(sats, snap, slot == cfg.slots.first);
    write_links_csv(links, snap, slot == cfg.slots.first);
  }
  write_file(fs::path(c.out) / "satellites.csv", sats.str());
  write_file(fs::path(c.out) / "links.csv", links.str());
  std::cout << "wrote " << c.out << "/satellites.csv, links.csv\n";
}

void cmd_plan(const Common& c) {
  const auto cfg = load(c);
  RunOptions opt;
  opt.verify = false;
  const auto report = run(cfg, opt);
  emit(fs::path(c.out) / "plans.csv", [&](std::ostream& o) { write_plans_csv(o, report.plans); });
  emit(fs::path(c.out) / "thresholds.csv", [&](std::ostream& o) { write_thresholds_csv(o, report.plans); });
  emit(fs::path(c.out) / "variation.csv", [&](std::ostream& o) { write_variation_csv(o, report.variation); });
  long infeasible = 0, gaps = 0;
  for (const auto& p : report.pairs) {
    infeasible += p.infeasible_slots;
    gaps += p.coverage_gap_slots;
  }
  std::cout << report.plans.size() << " plans, " << infeasible << " infeasible, " << gaps
            << " coverage gaps, mean inflation " << report.mean_inflation() << "%\n";
}

void cmd_run(const Common& c) {
  const auto cfg = load(c);
  const auto report = run(cfg);
  const fs::path out(c.out);
  emit(out / "metrics.csv", [&](std::ostream& o) { write_metrics_csv(o, report); });
  emit(out / "plans.csv", [&](std::ostream& o) { write_plans_csv(o, report.plans); });
  emit(out / "thresholds.csv", [&](std::ostream& o) { write_thresholds_csv(o, report.plans); });
  emit(out / "variation.csv", [&](std::ostream& o) { write_variation_csv(o, report.variation); });
  write_file(out / "summary.json", summary_json(report, cfg.planning.sigma));
  std::cout << "wrote " << (out / "summary.json").string() << '\n';
  std::cout << "mean FP " << report.mean_fp() << ", mean FN " << report.mean_fn() << ", mean inflation "
            << report.mean_inflation() << "%\n";
}

void cmd_goodput(const Common& c) {
  std::size_t payload = 1024;
  int sigma = 2;
  if (!c.config.empty()) {
    const auto cfg = load(c);
    payload = cfg.payload_bytes;
    sigma = cfg.planning.sigma;
  }
  emit(fs::path(c.out) / "goodput.csv", [&](std::ostream& o) {
    write_goodput_csv(o, {10, 20, 30}, {payload}, sigma);
  });
}

void cmd_baseline(const Common& c) {
  const auto cfg = load(c);
  RunOptions opt;
  opt.keep_plans = false;
  const auto ours = run(cfg, opt);
  const auto alibi = alibi_baseline(cfg);
  const fs::path out(c.out);
  emit(out / "baseline.csv", [&](std::ostream& o) { write_comparison_csv(o, {alibi, ours}); });
  emit(out / "baseline_metrics.csv", [&](std::ostream& o) { write_metrics_csv(o, alibi); });
  std::cout << "ALIBI mean FP " << alibi.mean_fp() << ", FN " << alibi.mean_fn() << ", no-relay rate "
            << alibi.no_relay_rate() << "\nLEOVERI mean FP " << ours.mean_fp() << ", FN " << ours.mean_fn() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO satellite verifiable risk-avoidance routing simulator"};
  app.require_subcommand(1);
  Common common;

  auto add = [&](const char* name, const char* help, bool needs_config) {
    auto* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("--config", common.config, "scenario file")->check(CLI::ExistingFile);
    if (needs_config) cfg->required();
    sub->add_option("--seed", common.seed, "RNG seed override");
    sub->add_option("--out", common.out, "output directory")->capture_default_str();
    sub->add_option("--slots", common.slots, "slot range a..b (inclusive)");
    return sub;
  };
  auto* gen = add("gen", "dump constellation and topology snapshots", true);
  auto* plan = add("plan", "relay plans and detour thresholds per slot", true);
  auto* runc = add("run", "full scenario with verification and attacks", true);
  auto* good = add("goodput", "header length and goodput table", false);
  auto* base = add("baseline", "delay-bound baseline against the relay scheme", true);

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) cmd_gen(common);
    else if (plan->parsed()) cmd_plan(common);
    else if (runc->parsed()) cmd_run(common);
    else if (good->parsed()) cmd_goodput(common);
    else if (base->parsed()) cmd_baseline(common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
