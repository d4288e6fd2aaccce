#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leoveri/config.hpp"

namespace leoveri {

// (planned - unconstrained) / unconstrained, in percent.
double delay_inflation(double planned_delay_s, double unconstrained_delay_s);

enum class Scheme { Icing, Opt, Epic, Leoveri };
const char* to_string(Scheme s);

// Security-related header bytes for a path of N hops.
std::size_t field_length(Scheme scheme, int n_hops, int sigma);
inline constexpr std::size_t kBaseHeaderBytes = 40;
double goodput_ratio(Scheme scheme, int n_hops, std::size_t payload_bytes, int sigma);

// Relay count per slot; -1 marks a slot without a feasible plan.
// Fraction of slots with exactly `sigma` relays (sigma = -1: infeasible).
double rar(const std::vector<int>& relay_history, int sigma);

struct VariationWindow {
  long first_slot = 0;
  long last_slot = 0;
  long rs_changes = 0;
  long nlrp_changes = 0;
};

// One slot's risk picture. `nlrp` is empty when the frame wraps a full ring.
struct RiskSample {
  long slot = 0;
  RiskSet risk;
  std::optional<Nlrp> nlrp;
};

// Risk set and low-risk frame for each slot, without building graphs.
std::vector<RiskSample> risk_history(const ShellConfig& shell, const RiskArea& area, int theta, SlotRange slots,
                                     double slot_length_s = 1.0);

// Slots whose set or frame differs from the previous slot, per window.
std::vector<VariationWindow> variation_counts(const std::vector<RiskSample>& history, long window_slots = 1000);

struct PairMetrics {
  std::string src;
  std::string dst;
  long slots = 0;
  long coverage_gap_slots = 0;
  long infeasible_slots = 0;
  long evaluated_slots = 0;
  long fp_slots = 0;
  long fn_slots = 0;
  long sent = 0;
  long accepted = 0;
  long rejected = 0;
  long lost = 0;
  long clean_packets = 0;
  long risky_packets = 0;
  long attacks_applied = 0;
  long attacks_infeasible = 0;
  long no_relay_slots = 0;  // baseline only
  std::map<std::string, long> reject_reasons;
  std::vector<int> relay_history;  // per slot, -1 when no plan
  double inflation_sum = 0.0;
  long inflation_samples = 0;

  double fp_ratio() const { return evaluated_slots ? static_cast<double>(fp_slots) / evaluated_slots : 0.0; }
  double fn_ratio() const { return evaluated_slots ? static_cast<double>(fn_slots) / evaluated_slots : 0.0; }
  double mean_inflation() const { return inflation_samples ? inflation_sum / inflation_samples : 0.0; }
};

struct PlanRecord {
  long slot = 0;
  double t = 0.0;
  std::string src;
  std::string dst;
  std::string overlap;
  std::vector<SatCoord> relays;
  std::vector<double> thresholds_s;
  std::size_t path_len = 0;
  double delay_s = 0.0;  // ground to ground over the planned path
  double unconstrained_s = 0.0;
};

struct MetricsReport {
  std::string scheme = "LEOVERI";
  long slots = 0;
  long risk_too_large_slots = 0;
  std::vector<PairMetrics> pairs;
  std::vector<PlanRecord> plans;
  std::vector<VariationWindow> variation;
  OpCounts ops;

  double mean_fp() const;
  double mean_fn() const;
  double mean_inflation() const;  // over every feasible (pair, slot)
  double no_relay_rate() const;    // no_relay_slots over all pair-slots
};

// Planned-delay inflation per theta over the (pair, slot) samples that are
// feasible for every theta in the sweep, so each theta sees the same scenes.
struct ThetaPoint {
  int theta = 0;
  double mean_inflation = 0.0;     // over the common samples
  long feasible = 0;               // samples feasible at this theta
  double mean_inflation_all = 0.0; // over every feasible sample at this theta
};
struct ThetaSweep {
  long common_samples = 0;
  long total_samples = 0;  // (pair, slot) with coverage and a usable frame
  std::vector<ThetaPoint> points;
};
// Planning only; slots are visited every `slot_step`.
ThetaSweep theta_sweep(const ScenarioConfig& config, const std::vector<int>& thetas, long slot_step = 1);

struct RunOptions {
  bool keep_plans = true;
  bool verify = true;  // false: plan only, no packets
};

// Sequential slot loop: snapshot, risk, planning, probing, honest packet plus
// any active attacks, verification against the traversed-node ground truth.
// Per-slot failures are recorded in the report; the run never aborts on them.
MetricsReport run(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace leoveri
