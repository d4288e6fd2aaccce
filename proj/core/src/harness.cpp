#include "leoveri/harness.hpp"

#include <algorithm>
#include <random>

#include "leoveri/error.hpp"

namespace leoveri {

double delay_inflation(double planned_delay_s, double unconstrained_delay_s) {
  if (!(unconstrained_delay_s > 0.0)) return 0.0;
  return (planned_delay_s - unconstrained_delay_s) / unconstrained_delay_s * 100.0;
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Icing: return "ICING";
    case Scheme::Opt: return "OPT";
    case Scheme::Epic: return "EPIC";
    case Scheme::Leoveri: return "LEOVERI";
  }
  return "?";
}

std::size_t field_length(Scheme scheme, int n_hops, int sigma) {
  if (n_hops < 1) throw Error(ErrorCode::InvalidConfig, "path length must be at least 1");
  const auto n = static_cast<std::size_t>(n_hops);
  switch (scheme) {
    case Scheme::Icing: return 13 + 42 * n;
    case Scheme::Opt: return 52 + 16 * n;
    case Scheme::Epic: return 24 + 5 * n;
    case Scheme::Leoveri: return kAuthBlockBytes * static_cast<std::size_t>(sigma + 1);
  }
  return 0;
}

double goodput_ratio(Scheme scheme, int n_hops, std::size_t payload_bytes, int sigma) {
  const double p = static_cast<double>(payload_bytes);
  return p / (p + static_cast<double>(kBaseHeaderBytes + field_length(scheme, n_hops, sigma)));
}

double rar(const std::vector<int>& relay_history, int sigma) {
  if (relay_history.empty()) return 0.0;
  const auto hits = std::count(relay_history.begin(), relay_history.end(), sigma);
  return static_cast<double>(hits) / static_cast<double>(relay_history.size());
}

std::vector<RiskSample> risk_history(const ShellConfig& shell_cfg, const RiskArea& area, int theta, SlotRange slots,
                                     double slot_length_s) {
  const Shell shell(shell_cfg);
  const GridShape grid{shell.planes(), shell.sats_per_plane()};
  std::vector<RiskSample> out;
  out.reserve(static_cast<std::size_t>(slots.count()));
  for (long k = slots.first; k <= slots.last; ++k) {
    const double t = static_cast<double>(k) * slot_length_s;
    RiskSample s;
    s.slot = k;
    s.risk = risk_satellites(shell.propagate(t), area, t);
    try {
      s.nlrp = compute_nlrp(grid, s.risk, theta);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RiskTooLarge) throw;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<VariationWindow> variation_counts(const std::vector<RiskSample>& history, long window_slots) {
  std::vector<VariationWindow> out;
  if (history.empty()) return out;
  if (window_slots < 1) throw Error(ErrorCode::InvalidConfig, "window must span at least one slot");
  const long first = history.front().slot;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const long w = (history[i].slot - first) / window_slots;
    while (static_cast<long>(out.size()) <= w) {
      const long start = first + static_cast<long>(out.size()) * window_slots;
      out.push_back({start, start + window_slots - 1, 0, 0});
    }
    if (i == 0) continue;
    const auto& prev = history[i - 1];
    const auto& cur = history[i];
    if (!cur.risk.same_members(prev.risk)) ++out[static_cast<std::size_t>(w)].rs_changes;
    if (cur.nlrp != prev.nlrp) ++out[static_cast<std::size_t>(w)].nlrp_changes;
  }
  out.back().last_slot = history.back().slot;
  return out;
}

namespace {

double mean_over_evaluated(const std::vector<PairMetrics>& pairs, double (PairMetrics::*ratio)() const) {
  double sum = 0.0;
  long n = 0;
  for (const auto& p : pairs) {
    if (p.evaluated_slots == 0) continue;
    sum += (p.*ratio)();
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

struct SegmentProbes {
  std::vector<std::vector<NodeId>> nodes;
  std::vector<ProbeRecord> records;
};

void refresh_probes(SegmentProbes& probes, const RelayPlan& plan, const Graph& g, const TimingModel& timing,
                    double period_s, std::mt19937_64& rng, double now) {
  const std::size_t k = plan.segments.size();
  probes.nodes.resize(k);
  probes.records.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& seg = plan.segments[i].nodes;
    const bool stale = probes.nodes[i] != seg || probes.records[i].node < 0 ||
                       now - probes.records[i].measured_at >= period_s;
    if (!stale) continue;
    probes.nodes[i] = seg;
    probes.records[i] = probe_segment(g, seg, timing, rng, now);
  }
}

Bytes make_payload(std::size_t n, long slot, std::size_t pair) {
  Bytes p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(i * 31 + static_cast<std::size_t>(slot) + pair * 7);
  return p;
}

}  // namespace

double MetricsReport::mean_fp() const { return mean_over_evaluated(pairs, &PairMetrics::fp_ratio); }
double MetricsReport::mean_fn() const { return mean_over_evaluated(pairs, &PairMetrics::fn_ratio); }

double MetricsReport::mean_inflation() const {
  double sum = 0.0;
  long n = 0;
  for (const auto& p : pairs) {
    sum += p.inflation_sum;
    n += p.inflation_samples;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double MetricsReport::no_relay_rate() const {
  long no_relay = 0, total = 0;
  for (const auto& p : pairs) {
    no_relay += p.no_relay_slots;
    total += p.slots;
  }
  return total ? static_cast<double>(no_relay) / static_cast<double>(total) : 0.0;
}

MetricsReport run(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const Shell shell(cfg.shell);
  std::mt19937_64 rng(cfg.seed);
  KeyRing keys(cfg.master_key);

  MetricsReport report;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints;
  auto index_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < cfg.ground.size(); ++i)
      if (cfg.ground[i].id == id) return i;
    throw Error(ErrorCode::InvalidConfig, "unknown ground id " + id);
  };
  for (const auto& [s, d] : cfg.pairs) {
    endpoints.emplace_back(index_of(s), index_of(d));
    keys.provision(s, d);
    PairMetrics pm;
    pm.src = s;
    pm.dst = d;
    report.pairs.push_back(std::move(pm));
  }
  std::vector<SegmentProbes> probes(cfg.pairs.size());
  std::vector<std::vector<CaptureBuffer>> captures(cfg.pairs.size(), std::vector<CaptureBuffer>(cfg.attacks.size()));
  std::vector<RiskSample> history;

  for (long slot = cfg.slots.first; slot <= cfg.slots.last; ++slot) {
    const double t = static_cast<double>(slot) * cfg.slot_length_s;
    ++report.slots;
    const Snapshot snap = Snapshot::build(shell, t, cfg.ground, cfg.topology);
    const auto& g = snap.graph();
    RiskSample sample;
    sample.slot = slot;
    sample.risk = risk_satellites(snap, cfg.risk);
    try {
      sample.nlrp = compute_nlrp(snap, sample.risk, cfg.planning.theta);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RiskTooLarge) throw;
    }
    history.push_back(sample);
    if (!sample.nlrp) {
      ++report.risk_too_large_slots;
      for (auto& pm : report.pairs) {
        ++pm.slots;
        ++pm.infeasible_slots;
        pm.relay_history.push_back(-1);
      }
      continue;
    }
    const PlanningContext ctx(snap, sample.risk, *sample.nlrp, cfg.planning);

    for (std::size_t pi = 0; pi < cfg.pairs.size(); ++pi) {
      auto& pm = report.pairs[pi];
      ++pm.slots;
      const auto [si, di] = endpoints[pi];
      const auto acc_s = snap.access(si), acc_d = snap.access(di);
      if (!acc_s || !acc_d) {
        ++pm.coverage_gap_slots;
        pm.relay_history.push_back(-1);
        continue;
      }
      const NodeId gs = snap.ground_node(si), gd = snap.ground_node(di);
      RelayPlan plan;
      double unconstrained = 0.0;
      try {
        plan = select_relays(ctx, *acc_s, *acc_d);
        unconstrained = ctx.tree(gs).distance(gd);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PlanInfeasible) throw;
        ++pm.infeasible_slots;
        pm.relay_history.push_back(-1);
        continue;
      }
      plan.src = pm.src;
      plan.dst = pm.dst;
      const double gsl_s = *g.link_delay(gs, snap.sat_node(*acc_s));
      const double gsl_d = *g.link_delay(gd, snap.sat_node(*acc_d));
      const double planned = gsl_s + plan.path.total_delay + gsl_d;
      pm.relay_history.push_back(static_cast<int>(plan.relays.size()));
      pm.inflation_sum += delay_inflation(planned, unconstrained);
      ++pm.inflation_samples;
      if (options.keep_plans) {
        report.plans.push_back({slot, t, pm.src, pm.dst, to_string(plan.overlap), plan.relays, plan.thresholds,
                                plan.path.nodes.size(), planned, unconstrained});
      }

      if (!options.verify) continue;
      refresh_probes(probes[pi], plan, g, cfg.timing, cfg.probe_period_s, rng, t);
      const auto& recs = probes[pi].records;
      TransitEnv env;
      env.snapshot = &snap;
      env.keys = &keys;
      env.timing = &cfg.timing;
      env.rng = &rng;
      // A replayed header may name more segments than the current plan; those
      // have no fresh measurement and get no slack.
      env.probe_dt = [&recs](std::size_t i) { return i < recs.size() ? recs[i].dt : 0.0; };
      env.freshness_s = cfg.freshness_s;
      env.ops = &report.ops;

      bool fp = false, fn = false;
      auto record = [&](const TransitResult& res) {
        ++pm.sent;
        const bool risky = std::any_of(res.trace.begin(), res.trace.end(), [&](NodeId v) { return ctx.is_risky(v); });
        (risky ? pm.risky_packets : pm.clean_packets)++;
        if (res.verdict.accepted) {
          ++pm.accepted;
          fn = fn || risky;
        } else {
          ++pm.rejected;
          ++pm.reject_reasons[to_string(res.verdict.reason)];
          fp = fp || !risky;
        }
      };

      const Packet pkt = src_prepare(make_payload(cfg.payload_bytes, slot, pi), plan, keys, t, gsl_s, cfg.alpha_s,
                                     cfg.slot_length_s, &report.ops);
      const double t_start = t + gsl_s + cfg.timing.hop_processing_s;
      const auto route = hops_of(plan.path.nodes);
      const auto honest = transit(pkt, route, t_start, gsl_d, env);
      record(honest);

      for (std::size_t ai = 0; ai < cfg.attacks.size(); ++ai) {
        const auto& spec = cfg.attacks[ai];
        if (spec.kind == AttackKind::Replay && honest.delivered && honest.verdict.accepted)
          captures[pi][ai].capture(slot, honest.packet);
        if (!spec.active(slot)) continue;
        try {
          const auto act = apply(spec, pkt, plan, ctx, slot, captures[pi][ai]);
          record(transit(act.packet, act.route, t_start, gsl_d, env, act.hook));
          ++pm.attacks_applied;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::InfeasibleAttack) throw;
          ++pm.attacks_infeasible;
        }
      }
      ++pm.evaluated_slots;
      if (fp) ++pm.fp_slots;
      if (fn) ++pm.fn_slots;
    }
  }
  report.variation = variation_counts(history);
  return report;
}

ThetaSweep theta_sweep(const ScenarioConfig& cfg, const std::vector<int>& thetas, long slot_step) {
  cfg.validate();
  if (thetas.empty() || slot_step < 1) throw Error(ErrorCode::InvalidConfig, "empty theta sweep");
  const Shell shell(cfg.shell);
  std::vector<std::pair<std::size_t, std::size_t>> endpoints;
  for (const auto& [s, d] : cfg.pairs) {
    std::size_t si = cfg.ground.size(), di = cfg.ground.size();
    for (std::size_t i = 0; i < cfg.ground.size(); ++i) {
      if (cfg.ground[i].id == s) si = i;
      if (cfg.ground[i].id == d) di = i;
    }
    endpoints.emplace_back(si, di);
  }
  ThetaSweep out;
  const std::size_t m = thetas.size();
  std::vector<double> common_sum(m, 0.0), all_sum(m, 0.0);
  std::vector<long> feasible(m, 0);

  for (long slot = cfg.slots.first; slot <= cfg.slots.last; slot += slot_step) {
    const double t = static_cast<double>(slot) * cfg.slot_length_s;
    const Snapshot snap = Snapshot::build(shell, t, cfg.ground, cfg.topology);
    const auto risk = risk_satellites(snap, cfg.risk);
    std::vector<PlanningContext> ctx;
    try {
      for (int th : thetas) {
        PlanningOptions opt = cfg.planning;
        opt.theta = th;
        ctx.emplace_back(snap, risk, compute_nlrp(snap, risk, th), opt);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RiskTooLarge) throw;
      continue;
    }
    const auto& g = snap.graph();
    for (const auto& [si, di] : endpoints) {
      const auto acc_s = snap.access(si), acc_d = snap.access(di);
      if (!acc_s || !acc_d) continue;
      ++out.total_samples;
      const NodeId gs = snap.ground_node(si), gd = snap.ground_node(di);
      const double gsl = *g.link_delay(gs, snap.sat_node(*acc_s)) + *g.link_delay(gd, snap.sat_node(*acc_d));
      const double unconstrained = ctx.front().tree(gs).distance(gd);
      std::vector<double> infl(m);
      bool all = true;
      for (std::size_t k = 0; k < m; ++k) {
        try {
          const auto plan = select_relays(ctx[k], *acc_s, *acc_d);
          infl[k] = delay_inflation(gsl + plan.path.total_delay, unconstrained);
          ++feasible[k];
          all_sum[k] += infl[k];
        } catch (const Error& e) {
          if (e.code() != ErrorCode::PlanInfeasible) throw;
          all = false;
        }
      }
      if (!all) continue;
      ++out.common_samples;
      for (std::size_t k = 0; k < m; ++k) common_sum[k] += infl[k];
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    ThetaPoint p;
    p.theta = thetas[k];
    p.feasible = feasible[k];
    p.mean_inflation = out.common_samples ? common_sum[k] / static_cast<double>(out.common_samples) : 0.0;
    p.mean_inflation_all = feasible[k] ? all_sum[k] / static_cast<double>(feasible[k]) : 0.0;
    out.points.push_back(p);
  }
  return out;
}

}  // namespace leoveri
