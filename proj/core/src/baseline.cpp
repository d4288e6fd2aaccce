#include "leoveri/baseline.hpp"

#include <algorithm>
#include <limits>

#include "leoveri/error.hpp"
#include "leoveri/routing.hpp"

namespace leoveri {

LinearDelayModel fit_delay_model(const Snapshot& snapshot) {
  const auto ground = snapshot.ground();
  std::vector<std::size_t> stations;
  for (std::size_t i = 0; i < ground.size(); ++i)
    if (ground[i].role == GroundRole::Station && snapshot.access(i)) stations.push_back(i);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const auto tree = dijkstra(snapshot.graph(), snapshot.ground_node(stations[i]));
    for (std::size_t j = i + 1; j < stations.size(); ++j) {
      const NodeId v = snapshot.ground_node(stations[j]);
      if (!tree.reachable(v)) continue;
      const double x = great_circle_km(ground[stations[i]].location, ground[stations[j]].location);
      const double y = tree.distance(v);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  LinearDelayModel m;
  const double den = static_cast<double>(n) * sxx - sx * sx;
  if (n < 2 || den <= 1e-9 * sxx) return m;
  m.b = (static_cast<double>(n) * sxy - sx * sy) / den;
  m.a = (sy - m.b * sx) / static_cast<double>(n);
  return m;
}

double boundary_bound(const LinearDelayModel& model, const RiskArea& area, LatLon s, LatLon d, int per_edge) {
  const auto& poly = area.polygon();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3 u = to_cartesian(poly[i], 1.0);
    const Vec3 w = to_cartesian(poly[(i + 1) % poly.size()], 1.0);
    for (int k = 0; k <= per_edge; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(per_edge + 1);
      const LatLon x = to_latlon(((1.0 - f) * u + f * w).unit());
      best = std::min(best, model.estimate(s, x) + model.estimate(x, d));
    }
  }
  return best;
}

AlibiChoice choose_alibi_relay(const LinearDelayModel& model, const RiskArea& area,
                               std::span<const GroundEntity> ground, std::size_t s, std::size_t d, double f) {
  AlibiChoice c;
  c.bound_s = boundary_bound(model, area, ground[s].location, ground[d].location);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < ground.size(); ++r) {
    if (r == s || r == d || ground[r].role != GroundRole::Station) continue;
    const double sum = model.estimate(ground[s].location, ground[r].location) +
                       model.estimate(ground[r].location, ground[d].location);
    if ((1.0 + f) * sum < c.bound_s && sum < best) {
      best = sum;
      c.relay = r;
      c.relay_estimate_s = sum;
    }
  }
  return c;
}

namespace {

// Joins a->r and r->d, dropping the repeated relay node.
Path concat(const Path& first, const Path& second) {
  Path p = first;
  p.nodes.insert(p.nodes.end(), second.nodes.begin() + 1, second.nodes.end());
  p.total_delay += second.total_delay;
  return p;
}

}  // namespace

MetricsReport alibi_baseline(const ScenarioConfig& cfg) {
  cfg.validate();
  const Shell shell(cfg.shell);
  MetricsReport report;
  report.scheme = "ALIBI";

  std::vector<std::pair<std::size_t, std::size_t>> endpoints;
  for (const auto& [s, d] : cfg.pairs) {
    auto idx = [&](const std::string& id) {
      for (std::size_t i = 0; i < cfg.ground.size(); ++i)
        if (cfg.ground[i].id == id) return i;
      throw Error(ErrorCode::InvalidConfig, "unknown ground id " + id);
    };
    endpoints.emplace_back(idx(s), idx(d));
    PairMetrics pm;
    pm.src = s;
    pm.dst = d;
    report.pairs.push_back(std::move(pm));
  }

  const double t0 = static_cast<double>(cfg.slots.first) * cfg.slot_length_s;
  const auto model = fit_delay_model(Snapshot::build(shell, t0, cfg.ground, cfg.topology));
  std::vector<AlibiChoice> choice;
  for (const auto& [s, d] : endpoints)
    choice.push_back(choose_alibi_relay(model, cfg.risk, cfg.ground, s, d, cfg.alibi_f));

  for (long slot = cfg.slots.first; slot <= cfg.slots.last; ++slot) {
    const double t = static_cast<double>(slot) * cfg.slot_length_s;
    ++report.slots;
    const Snapshot snap = Snapshot::build(shell, t, cfg.ground, cfg.topology);
    const auto& g = snap.graph();
    const auto risk = risk_satellites(snap, cfg.risk);
    const auto risk_nodes = risk.nodes(snap.grid());
    auto risky = [&](const Path& p) {
      return std::any_of(p.nodes.begin(), p.nodes.end(),
                         [&](NodeId v) { return std::binary_search(risk_nodes.begin(), risk_nodes.end(), v); });
    };

    for (std::size_t pi = 0; pi < endpoints.size(); ++pi) {
      auto& pm = report.pairs[pi];
      ++pm.slots;
      const auto& c = choice[pi];
      if (!c.relay) {
        ++pm.no_relay_slots;
        pm.relay_history.push_back(-1);
        continue;
      }
      const auto [si, di] = endpoints[pi];
      if (!snap.access(si) || !snap.access(di) || !snap.access(*c.relay)) {
        ++pm.coverage_gap_slots;
        pm.relay_history.push_back(-1);
        continue;
      }
      const NodeId gs = snap.ground_node(si), gd = snap.ground_node(di), gr = snap.ground_node(*c.relay);
      const auto from_s = dijkstra(g, gs);
      const auto from_r = dijkstra(g, gr);
      if (!from_s.reachable(gr) || !from_r.reachable(gd)) {
        ++pm.coverage_gap_slots;
        pm.relay_history.push_back(-1);
        continue;
      }
      pm.relay_history.push_back(1);
      const Path honest = concat(from_s.path_to(gr), from_r.path_to(gd));
      pm.inflation_sum += delay_inflation(honest.total_delay, from_s.distance(gd));
      ++pm.inflation_samples;

      bool fp = false, fn = false;
      auto record = [&](const Path& p) {
        ++pm.sent;
        const double measured = p.total_delay + cfg.timing.hop_processing_s * static_cast<double>(p.hops());
        const bool accepted = (1.0 + cfg.alibi_f) * measured < c.bound_s;
        const bool on_risk = risky(p);
        (on_risk ? pm.risky_packets : pm.clean_packets)++;
        if (accepted) {
          ++pm.accepted;
          fn = fn || on_risk;
        } else {
          ++pm.rejected;
          ++pm.reject_reasons["delay_bound"];
          fp = fp || !on_risk;
        }
      };
      record(honest);

      if (slot % 2 == 1 && !risk_nodes.empty()) {
        // Hijack: steer the first leg through the closest risk satellite.
        NodeId x = -1;
        double best = kInfinity;
        for (NodeId v : risk_nodes) {
          const double cost = from_s.distance(v) + from_r.distance(v);
          if (cost < best) {
            best = cost;
            x = v;
          }
        }
        if (x >= 0) {
          const Path leg1 = concat(from_s.path_to(x), dijkstra(g, x).path_to(gr));
          record(concat(leg1, from_r.path_to(gd)));
          ++pm.attacks_applied;
        } else {
          ++pm.attacks_infeasible;
        }
      }
      ++pm.evaluated_slots;
      if (fp) ++pm.fp_slots;
      if (fn) ++pm.fn_slots;
    }
  }
  return report;
}

}  // namespace leoveri
