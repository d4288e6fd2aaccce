#include "leoveri/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "leoveri/error.hpp"

namespace leoveri {

const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::HijackDetour: return "hijack";
    case AttackKind::PathFieldModify: return "path_modify";
    case AttackKind::RelaySkip: return "relay_skip";
    case AttackKind::TimestampForge: return "timestamp_forge";
    case AttackKind::MacForge: return "mac_forge";
    case AttackKind::Replay: return "replay";
    case AttackKind::PayloadTamper: return "payload_tamper";
  }
  return "?";
}

AttackKind parse_attack_kind(std::string_view name) {
  for (auto k : kAllAttackKinds)
    if (name == to_string(k)) return k;
  throw Error(ErrorCode::InvalidConfig, "unknown attack kind '" + std::string(name) + "'");
}

void CaptureBuffer::capture(long slot, Packet p) {
  entries.push_back({slot, std::move(p)});
  while (entries.size() > capacity) entries.pop_front();
}

std::optional<Packet> CaptureBuffer::take(long slot, int delay) {
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    if (it->slot + delay > slot) break;
    Packet p = std::move(it->packet);
    entries.erase(it);
    return p;
  }
  return std::nullopt;
}

DetourSite cheapest_detour(const PlanningContext& ctx, const RelayPlan& plan, const std::vector<std::size_t>& segments) {
  const auto* tree = ctx.risk_tree();
  if (!tree) throw Error(ErrorCode::InfeasibleAttack, "no risk satellite to detour through");
  DetourSite best;
  double best_delay = kInfinity;
  for (std::size_t s : segments) {
    for (NodeId v : plan.segments.at(s).nodes) {
      const double d = tree->distance(v);
      if (d < best_delay) {
        best_delay = d;
        best.segment = s;
        best.entry = v;
      }
    }
  }
  if (!(best_delay < kInfinity)) throw Error(ErrorCode::InfeasibleAttack, "risk set unreachable from the segments");
  const Path in = tree->path_to(best.entry);  // risk -> ... -> entry
  best.risk = in.nodes.front();
  best.out_and_back.assign(in.nodes.rbegin(), in.nodes.rend());
  best.out_and_back.insert(best.out_and_back.end(), in.nodes.begin() + 1, in.nodes.end());
  best.extra_delay_s = 2.0 * best_delay;
  return best;
}

namespace {

bool relay_targeted(AttackKind k) {
  return k == AttackKind::RelaySkip || k == AttackKind::TimestampForge || k == AttackKind::MacForge;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

HopHook mutation(AttackKind kind, std::size_t at, std::size_t relay, const RelayPlan& plan, double detour_s) {
  const int per_plane = plan.grid.per_plane;
  return [=](std::size_t i, NodeId, double, Packet& pkt) {
    if (i != at) return;
    auto& h = pkt.header;
    switch (kind) {
      case AttackKind::PathFieldModify: {
        auto& c = h.path[h.path.size() / 2];
        c.n = (c.n + 1) % per_plane;
        break;
      }
      case AttackKind::PayloadTamper:
        if (pkt.payload.empty()) pkt.payload.push_back(0);
        pkt.payload[0] ^= 0x01;
        break;
      case AttackKind::TimestampForge: {
        // Push the stamp later by the detour time so the next segment looks on schedule.
        const auto shift = static_cast<std::uint32_t>(std::max(1.0, std::ceil(detour_s * 1e6)));
        h.auth[relay].ts += shift;
        break;
      }
      case AttackKind::MacForge: {
        const Bytes wrong_key{'e', 'v', 'i', 'l'};
        auto& b = h.auth[relay];
        const auto forged = compute_mac(wrong_key, h.hash, b.ts, b.relay_id);
        b.mac = forged != b.mac ? forged : b.mac ^ 1u;
        break;
      }
      case AttackKind::HijackDetour:
      case AttackKind::RelaySkip:
      case AttackKind::Replay:
        break;
    }
  };
}

}  // namespace

AttackAction apply(const AttackSpec& spec, const Packet& packet, const RelayPlan& plan, const PlanningContext& ctx,
                   long slot, CaptureBuffer& captures) {
  const auto& grid = plan.grid;
  const NodeId sat_d = grid.node_of(plan.sat_d);
  AttackAction act;

  if (spec.kind == AttackKind::Replay) {
    auto old = captures.take(slot, spec.replay_delay_slots);
    if (!old) throw Error(ErrorCode::InfeasibleAttack, "no captured packet old enough to replay");
    act.packet = std::move(*old);
    act.replayed = true;
    if (spec.detour) {
      const auto* tree = ctx.risk_tree();
      if (!tree || !tree->reachable(sat_d))
        throw Error(ErrorCode::InfeasibleAttack, "no risk satellite to replay from");
      act.route = hops_of(tree->path_to(sat_d).nodes);
    } else {
      act.route = {Hop{sat_d, true}};
    }
    return act;
  }

  const std::size_t k = plan.relays.size();
  std::size_t relay = 0;
  if (relay_targeted(spec.kind)) {
    if (k == 0) throw Error(ErrorCode::InfeasibleAttack, std::string(to_string(spec.kind)) + " needs a relay");
    relay = spec.target < 0 ? k - 1 : static_cast<std::size_t>(spec.target);
    if (relay >= k) throw Error(ErrorCode::InfeasibleAttack, "attack targets a relay the plan does not have");
  }

  act.packet = packet;
  act.route = hops_of(plan.path.nodes);
  std::size_t custody = act.route.size() >= 2 ? act.route.size() - 2 : 0;

  if (spec.detour || spec.kind == AttackKind::HijackDetour) {
    std::vector<std::size_t> allowed;
    switch (spec.kind) {
      case AttackKind::HijackDetour:
        if (spec.target >= 0) {
          if (static_cast<std::size_t>(spec.target) > k)
            throw Error(ErrorCode::InfeasibleAttack, "attack targets a segment the plan does not have");
          allowed = {static_cast<std::size_t>(spec.target)};
        } else {
          allowed = range(0, k + 1);
        }
        break;
      case AttackKind::RelaySkip: allowed = range(relay, relay + 2); break;
      case AttackKind::TimestampForge:
      case AttackKind::MacForge: allowed = range(relay + 1, k + 1); break;
      default: allowed = range(0, k + 1); break;
    }
    const auto site = cheapest_detour(ctx, plan, allowed);
    const auto pos = static_cast<std::size_t>(
        std::find(plan.path.nodes.begin(), plan.path.nodes.end(), site.entry) - plan.path.nodes.begin());
    std::vector<Hop> route(act.route.begin(), act.route.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
    for (std::size_t i = 1; i < site.out_and_back.size(); ++i) route.push_back({site.out_and_back[i], true});
    route.insert(route.end(), act.route.begin() + static_cast<std::ptrdiff_t>(pos) + 1, act.route.end());
    const auto risk_at = std::find(site.out_and_back.begin(), site.out_and_back.end(), site.risk) -
                         site.out_and_back.begin();
    custody = pos + static_cast<std::size_t>(risk_at);
    act.route = std::move(route);
    act.detour_delay_s = site.extra_delay_s;
  }

  if (spec.kind == AttackKind::RelaySkip) {
    const NodeId skipped = grid.node_of(plan.relays[relay]);
    for (auto& hop : act.route)
      if (hop.node == skipped) hop.process = false;
  }
  act.hook = mutation(spec.kind, custody, relay, plan, act.detour_delay_s);
  return act;
}

}  // namespace leoveri
