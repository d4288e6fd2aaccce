#pragma once

#include <deque>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "leoveri/drsa.hpp"
#include "leoveri/veriproto.hpp"

namespace leoveri {

enum class AttackKind { HijackDetour, PathFieldModify, RelaySkip, TimestampForge, MacForge, Replay, PayloadTamper };

inline constexpr AttackKind kAllAttackKinds[] = {
    AttackKind::HijackDetour,   AttackKind::PathFieldModify, AttackKind::RelaySkip, AttackKind::TimestampForge,
    AttackKind::MacForge,       AttackKind::Replay,          AttackKind::PayloadTamper};

const char* to_string(AttackKind k);
// Throws Error(InvalidConfig).
AttackKind parse_attack_kind(std::string_view name);

struct AttackSpec {
  AttackKind kind = AttackKind::HijackDetour;
  // Relay index for relay-targeted kinds, segment index for HijackDetour;
  // -1 picks the default (last relay / weakest segment).
  int target = -1;
  long first_slot = 0;
  long last_slot = std::numeric_limits<long>::max();
  // Active on every period-th slot of the window.
  int period = 1;
  // Gain custody through a detour into the risk set. Without it the attacker
  // sits on the final inter-satellite hop before the destination satellite.
  bool detour = true;
  int replay_delay_slots = 5;

  bool active(long slot) const {
    return slot >= first_slot && slot <= last_slot && period > 0 && (slot - first_slot) % period == 0;
  }
};

// Packets captured for later replay, oldest first.
struct CaptureBuffer {
  struct Entry {
    long slot = 0;
    Packet packet;
  };
  std::deque<Entry> entries;
  std::size_t capacity = 64;

  void capture(long slot, Packet p);
  // Oldest packet captured at or before `slot - delay`; removes it.
  std::optional<Packet> take(long slot, int delay);
};

// Forwarding action for one attacked packet.
struct AttackAction {
  Packet packet;
  std::vector<Hop> route;  // from the first hop the packet takes
  HopHook hook;
  bool replayed = false;
  // Extra link delay the route adds over the planned path.
  double detour_delay_s = 0.0;
};

struct DetourSite {
  std::size_t segment = 0;
  NodeId entry = -1;  // segment node the detour leaves from and returns to
  NodeId risk = -1;   // risk satellite at the far end
  std::vector<NodeId> out_and_back;  // entry -> ... -> risk -> ... -> entry
  double extra_delay_s = 0.0;
};

// Shortest in-and-out excursion from any node of the allowed segments to the
// risk set. Throws Error(InfeasibleAttack) when the risk set is empty or
// unreachable.
DetourSite cheapest_detour(const PlanningContext& ctx, const RelayPlan& plan, const std::vector<std::size_t>& segments);

// Builds the forwarding action for `packet` (already prepared from `plan`).
// Throws Error(InfeasibleAttack) when the scene cannot host the attack.
AttackAction apply(const AttackSpec& spec, const Packet& packet, const RelayPlan& plan, const PlanningContext& ctx,
                   long slot, CaptureBuffer& captures);

}  // namespace leoveri
