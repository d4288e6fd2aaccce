#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leoveri/crypto.hpp"
#include "leoveri/drsa.hpp"

namespace leoveri {

// Wire layout (all integers big-endian):
//   ts0 u32 | hash u32 | relay_count u8 | path_len u8 | path_len x u16 (p << 8 | n)
//   | (relay_count + 1) x AuthBlock
// AuthBlock: relay_id u32 (p << 16 | n) | delta u32 (us) | ts u32 (us) | mac u32
inline constexpr std::size_t kAuthBlockBytes = 16;
inline constexpr std::uint32_t kInfiniteDelta = 0xFFFFFFFFu;

struct AuthBlock {
  std::uint32_t relay_id = 0;
  std::uint32_t delta = 0;
  std::uint32_t ts = 0;
  std::uint32_t mac = 0;

  // Written by its node. The source fills relay_id and delta only.
  bool updated() const { return ts != 0 || mac != 0; }
  friend bool operator==(const AuthBlock&, const AuthBlock&) = default;
};

std::uint32_t pack_relay_id(SatCoord c);
SatCoord unpack_relay_id(std::uint32_t id);

struct VeriHeader {
  std::uint32_t ts0 = 0;
  std::uint32_t hash = 0;
  std::vector<SatCoord> path;
  // Relay blocks in order, then the destination-satellite block.
  std::vector<AuthBlock> auth;

  std::size_t relay_count() const { return auth.empty() ? 0 : auth.size() - 1; }
  std::size_t security_field_bytes() const { return kAuthBlockBytes * auth.size(); }
  std::size_t wire_size() const { return 10 + 2 * path.size() + security_field_bytes(); }
  friend bool operator==(const VeriHeader&, const VeriHeader&) = default;
};

Bytes encode(const VeriHeader& h);
// Throws Error(Decode) on malformed input.
VeriHeader decode(std::span<const std::uint8_t> wire);

struct Packet {
  std::string src;
  std::string dst;
  Bytes payload;
  VeriHeader header;
  friend bool operator==(const Packet&, const Packet&) = default;
};

// Microsecond wire timestamps wrap modulo 2^32.
std::uint32_t to_wire_us(double t_s);
std::uint32_t delta_to_wire(double delta_s);
std::uint32_t ceil_us(double dt_s);
// Wrap-aware a - b in microseconds.
inline std::int64_t wire_diff(std::uint32_t a, std::uint32_t b) {
  return static_cast<std::int32_t>(a - b);
}

struct OpCounts {
  std::uint64_t hash = 0;
  std::uint64_t mac_generate = 0;
  std::uint64_t mac_verify = 0;
};

// Session keys. Key negotiation is outside the model: keys are derived from a
// scenario master secret, and only provisioned (src, dst) sessions exist.
class KeyRing {
 public:
  explicit KeyRing(Bytes master);

  void provision(const std::string& src, const std::string& dst);
  void set_session_key(const std::string& src, const std::string& dst, Bytes key);
  void set_node_key(SatCoord c, Bytes key);

  bool has_session(const std::string& src, const std::string& dst) const;
  // Throws Error(InvalidConfig) for an unprovisioned session.
  const Bytes& session_key(const std::string& src, const std::string& dst) const;
  Bytes node_key(SatCoord c) const;

 private:
  Bytes master_;
  std::map<std::pair<std::string, std::string>, Bytes> sessions_;
  std::map<SatCoord, Bytes> node_overrides_;
};

std::uint32_t compute_hash(std::span<const std::uint8_t> session_key, std::span<const std::uint8_t> payload,
                           const VeriHeader& h);
std::uint32_t compute_mac(std::span<const std::uint8_t> node_key, std::uint32_t hash, std::uint32_t ts,
                          std::uint32_t relay_id);

// ts0 = ts_send + access_delay + alpha. Throws Error(PlanExpired) when ts_send
// falls outside [plan.t, plan.t + slot_length_s).
Packet src_prepare(Bytes payload, const RelayPlan& plan, const KeyRing& keys, double ts_send, double access_delay_s,
                   double alpha_s, double slot_length_s = 1.0, OpCounts* ops = nullptr);

enum class RejectReason {
  SourceAuthFail,
  HashMismatch,
  MacChainFail,
  MissingRelayUpdate,
  SegmentDelayExceeded,
  StaleTimestamp,
};

const char* to_string(RejectReason r);

struct Verdict {
  bool accepted = true;
  RejectReason reason = RejectReason::SourceAuthFail;
  int segment = -1;  // offending segment or block, when known

  static Verdict accept() { return {}; }
  static Verdict reject(RejectReason r, int segment = -1) { return {false, r, segment}; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Index of c among the relay blocks, or -1.
int relay_block_index(const VeriHeader& h, SatCoord c);

// Relay check and stamp. `dt_s` is the relay's probed delay of the segment
// ending at it. Returns Accept to forward, Reject to drop.
Verdict relay_process(Packet& packet, SatCoord self, double dt_s, double now_s, const KeyRing& keys,
                      OpCounts* ops = nullptr);

// The destination satellite stamps the last block.
void dst_sat_stamp(Packet& packet, double now_s, const KeyRing& keys, OpCounts* ops = nullptr);

inline constexpr double kDefaultFreshnessS = 2.0;

// Checks, first failure wins: session, hash, per-block update and MAC,
// freshness of both ts_d and the arrival time against ts0, last-segment delay.
Verdict dst_verify(const Packet& packet, const KeyRing& keys, double dt_last_s, double arrival_s,
                   double freshness_s = kDefaultFreshnessS, OpCounts* ops = nullptr);

struct JitterModel {
  enum class Kind { None, Uniform, LogNormal };
  Kind kind = Kind::None;
  // Uniform: [a, b] seconds. LogNormal: median a seconds, log-space sigma b.
  double a = 0.0;
  double b = 0.0;

  double sample(std::mt19937_64& rng) const;
};

struct TimingModel {
  double hop_processing_s = 1e-4;
  JitterModel jitter;

  double hop_cost(double link_delay_s, std::mt19937_64& rng) const {
    return link_delay_s + hop_processing_s + jitter.sample(rng);
  }
};

struct ProbeRecord {
  NodeId prev = -1;
  NodeId node = -1;
  double dt = 0.0;
  double measured_at = 0.0;
};

ProbeRecord probe_segment(const Graph& g, std::span<const NodeId> segment_nodes, const TimingModel& timing,
                          std::mt19937_64& rng, double now_s);

struct Hop {
  NodeId node = -1;
  bool process = true;  // false: the node forwards without protocol work
};

std::vector<Hop> hops_of(std::span<const NodeId> nodes);

struct TransitEnv {
  const Snapshot* snapshot = nullptr;
  const KeyRing* keys = nullptr;
  const TimingModel* timing = nullptr;
  std::mt19937_64* rng = nullptr;
  // Probed dt for segment i (the one ending at block i).
  std::function<double(std::size_t)> probe_dt;
  double freshness_s = kDefaultFreshnessS;
  OpCounts* ops = nullptr;
};

struct TransitResult {
  bool delivered = false;
  Verdict verdict;
  std::vector<NodeId> trace;  // every satellite the packet crossed, in order
  double finished_at = 0.0;
  Packet packet;              // as received (or as dropped)
};

// Called after a node's protocol work, with the hop index and current time.
using HopHook = std::function<void(std::size_t, NodeId, double, Packet&)>;

// Moves the packet along `route` (starting at the access satellite at
// t_start_s), runs relay and destination-satellite processing, then delivers
// over the destination GSL and verifies. Throws Error(Unreachable) if two
// consecutive hops are not linked.
TransitResult transit(Packet packet, std::span<const Hop> route, double t_start_s, double dst_gsl_delay_s,
                      const TransitEnv& env, const HopHook& hook = {});

}  // namespace leoveri
