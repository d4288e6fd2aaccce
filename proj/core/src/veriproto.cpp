#include "leoveri/veriproto.hpp"

#include <cmath>
#include <limits>

#include "leoveri/error.hpp"

namespace leoveri {

namespace {

void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    const std::uint32_t v = std::uint32_t{data_[pos_]} << 24 | std::uint32_t{data_[pos_ + 1]} << 16 |
                            std::uint32_t{data_[pos_ + 2]} << 8 | data_[pos_ + 3];
    pos_ += 4;
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw Error(ErrorCode::Decode, "header truncated at byte " + std::to_string(pos_));
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::uint16_t pack_path_node(SatCoord c) { return static_cast<std::uint16_t>(c.p << 8 | c.n); }

void put_path(Bytes& out, const std::vector<SatCoord>& path) {
  if (path.size() > 255) throw Error(ErrorCode::Decode, "path longer than 255 nodes");
  out.push_back(static_cast<std::uint8_t>(path.size()));
  for (auto c : path) {
    if (c.p < 0 || c.p > 255 || c.n < 0 || c.n > 255)
      throw Error(ErrorCode::Decode, "path node does not fit the 2-byte encoding");
    put_u16(out, pack_path_node(c));
  }
}

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

}  // namespace

std::uint32_t pack_relay_id(SatCoord c) {
  return static_cast<std::uint32_t>(c.p) << 16 | static_cast<std::uint32_t>(c.n);
}

SatCoord unpack_relay_id(std::uint32_t id) {
  return {static_cast<int>(id >> 16), static_cast<int>(id & 0xFFFF)};
}

Bytes encode(const VeriHeader& h) {
  if (h.auth.empty() || h.auth.size() > 256) throw Error(ErrorCode::Decode, "auth chain needs 1..256 blocks");
  Bytes out;
  out.reserve(h.wire_size());
  put_u32(out, h.ts0);
  put_u32(out, h.hash);
  out.push_back(static_cast<std::uint8_t>(h.relay_count()));
  put_path(out, h.path);
  for (const auto& b : h.auth) {
    put_u32(out, b.relay_id);
    put_u32(out, b.delta);
    put_u32(out, b.ts);
    put_u32(out, b.mac);
  }
  return out;
}

VeriHeader decode(std::span<const std::uint8_t> wire) {
  Reader r(wire);
  VeriHeader h;
  h.ts0 = r.u32();
  h.hash = r.u32();
  const std::size_t blocks = std::size_t{r.u8()} + 1;
  const std::size_t path_len = r.u8();
  h.path.reserve(path_len);
  for (std::size_t i = 0; i < path_len; ++i) {
    const auto v = r.u16();
    h.path.push_back({v >> 8, v & 0xFF});
  }
  h.auth.resize(blocks);
  for (auto& b : h.auth) {
    b.relay_id = r.u32();
    b.delta = r.u32();
    b.ts = r.u32();
    b.mac = r.u32();
  }
  if (!r.done()) throw Error(ErrorCode::Decode, "trailing bytes after auth chain");
  return h;
}

namespace {

// Whole nanoseconds first, so decimal inputs like 249e-6 s land on 249 us
// rather than 248.999... us.
double floor_us(double t_s) { return std::floor(std::nearbyint(t_s * 1e9) / 1e3); }
double ceil_us_exact(double t_s) { return std::ceil(std::nearbyint(t_s * 1e9) / 1e3); }

}  // namespace

std::uint32_t to_wire_us(double t_s) {
  const double wrapped = std::fmod(floor_us(t_s), 4294967296.0);
  return static_cast<std::uint32_t>(wrapped < 0 ? wrapped + 4294967296.0 : wrapped);
}

std::uint32_t delta_to_wire(double delta_s) {
  if (!(delta_s < kInfinity)) return kInfiniteDelta;
  const double us = floor_us(delta_s);
  if (us >= static_cast<double>(kInfiniteDelta)) return kInfiniteDelta - 1;
  return us <= 0 ? 0 : static_cast<std::uint32_t>(us);
}

std::uint32_t ceil_us(double dt_s) {
  const double us = ceil_us_exact(dt_s);
  if (us <= 0) return 0;
  if (us >= static_cast<double>(kInfiniteDelta)) return kInfiniteDelta;
  return static_cast<std::uint32_t>(us);
}

KeyRing::KeyRing(Bytes master) : master_(std::move(master)) {
  if (master_.empty()) throw Error(ErrorCode::InvalidConfig, "master key is empty");
}

void KeyRing::provision(const std::string& src, const std::string& dst) {
  const auto d = hmac_sha256(master_, bytes_of("session|" + src + "|" + dst));
  sessions_[{src, dst}] = Bytes(d.begin(), d.end());
}

void KeyRing::set_session_key(const std::string& src, const std::string& dst, Bytes key) {
  sessions_[{src, dst}] = std::move(key);
}

void KeyRing::set_node_key(SatCoord c, Bytes key) { node_overrides_[c] = std::move(key); }

bool KeyRing::has_session(const std::string& src, const std::string& dst) const {
  return sessions_.count({src, dst}) != 0;
}

const Bytes& KeyRing::session_key(const std::string& src, const std::string& dst) const {
  const auto it = sessions_.find({src, dst});
  if (it == sessions_.end()) throw Error(ErrorCode::InvalidConfig, "no session between " + src + " and " + dst);
  return it->second;
}

Bytes KeyRing::node_key(SatCoord c) const {
  if (const auto it = node_overrides_.find(c); it != node_overrides_.end()) return it->second;
  Bytes label = bytes_of("node|");
  put_u32(label, pack_relay_id(c));
  const auto d = hmac_sha256(master_, label);
  return Bytes(d.begin(), d.end());
}

std::uint32_t compute_hash(std::span<const std::uint8_t> session_key, std::span<const std::uint8_t> payload,
                           const VeriHeader& h) {
  Bytes msg(payload.begin(), payload.end());
  put_path(msg, h.path);
  for (const auto& b : h.auth) put_u32(msg, b.delta);
  put_u32(msg, h.ts0);
  for (std::size_t i = 0; i < h.relay_count(); ++i) put_u32(msg, h.auth[i].relay_id);
  return truncate32(hmac_sha256(session_key, msg));
}

std::uint32_t compute_mac(std::span<const std::uint8_t> node_key, std::uint32_t hash, std::uint32_t ts,
                          std::uint32_t relay_id) {
  Bytes msg;
  msg.reserve(12);
  put_u32(msg, hash);
  put_u32(msg, ts);
  put_u32(msg, relay_id);
  return truncate32(hmac_sha256(node_key, msg));
}

Packet src_prepare(Bytes payload, const RelayPlan& plan, const KeyRing& keys, double ts_send, double access_delay_s,
                   double alpha_s, double slot_length_s, OpCounts* ops) {
  if (ts_send < plan.t || ts_send >= plan.t + slot_length_s)
    throw Error(ErrorCode::PlanExpired, "plan for t=" + std::to_string(plan.t) + " does not cover send time " +
                                            std::to_string(ts_send));
  if (plan.thresholds.size() != plan.relays.size() + 1)
    throw Error(ErrorCode::InvalidConfig, "plan thresholds do not match its relays");
  Packet pkt;
  pkt.src = plan.src;
  pkt.dst = plan.dst;
  pkt.payload = std::move(payload);
  auto& h = pkt.header;
  h.ts0 = to_wire_us(ts_send + access_delay_s + alpha_s);
  for (NodeId v : plan.path.nodes) h.path.push_back(plan.grid.coord_of(v));
  for (std::size_t i = 0; i < plan.relays.size(); ++i)
    h.auth.push_back({pack_relay_id(plan.relays[i]), delta_to_wire(plan.thresholds[i]), 0, 0});
  h.auth.push_back({pack_relay_id(plan.sat_d), delta_to_wire(plan.thresholds.back()), 0, 0});
  h.hash = compute_hash(keys.session_key(pkt.src, pkt.dst), pkt.payload, h);
  if (ops) ++ops->hash;
  return pkt;
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::SourceAuthFail: return "SourceAuthFail";
    case RejectReason::HashMismatch: return "HashMismatch";
    case RejectReason::MacChainFail: return "MacChainFail";
    case RejectReason::MissingRelayUpdate: return "MissingRelayUpdate";
    case RejectReason::SegmentDelayExceeded: return "SegmentDelayExceeded";
    case RejectReason::StaleTimestamp: return "StaleTimestamp";
  }
  return "?";
}

int relay_block_index(const VeriHeader& h, SatCoord c) {
  const auto id = pack_relay_id(c);
  for (std::size_t i = 0; i < h.relay_count(); ++i)
    if (h.auth[i].relay_id == id) return static_cast<int>(i);
  return -1;
}

namespace {

bool within_bound(std::int64_t diff_us, std::uint32_t delta, double dt_s) {
  if (delta == kInfiniteDelta) return true;
  return diff_us <= static_cast<std::int64_t>(delta) + static_cast<std::int64_t>(ceil_us(dt_s));
}

}  // namespace

Verdict relay_process(Packet& packet, SatCoord self, double dt_s, double now_s, const KeyRing& keys, OpCounts* ops) {
  auto& h = packet.header;
  const int i = relay_block_index(h, self);
  if (i < 0) return Verdict::accept();
  std::uint32_t prev_ts = h.ts0;
  if (i > 0) {
    if (!h.auth[static_cast<std::size_t>(i) - 1].updated())
      return Verdict::reject(RejectReason::MissingRelayUpdate, i - 1);
    prev_ts = h.auth[static_cast<std::size_t>(i) - 1].ts;
  }
  auto& block = h.auth[static_cast<std::size_t>(i)];
  const std::uint32_t now = to_wire_us(now_s);
  if (!within_bound(wire_diff(now, prev_ts), block.delta, dt_s))
    return Verdict::reject(RejectReason::SegmentDelayExceeded, i);
  block.ts = now;
  block.mac = compute_mac(keys.node_key(self), h.hash, now, block.relay_id);
  if (ops) ++ops->mac_generate;
  return Verdict::accept();
}

void dst_sat_stamp(Packet& packet, double now_s, const KeyRing& keys, OpCounts* ops) {
  auto& block = packet.header.auth.back();
  block.ts = to_wire_us(now_s);
  block.mac = compute_mac(keys.node_key(unpack_relay_id(block.relay_id)), packet.header.hash, block.ts,
                          block.relay_id);
  if (ops) ++ops->mac_generate;
}

Verdict dst_verify(const Packet& packet, const KeyRing& keys, double dt_last_s, double arrival_s, double freshness_s, OpCounts* ops) {
  const auto& h = packet.header;
  if (!keys.has_session(packet.src, packet.dst)) return Verdict::reject(RejectReason::SourceAuthFail);
  if (h.auth.empty()) return Verdict::reject(RejectReason::HashMismatch);
  if (ops) ++ops->hash;
  if (compute_hash(keys.session_key(packet.src, packet.dst), packet.payload, h) != h.hash)
    return Verdict::reject(RejectReason::HashMismatch);
  for (std::size_t i = 0; i < h.auth.size(); ++i) {
    const auto& b = h.auth[i];
    const int idx = static_cast<int>(i);
    if (!b.updated()) return Verdict::reject(RejectReason::MissingRelayUpdate, idx);
    if (ops) ++ops->mac_verify;
    if (compute_mac(keys.node_key(unpack_relay_id(b.relay_id)), h.hash, b.ts, b.relay_id) != b.mac)
      return Verdict::reject(RejectReason::MacChainFail, idx);
  }
  const auto& last = h.auth.back();
  const auto window = static_cast<std::int64_t>(std::ceil(freshness_s * 1e6));
  const std::int64_t age = wire_diff(last.ts, h.ts0);
  const std::int64_t arrival_age = wire_diff(to_wire_us(arrival_s), h.ts0);
  if (age < 0 || age > window || arrival_age > window) return Verdict::reject(RejectReason::StaleTimestamp);
  const std::uint32_t prev_ts = h.auth.size() == 1 ? h.ts0 : h.auth[h.auth.size() - 2].ts;
  if (!within_bound(wire_diff(last.ts, prev_ts), last.delta, dt_last_s))
    return Verdict::reject(RejectReason::SegmentDelayExceeded, static_cast<int>(h.auth.size() - 1));
  return Verdict::accept();
}

double JitterModel::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::Uniform: return std::uniform_real_distribution<double>(a, b)(rng);
    case Kind::LogNormal: return std::lognormal_distribution<double>(std::log(a), b)(rng);
  }
  return 0.0;
}

ProbeRecord probe_segment(const Graph& g, std::span<const NodeId> segment_nodes, const TimingModel& timing,
                          std::mt19937_64& rng, double now_s) {
  if (segment_nodes.empty()) throw Error(ErrorCode::InvalidConfig, "cannot probe an empty segment");
  ProbeRecord rec;
  rec.prev = segment_nodes.front();
  rec.node = segment_nodes.back();
  rec.measured_at = now_s;
  for (std::size_t i = 1; i < segment_nodes.size(); ++i) {
    const auto d = g.link_delay(segment_nodes[i - 1], segment_nodes[i]);
    if (!d) throw Error(ErrorCode::Unreachable, "probe crosses a missing link");
    rec.dt += timing.hop_cost(*d, rng);
  }
  return rec;
}

std::vector<Hop> hops_of(std::span<const NodeId> nodes) {
  std::vector<Hop> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) out.push_back({v, true});
  return out;
}

TransitResult transit(Packet packet, std::span<const Hop> route, double t_start_s, double dst_gsl_delay_s,
                      const TransitEnv& env, const HopHook& hook) {
  TransitResult res;
  if (route.empty()) throw Error(ErrorCode::InvalidConfig, "empty route");
  const auto& snap = *env.snapshot;
  const auto& g = snap.graph();
  const std::uint32_t dst_sat_id = packet.header.auth.back().relay_id;
  double t = t_start_s;
  for (std::size_t i = 0; i < route.size(); ++i) {
    const NodeId v = route[i].node;
    if (i > 0) {
      const auto d = g.link_delay(route[i - 1].node, v);
      if (!d)
        throw Error(ErrorCode::Unreachable,
                    "route hop " + std::to_string(route[i - 1].node) + " -> " + std::to_string(v) + " has no link");
      t += env.timing->hop_cost(*d, *env.rng);
    }
    res.trace.push_back(v);
    if (route[i].process && snap.is_satellite(v)) {
      const SatCoord c = snap.coord_of(v);
      const int ri = relay_block_index(packet.header, c);
      if (ri >= 0) {
        const auto v_relay = relay_process(packet, c, env.probe_dt(static_cast<std::size_t>(ri)), t, *env.keys, env.ops);
        if (!v_relay.accepted) {
          res.verdict = v_relay;
          res.finished_at = t;
          res.packet = std::move(packet);
          return res;
        }
      } else if (pack_relay_id(c) == dst_sat_id) {
        dst_sat_stamp(packet, t, *env.keys, env.ops);
      }
    }
    if (hook) hook(i, v, t, packet);
  }
  t += dst_gsl_delay_s;
  res.delivered = true;
  res.verdict = dst_verify(packet, *env.keys, env.probe_dt(packet.header.auth.size() - 1), t, env.freshness_s, env.ops);
  res.finished_at = t;
  res.packet = std::move(packet);
  return res;
}

}  // namespace leoveri
