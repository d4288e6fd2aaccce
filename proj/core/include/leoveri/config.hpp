#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leoveri/adversary.hpp"
#include "leoveri/constellation.hpp"
#include "leoveri/drsa.hpp"
#include "leoveri/riskmap.hpp"
#include "leoveri/topology.hpp"
#include "leoveri/veriproto.hpp"

namespace leoveri {

struct SlotRange {
  long first = 0;
  long last = 0;  // inclusive

  long count() const { return last - first + 1; }
};

// Parses "a..b" (inclusive). Throws Error(InvalidConfig).
SlotRange parse_slot_range(std::string_view text);

struct ScenarioConfig {
  ShellConfig shell = ShellConfig::starlink_shell1();
  TopologyOptions topology;
  std::vector<GroundEntity> ground;
  std::vector<std::pair<std::string, std::string>> pairs;
  RiskArea risk = RiskArea::egypt();
  PlanningOptions planning;
  SlotRange slots{0, 599};
  double slot_length_s = 1.0;
  double probe_period_s = 15.0;
  TimingModel timing;
  double alpha_s = 1e-4;
  std::uint64_t seed = 1;
  double freshness_s = kDefaultFreshnessS;
  std::size_t payload_bytes = 1024;
  Bytes master_key = Bytes(32, 0x5a);
  std::vector<AttackSpec> attacks;
  bool baseline = false;
  double alibi_f = 0.0;

  // Throws Error(InvalidConfig) when an invariant is violated.
  void validate() const;
};

// `key = value` lines; '#' starts a comment; `attack` may repeat. Relative
// file paths resolve against `base_dir`.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

// "kind key=value ..." as used by the `attack` key.
AttackSpec parse_attack(std::string_view text);
JitterModel parse_jitter(std::string_view text);

}  // namespace leoveri
