#include "leoveri/config.hpp"

#include <optional>
#include <set>

#include "leoveri/error.hpp"
#include "text_util.hpp"

namespace leoveri {

namespace {

bool parse_bool(std::string_view v, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::InvalidConfig, "expected a boolean for " + std::string(key));
}

int parse_small_int(std::string_view v, std::string_view key) {
  return static_cast<int>(detail::parse_int(v, key));
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

SlotRange parse_slot_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, "slot range must look like a..b");
  SlotRange r{static_cast<long>(detail::parse_int(text.substr(0, dots), "first slot")),
              static_cast<long>(detail::parse_int(text.substr(dots + 2), "last slot"))};
  if (r.first < 0 || r.last < r.first) throw Error(ErrorCode::InvalidConfig, "slot range is empty or negative");
  return r;
}

JitterModel parse_jitter(std::string_view text) {
  const auto parts = detail::split(text, ':');
  JitterModel j;
  if (parts[0] == "none" && parts.size() == 1) return j;
  if (parts.size() != 3) throw Error(ErrorCode::InvalidConfig, "jitter is none, uniform:lo_ms:hi_ms or lognormal:median_ms:sigma");
  if (parts[0] == "uniform") {
    j.kind = JitterModel::Kind::Uniform;
    j.a = detail::parse_double(parts[1], "jitter low") * 1e-3;
    j.b = detail::parse_double(parts[2], "jitter high") * 1e-3;
    if (j.a < 0 || j.b < j.a) throw Error(ErrorCode::InvalidConfig, "uniform jitter needs 0 <= lo <= hi");
  } else if (parts[0] == "lognormal") {
    j.kind = JitterModel::Kind::LogNormal;
    j.a = detail::parse_double(parts[1], "jitter median") * 1e-3;
    j.b = detail::parse_double(parts[2], "jitter sigma");
    if (j.a <= 0 || j.b < 0) throw Error(ErrorCode::InvalidConfig, "lognormal jitter needs median > 0, sigma >= 0");
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown jitter model '" + std::string(parts[0]) + "'");
  }
  return j;
}

AttackSpec parse_attack(std::string_view text) {
  const auto w = words(text);
  if (w.empty()) throw Error(ErrorCode::InvalidConfig, "attack needs a kind");
  AttackSpec a;
  a.kind = parse_attack_kind(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) {
    const auto eq = w[i].find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, "attack option needs key=value");
    const auto key = w[i].substr(0, eq), val = w[i].substr(eq + 1);
    if (key == "target") a.target = parse_small_int(val, key);
    else if (key == "first") a.first_slot = static_cast<long>(detail::parse_int(val, key));
    else if (key == "last") a.last_slot = static_cast<long>(detail::parse_int(val, key));
    else if (key == "period") a.period = parse_small_int(val, key);
    else if (key == "detour") a.detour = parse_bool(val, key);
    else if (key == "replay_delay") a.replay_delay_slots = parse_small_int(val, key);
    else throw Error(ErrorCode::InvalidConfig, "unknown attack option '" + std::string(key) + "'");
  }
  if (a.period < 1) throw Error(ErrorCode::InvalidConfig, "attack period must be >= 1");
  if (a.replay_delay_slots < 1) throw Error(ErrorCode::InvalidConfig, "replay delay must be >= 1 slot");
  return a;
}

void ScenarioConfig::validate() const {
  shell.validate();
  if (ground.empty()) throw Error(ErrorCode::InvalidConfig, "no ground entities");
  if (pairs.empty()) throw Error(ErrorCode::InvalidConfig, "no city pairs");
  std::set<std::string> ids;
  for (const auto& g : ground)
    if (!ids.insert(g.id).second) throw Error(ErrorCode::InvalidConfig, "duplicate ground id " + g.id);
  for (const auto& [s, d] : pairs)
    if (!ids.count(s) || !ids.count(d)) throw Error(ErrorCode::InvalidConfig, "pair " + s + "," + d + " names unknown ground ids");
  if (planning.sigma < 0 || planning.sigma > 2) throw Error(ErrorCode::InvalidConfig, "sigma must be 0, 1 or 2");
  if (planning.theta < 0) throw Error(ErrorCode::InvalidConfig, "theta must be non-negative");
  if (slots.count() < 1) throw Error(ErrorCode::InvalidConfig, "slot range is empty");
  if (!(slot_length_s > 0)) throw Error(ErrorCode::InvalidConfig, "slot length must be positive");
  if (!(probe_period_s > 0)) throw Error(ErrorCode::InvalidConfig, "probing period must be positive");
  if (timing.hop_processing_s < 0) throw Error(ErrorCode::InvalidConfig, "hop processing must be non-negative");
  if (!(freshness_s > 0)) throw Error(ErrorCode::InvalidConfig, "freshness window must be positive");
  if (alibi_f < 0) throw Error(ErrorCode::InvalidConfig, "alibi f must be non-negative");
  if (master_key.empty()) throw Error(ErrorCode::InvalidConfig, "master key is empty");
}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  std::optional<std::filesystem::path> ground_path, pairs_path;
  bool alpha_set = false;
  auto resolve = [&](std::string_view v) {
    std::filesystem::path p{std::string(v)};
    return p.is_relative() ? base_dir / p : p;
  };
  int line_no = 0;
  for (auto raw : detail::lines(text)) {
    ++line_no;
    auto line = raw.substr(0, raw.find('#'));
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto val = detail::trim(line.substr(eq + 1));

    if (key == "shell") {
      if (val == "starlink") c.shell = ShellConfig::starlink_shell1();
      else if (val == "kuiper") c.shell = ShellConfig::kuiper();
      else if (val == "custom") c.shell.name = "custom";
      else throw Error(ErrorCode::InvalidConfig, "shell is starlink, kuiper or custom");
    } else if (key == "shell.planes") c.shell.planes = parse_small_int(val, key);
    else if (key == "shell.sats_per_plane") c.shell.sats_per_plane = parse_small_int(val, key);
    else if (key == "shell.inclination_deg") c.shell.inclination_deg = detail::parse_double(val, key);
    else if (key == "shell.altitude_km") c.shell.altitude_km = detail::parse_double(val, key);
    else if (key == "shell.phase_offset") c.shell.phase_offset = detail::parse_double(val, key);
    else if (key == "shell.epoch_s") c.shell.epoch_s = detail::parse_double(val, key);
    else if (key == "shell.earth_rotation") c.shell.earth_rotation = parse_bool(val, key);
    else if (key == "min_elevation_deg") c.topology.min_elevation_deg = detail::parse_double(val, key);
    else if (key == "keep_seam") c.topology.keep_seam = parse_bool(val, key);
    else if (key == "ground") ground_path = resolve(val);
    else if (key == "pairs") pairs_path = resolve(val);
    else if (key == "risk") {
      c.risk = (val == "egypt" || val == "north_korea") ? RiskArea::preset(val) : RiskArea::load(resolve(val));
    } else if (key == "theta") c.planning.theta = parse_small_int(val, key);
    else if (key == "sigma") c.planning.sigma = parse_small_int(val, key);
    else if (key == "rel_tol") c.planning.rel_tol = detail::parse_double(val, key);
    else if (key == "slots") c.slots = parse_slot_range(val);
    else if (key == "slot_length_s") c.slot_length_s = detail::parse_double(val, key);
    else if (key == "probe_period_s") c.probe_period_s = detail::parse_double(val, key);
    else if (key == "hop_processing_ms") c.timing.hop_processing_s = detail::parse_double(val, key) * 1e-3;
    else if (key == "alpha_ms") {
      c.alpha_s = detail::parse_double(val, key) * 1e-3;
      alpha_set = true;
    } else if (key == "jitter") c.timing.jitter = parse_jitter(val);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::parse_int(val, key));
    else if (key == "freshness_s") c.freshness_s = detail::parse_double(val, key);
    else if (key == "payload_bytes") c.payload_bytes = static_cast<std::size_t>(detail::parse_int(val, key));
    else if (key == "master_key") c.master_key = from_hex(val);
    else if (key == "attack") c.attacks.push_back(parse_attack(val));
    else if (key == "baseline") c.baseline = parse_bool(val, key);
    else if (key == "alibi_f") c.alibi_f = detail::parse_double(val, key);
    else throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
  }
  if (!alpha_set) c.alpha_s = c.timing.hop_processing_s;
  if (!ground_path) throw Error(ErrorCode::InvalidConfig, "config needs a ground file");
  if (!pairs_path) throw Error(ErrorCode::InvalidConfig, "config needs a pairs file");
  c.ground = load_ground_csv(*ground_path);
  c.pairs = load_pairs_csv(*pairs_path);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  return parse_config(detail::read_file(path), path.parent_path());
}

}  // namespace leoveri
