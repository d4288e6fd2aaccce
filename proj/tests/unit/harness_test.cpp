#include <doctest.h>

#include <random>
#include <sstream>

#include "leoveri/baseline.hpp"
#include "leoveri/config.hpp"
#include "leoveri/error.hpp"
#include "leoveri/harness.hpp"
#include "leoveri/reports.hpp"

using namespace leoveri;

namespace {

const std::string kData = LEOVERI_DATA_DIR;

ScenarioConfig short_egypt(long last_slot) {
  auto cfg = load_config(kData + "/scenarios/egypt.cfg");
  cfg.slots = {0, last_slot};
  return cfg;
}

std::string metrics_text(const MetricsReport& r) {
  std::ostringstream o;
  write_metrics_csv(o, r);
  write_plans_csv(o, r.plans);
  o << summary_json(r, 2);
  return o.str();
}

}  // namespace

TEST_CASE("header field lengths") {
  const int ns[] = {10, 20, 30};
  const std::size_t icing[] = {433, 853, 1273}, opt[] = {212, 372, 532}, epic[] = {74, 124, 174};
  for (int i = 0; i < 3; ++i) {
    CHECK(field_length(Scheme::Icing, ns[i], 2) == icing[i]);
    CHECK(field_length(Scheme::Opt, ns[i], 2) == opt[i]);
    CHECK(field_length(Scheme::Epic, ns[i], 2) == epic[i]);
  }
  CHECK(field_length(Scheme::Leoveri, 30, 0) == 16);
  CHECK(field_length(Scheme::Leoveri, 10, 1) == 32);
  CHECK(field_length(Scheme::Leoveri, 20, 2) == 48);
}

TEST_CASE("goodput improvement over ICING at 30 hops") {
  const double ours = goodput_ratio(Scheme::Leoveri, 30, 1024, 2);
  const double icing = goodput_ratio(Scheme::Icing, 30, 1024, 2);
  CHECK(ours == doctest::Approx(1024.0 / 1112.0));
  CHECK(icing == doctest::Approx(1024.0 / 2337.0));
  CHECK((ours / icing - 1.0) * 100.0 == doctest::Approx(110.15).epsilon(0.0002 / 1.1015));
  CHECK(std::string(to_string(Scheme::Epic)) == "EPIC");
}

TEST_CASE("delay inflation") {
  CHECK(delay_inflation(0.025, 0.025) == 0.0);
  CHECK(delay_inflation(0.028, 0.025) == doctest::Approx(12.0));
}

TEST_CASE("relay adoption ratio") {
  std::vector<int> h(1000, 0);
  std::fill(h.begin(), h.begin() + 600, 1);
  CHECK(rar(h, 1) == doctest::Approx(0.6));
  CHECK(rar(std::vector<int>(50, 0), 0) == 1.0);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> k(-1, 2);
  std::vector<int> random(777);
  for (auto& v : random) v = k(rng);
  double sum = 0;
  for (int s = -1; s <= 2; ++s) sum += rar(random, s);
  CHECK(sum == doctest::Approx(1.0));
  CHECK(rar({}, 1) == 0.0);
}

TEST_CASE("variation counts") {
  const GridShape grid{72, 22};
  auto sample = [&](long slot, std::vector<SatCoord> cells) {
    RiskSample s;
    s.slot = slot;
    s.risk.ne = cells;
    s.nlrp = compute_nlrp(grid, s.risk, 1);
    return s;
  };
  std::vector<RiskSample> constant;
  for (long t = 0; t < 10; ++t) constant.push_back(sample(t, {{5, 5}, {7, 7}}));
  auto w = variation_counts(constant, 1000);
  REQUIRE(w.size() == 1);
  CHECK(w[0].rs_changes == 0);
  CHECK(w[0].nlrp_changes == 0);

  // (6,6) joins inside the hull: the set changes, the frame does not.
  std::vector<RiskSample> inner{sample(0, {{5, 5}, {7, 7}}), sample(1, {{5, 5}, {6, 6}, {7, 7}})};
  w = variation_counts(inner, 1000);
  CHECK(w[0].rs_changes == 1);
  CHECK(w[0].nlrp_changes == 0);

  std::vector<RiskSample> windows;
  for (long t = 0; t < 25; ++t) windows.push_back(sample(t, {{5, static_cast<int>(t % 3)}}));
  w = variation_counts(windows, 10);
  CHECK(w.size() == 3);
  CHECK(w[0].first_slot == 0);
  CHECK(w[2].last_slot == 24);
}

TEST_CASE("config parsing") {
  const auto cfg = load_config(kData + "/scenarios/egypt.cfg");
  CHECK(cfg.shell.planes == 72);
  CHECK(cfg.planning.theta == 1);
  CHECK(cfg.slots.count() == 600);
  CHECK(cfg.timing.hop_processing_s == doctest::Approx(1e-4));
  CHECK(cfg.alpha_s == doctest::Approx(1e-4));
  CHECK(cfg.attacks.size() == 4);
  CHECK(cfg.attacks[3].kind == AttackKind::Replay);
  CHECK(cfg.attacks[3].replay_delay_slots == 5);
  CHECK(cfg.pairs.size() >= 10);

  const auto base = kData + "/scenarios";
  CHECK_THROWS_AS(parse_config("shell = starlink\nbogus = 1\n", base), Error);
  CHECK_THROWS_AS(parse_config("shell = starlink\n", base), Error);
  CHECK_THROWS_AS(parse_config("no equals sign\n", base), Error);
  CHECK_THROWS_AS(parse_config("ground = ../ground/ground.csv\npairs = ../ground/pairs_egypt.csv\nsigma = 3\n", base),
                  Error);

  const auto custom = parse_config(
      "shell = custom\nshell.planes = 6\nshell.sats_per_plane = 6\nshell.inclination_deg = 60\n"
      "shell.altitude_km = 800\nground = ../ground/ground.csv\npairs = ../ground/pairs_egypt.csv\n"
      "master_key = 00ff\nalpha_ms = 0.5\n",
      base);
  CHECK(custom.shell.size() == 36);
  CHECK(custom.master_key == Bytes{0x00, 0xff});
  CHECK(custom.alpha_s == doctest::Approx(5e-4));
}

TEST_CASE("attack, jitter and slot syntax") {
  const auto a = parse_attack("relay_skip target=0 first=2 last=9 period=3 detour=false");
  CHECK(a.kind == AttackKind::RelaySkip);
  CHECK(a.target == 0);
  CHECK(a.first_slot == 2);
  CHECK(a.last_slot == 9);
  CHECK(a.period == 3);
  CHECK_FALSE(a.detour);
  CHECK_THROWS_AS(parse_attack("hijack period=0"), Error);
  CHECK_THROWS_AS(parse_attack("hijack speed=3"), Error);

  const auto j = parse_jitter("uniform:0:0.05");
  CHECK(j.kind == JitterModel::Kind::Uniform);
  CHECK(j.b == doctest::Approx(5e-5));
  CHECK(parse_jitter("none").kind == JitterModel::Kind::None);
  CHECK_THROWS_AS(parse_jitter("uniform:2:1"), Error);
  CHECK_THROWS_AS(parse_jitter("gauss:1:1"), Error);

  const auto r = parse_slot_range("10..20");
  CHECK(r.count() == 11);
  CHECK_THROWS_AS(parse_slot_range("20..10"), Error);
  CHECK_THROWS_AS(parse_slot_range("5"), Error);
}

TEST_CASE("honest short run has no false verdicts") {
  auto cfg = short_egypt(9);
  cfg.attacks.clear();
  cfg.timing.jitter = {};
  const auto r = run(cfg);
  CHECK(r.slots == 10);
  long evaluated = 0;
  for (const auto& pm : r.pairs) {
    CHECK(pm.fp_slots == 0);
    CHECK(pm.fn_slots == 0);
    CHECK(pm.rejected == 0);
    evaluated += pm.evaluated_slots;
  }
  CHECK(evaluated > 0);
  CHECK(r.mean_fp() == 0.0);
  CHECK(r.mean_fn() == 0.0);
}

TEST_CASE("hijack-only run misses nothing") {
  auto cfg = short_egypt(29);
  cfg.attacks = {parse_attack("hijack")};
  const auto r = run(cfg);
  long applied = 0;
  for (const auto& pm : r.pairs) {
    CHECK(pm.fn_slots == 0);
    CHECK(pm.fp_slots == 0);
    applied += pm.attacks_applied;
  }
  CHECK(applied > 0);
}

TEST_CASE("runs are reproducible") {
  const auto cfg = short_egypt(12);
  CHECK(metrics_text(run(cfg)) == metrics_text(run(cfg)));
}

TEST_CASE("plan-only runs send nothing") {
  auto cfg = short_egypt(4);
  RunOptions opt;
  opt.verify = false;
  const auto r = run(cfg, opt);
  CHECK_FALSE(r.plans.empty());
  for (const auto& pm : r.pairs) CHECK(pm.sent == 0);
}

TEST_CASE("report formatting") {
  CHECK(format_relays({{1, 2}, {30, 4}}) == "1:2;30:4");
  CHECK(format_relays({}).empty());
  CHECK(format_thresholds_ms({0.0131, kInfinity}) == "13.100000;inf");
  std::ostringstream o;
  write_goodput_csv(o, {10}, {1024}, 2);
  CHECK(o.str().rfind("scheme,n_hops,field_bytes,payload_bytes,goodput\n", 0) == 0);
  CHECK(o.str().find("ICING,10,433,1024,") != std::string::npos);
}

TEST_CASE("risk history and theta sweep smoke") {
  const auto hist = risk_history(ShellConfig::starlink_shell1(), RiskArea::egypt(), 1, {0, 99});
  CHECK(hist.size() == 100);
  CHECK(std::any_of(hist.begin(), hist.end(), [](const RiskSample& s) { return !s.risk.empty(); }));

  auto cfg = short_egypt(40);
  const auto sweep = theta_sweep(cfg, {1, 2}, 20);
  CHECK(sweep.points.size() == 2);
  CHECK(sweep.common_samples <= sweep.total_samples);
  CHECK_THROWS_AS(theta_sweep(cfg, {}, 1), Error);
}

TEST_CASE("boundary bound and alibi relay") {
  LinearDelayModel m;
  m.a = 0.0;
  m.b = 1.0 / 200000.0;
  const auto egypt = RiskArea::egypt();
  const LatLon s{24.7, 46.7}, d{32.9, 13.2};  // Riyadh, Tripoli
  const double coarse = boundary_bound(m, egypt, s, d, 0);
  const double fine = boundary_bound(m, egypt, s, d, 10);
  CHECK(fine <= coarse);
  // A detour through the area costs at least the direct estimate.
  CHECK(fine >= m.estimate(s, d));

  const std::vector<GroundEntity> ground{{"s", {50.0, 0.0}, GroundRole::Terminal},
                                         {"d", {50.0, 20.0}, GroundRole::Terminal},
                                         {"r", {50.5, 10.0}, GroundRole::Station},
                                         {"far", {-30.0, 10.0}, GroundRole::Station},
                                         {"t", {50.2, 10.0}, GroundRole::Terminal}};
  const auto pick = choose_alibi_relay(m, egypt, ground, 0, 1, 0.0);
  REQUIRE(pick.relay.has_value());
  CHECK(*pick.relay == 2);
  CHECK(pick.relay_estimate_s < pick.bound_s);
  CHECK_FALSE(choose_alibi_relay(m, egypt, ground, 0, 1, 10.0).relay.has_value());
}
