#include <doctest.h>

#include <cstdlib>

#include "leoveri/error.hpp"
#include "leoveri/riskmap.hpp"
#include "oracles.hpp"

using namespace leoveri;

namespace {

int torus_hops(SatCoord a, SatCoord b, GridShape g) {
  const int dp = std::abs(a.p - b.p), dn = std::abs(a.n - b.n);
  return std::min(dp, g.planes - dp) + std::min(dn, g.per_plane - dn);
}

RiskSet ne_risk(std::vector<SatCoord> cells) {
  RiskSet rs;
  std::sort(cells.begin(), cells.end());
  rs.ne = std::move(cells);
  return rs;
}

}  // namespace

TEST_CASE("polygon containment agrees with the winding oracle") {
  const auto egypt = RiskArea::egypt();
  CHECK(egypt.contains({26.8, 30.8}));
  CHECK(egypt.contains({30.04, 31.24}));
  CHECK_FALSE(egypt.contains({24.7, 46.7}));   // Riyadh
  CHECK_FALSE(egypt.contains({-26.8, -149.2}));  // antipode of the interior point
  const auto nk = RiskArea::north_korea();
  CHECK(nk.contains({39.03, 125.75}));
  CHECK_FALSE(nk.contains({37.56, 126.97}));  // Seoul

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(15, 45), lon(15, 45);
  for (int i = 0; i < 5000; ++i) {
    const LatLon q{lat(rng), lon(rng)};
    CHECK(egypt.contains(q) == oracle::winding_contains(egypt.polygon(), q));
  }
}

TEST_CASE("polygon parsing") {
  const auto a = RiskArea::parse("# c\nbox\n0,0\n0,10\n10,10\n10,0\n");
  CHECK(a.name() == "box");
  CHECK(a.polygon().size() == 4);
  CHECK(a.contains({5, 5}));
  CHECK_THROWS_AS(RiskArea::parse("box\n0,0\n1,1\n"), Error);
  CHECK_THROWS_AS(RiskArea::parse("box\n0,0\n1\n2,2\n"), Error);
  CHECK_THROWS_AS(RiskArea::preset("atlantis"), Error);
}

TEST_CASE("risk set on Starlink over Egypt matches brute-force containment") {
  const auto states = Shell(ShellConfig::starlink_shell1()).propagate(0.0);
  const auto egypt = RiskArea::egypt();
  const auto rs = risk_satellites(states, egypt, 0.0);
  std::size_t expected = 0;
  for (const auto& s : states) {
    const bool in = oracle::winding_contains(egypt.polygon(), s.subpoint);
    expected += in;
    CHECK(rs.contains(s.coord) == in);
    if (in) CHECK(std::binary_search(rs.of(s.direction).begin(), rs.of(s.direction).end(), s.coord));
  }
  CHECK(rs.size() == expected);
}

TEST_CASE("area no subpoint reaches is empty") {
  const auto states = Shell(ShellConfig::starlink_shell1()).propagate(0.0);
  const RiskArea polar("polar", {{80, 0}, {80, 120}, {80, -120}});
  CHECK(risk_satellites(states, polar, 0.0).empty());
}

TEST_CASE("single satellite over the centroid") {
  std::vector<SatState> states(3);
  states[0].coord = {0, 0};
  states[0].subpoint = {-40, 100};
  states[1].coord = {4, 2};
  states[1].subpoint = {26.5, 30.0};
  states[1].direction = Direction::SEBound;
  states[2].coord = {5, 5};
  states[2].subpoint = {60, -80};
  const auto rs = risk_satellites(states, RiskArea::egypt(), 0.0);
  CHECK(rs.size() == 1);
  CHECK(rs.se == std::vector<SatCoord>{{4, 2}});
}

TEST_CASE("minimal cover") {
  CHECK(minimal_cover({3}, 10) == IndexInterval{3, 1, 10});
  CHECK(minimal_cover({0, 9}, 10) == IndexInterval{9, 2, 10});
  CHECK(minimal_cover({2, 4, 5}, 10) == IndexInterval{2, 4, 10});
  CHECK(minimal_cover({0, 5}, 10) == IndexInterval{0, 6, 10});
  const IndexInterval iv{9, 3, 10};
  CHECK(iv.last() == 1);
  CHECK(iv.contains(0));
  CHECK(iv.interior(0));
  CHECK_FALSE(iv.interior(9));
  CHECK_FALSE(iv.contains(2));
}

TEST_CASE("single risk satellite, theta 1") {
  const GridShape grid{72, 22};
  const auto nlrp = compute_nlrp(grid, ne_risk({{10, 10}}), 1);
  REQUIRE(nlrp.ne.has_value());
  CHECK_FALSE(nlrp.se.has_value());
  CHECK(nlrp.ne->p_l() == 9);
  CHECK(nlrp.ne->p_r() == 11);
  CHECK(nlrp.ne->n_b() == 9);
  CHECK(nlrp.ne->n_u() == 11);
  // Every cell within theta hops of the risk lies in the frame; the interior
  // is exactly the risk cell.
  for (int p = 0; p < 72; ++p)
    for (int n = 0; n < 22; ++n) {
      const SatCoord c{p, n};
      if (torus_hops(c, {10, 10}, grid) <= 1) CHECK(nlrp.ne->contains(c));
      CHECK(nlrp.ne->interior(c) == (c == SatCoord{10, 10}));
    }
}

TEST_CASE("theta 0 collapses the frame onto the satellite") {
  const auto nlrp = compute_nlrp(GridShape{72, 22}, ne_risk({{10, 10}}), 0);
  CHECK(nlrp.ne->p_l() == 10);
  CHECK(nlrp.ne->p_r() == 10);
  CHECK(nlrp.ne->n_b() == 10);
  CHECK(nlrp.ne->n_u() == 10);
}

TEST_CASE("frames wrap across index zero") {
  const auto nlrp = compute_nlrp(GridShape{72, 22}, ne_risk({{0, 21}, {71, 0}}), 2);
  CHECK(nlrp.ne->p_l() == 69);
  CHECK(nlrp.ne->p_r() == 2);
  CHECK(nlrp.ne->n_b() == 19);
  CHECK(nlrp.ne->n_u() == 2);
}

TEST_CASE("risk spanning every plane") {
  std::vector<SatCoord> cells;
  for (int p = 0; p < 72; ++p) cells.push_back({p, 3});
  try {
    compute_nlrp(GridShape{72, 22}, ne_risk(cells), 1);
    FAIL("expected RiskTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RiskTooLarge);
  }
  CHECK_THROWS_AS(compute_nlrp(GridShape{72, 22}, ne_risk({{1, 1}}), -1), Error);
}

TEST_CASE("directions get separate frames") {
  RiskSet rs = ne_risk({{5, 5}});
  rs.se = {{40, 15}};
  const auto nlrp = compute_nlrp(GridShape{72, 22}, rs, 1);
  REQUIRE(nlrp.se.has_value());
  CHECK(nlrp.frames().size() == 2);
  CHECK(nlrp.interior({40, 15}));
  CHECK_FALSE(nlrp.interior({5, 15}));
  CHECK(rs.nodes(GridShape{72, 22}) == std::vector<NodeId>{5 * 22 + 5, 40 * 22 + 15});
}
