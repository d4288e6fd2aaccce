#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "leoveri/drsa.hpp"
#include "oracles.hpp"

// Torus with uniform link delay and a north-bound risk block, plus the
// planning context over it.
struct Toy {
  leoveri::GridShape grid;
  oracle::IntGraph ig;
  double unit = 1.0;
  leoveri::Snapshot snap;
  std::unique_ptr<leoveri::PlanningContext> ctx;

  Toy(int planes, int per_plane, std::vector<leoveri::SatCoord> risk_cells, int theta, int sigma = 2,
      double unit_s = 1.0)
      : grid{planes, per_plane},
        ig(oracle::torus(planes, per_plane, [](leoveri::SatCoord, leoveri::SatCoord) { return 1L; })),
        unit(unit_s),
        snap(oracle::toy_snapshot(ig, grid, unit_s)) {
    leoveri::RiskSet rs;
    std::sort(risk_cells.begin(), risk_cells.end());
    rs.ne = risk_cells;
    const auto nlrp = leoveri::compute_nlrp(grid, rs, theta);
    ctx = std::make_unique<leoveri::PlanningContext>(snap, rs, nlrp, leoveri::PlanningOptions{theta, sigma, 1e-9});
  }

  oracle::ToyScene scene() const {
    oracle::ToyScene sc;
    sc.g = &ig;
    sc.grid = grid;
    for (leoveri::NodeId v : ctx->risk_nodes()) sc.risk.push_back(v);
    sc.theta = ctx->options().theta;
    sc.sigma = ctx->options().sigma;
    return sc;
  }

  // Exhaustive corner-plan minimum in hops.
  long oracle_best(leoveri::SatCoord s, leoveri::SatCoord d) const {
    const auto& fr = *ctx->nlrp().ne;
    return *oracle::best_corner_plan(scene(), s, d, {fr.p_l(), fr.p_r()}, {fr.n_b(), fr.n_u()});
  }
};
