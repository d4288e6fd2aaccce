#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "leoveri/config.hpp"
#include "leoveri/harness.hpp"

namespace leoveri {

// Terrestrial delay estimate, est = a + b * great-circle km (seconds).
struct LinearDelayModel {
  double a = 0.0;
  double b = 1.0 / 200000.0;

  double estimate(LatLon x, LatLon y) const { return a + b * great_circle_km(x, y); }
};

// Least-squares fit over ground-to-ground delays between every pair of stations
// reachable in `snapshot`. Falls back to the default slope when fewer than two
// distinct distances are observed.
LinearDelayModel fit_delay_model(const Snapshot& snapshot);

// Smallest estimated s -> x -> d delay over points x on the area boundary
// (vertices plus `per_edge` interior samples per edge).
double boundary_bound(const LinearDelayModel& model, const RiskArea& area, LatLon s, LatLon d, int per_edge = 10);

struct AlibiChoice {
  std::optional<std::size_t> relay;  // index into the ground list
  double bound_s = 0.0;
  double relay_estimate_s = 0.0;
};

// Static station relay r != s, d with (1 + f) * (est(s,r) + est(r,d)) < bound,
// minimizing the estimated sum. `relay` is empty when no station qualifies.
AlibiChoice choose_alibi_relay(const LinearDelayModel& model, const RiskArea& area,
                               std::span<const GroundEntity> ground, std::size_t s, std::size_t d, double f);

// Delay-based verification through the chosen relay over every slot. Accepts
// when (1 + f) * measured < bound; ground truth is whether the traversed
// satellites intersect the risk set. A hijack through the nearest risk
// satellite is attempted on odd slots. Pairs without a relay count every slot
// as no_relay.
MetricsReport alibi_baseline(const ScenarioConfig& config);

}  // namespace leoveri
