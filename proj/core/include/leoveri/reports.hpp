#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "leoveri/harness.hpp"

namespace leoveri {

// Relays as "p:n;p:n", thresholds in ms as "a;b" ("inf" when unbounded).
std::string format_relays(const std::vector<SatCoord>& relays);
std::string format_thresholds_ms(const std::vector<double>& thresholds_s);

// t,src,dst,relays,thresholds_ms,path_len,delay_ms
void write_plans_csv(std::ostream& out, const std::vector<PlanRecord>& plans);
// t,src,dst,segment,delta_ms
void write_thresholds_csv(std::ostream& out, const std::vector<PlanRecord>& plans);
// One row per pair plus the counters and ratios behind the summary.
void write_metrics_csv(std::ostream& out, const MetricsReport& report);
// window_first,window_last,rs_changes,nlrp_changes
void write_variation_csv(std::ostream& out, const std::vector<VariationWindow>& windows);
// scheme,n_hops,field_bytes,payload_bytes,goodput
void write_goodput_csv(std::ostream& out, const std::vector<int>& n_hops, const std::vector<std::size_t>& payloads,
                       int sigma);
// scheme,mean_fp,mean_fn,no_relay_rate,mean_inflation_pct per report
void write_comparison_csv(std::ostream& out, const std::vector<MetricsReport>& reports);

// t,p,n,lat,lon,direction (no header when `header` is false)
void write_satellites_csv(std::ostream& out, const Snapshot& snapshot, bool header = true);
// t,a,b,delay_ms with a < b; ground nodes appear by id
void write_links_csv(std::ostream& out, const Snapshot& snapshot, bool header = true);

// Aggregates, RAR per relay count, reject reasons and operation counts.
std::string summary_json(const MetricsReport& report, int sigma);

// Opens `path` for writing, creating parent directories. Error(Io) on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace leoveri
