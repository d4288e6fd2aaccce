#include "leoveri/reports.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "leoveri/error.hpp"

namespace leoveri {

namespace {

std::string ms(double s) {
  if (!std::isfinite(s)) return "inf";
  std::ostringstream o;
  o << std::fixed << std::setprecision(6) << s * 1e3;
  return o.str();
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

}  // namespace

std::string format_relays(const std::vector<SatCoord>& relays) {
  std::string out;
  for (std::size_t i = 0; i < relays.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(relays[i].p) + ':' + std::to_string(relays[i].n);
  }
  return out;
}

std::string format_thresholds_ms(const std::vector<double>& thresholds_s) {
  std::string out;
  for (std::size_t i = 0; i < thresholds_s.size(); ++i) {
    if (i) out += ';';
    out += ms(thresholds_s[i]);
  }
  return out;
}

void write_plans_csv(std::ostream& out, const std::vector<PlanRecord>& plans) {
  out << "t,src,dst,relays,thresholds_ms,path_len,delay_ms\n";
  for (const auto& p : plans) {
    out << fixed(p.t, 3) << ',' << p.src << ',' << p.dst << ',' << format_relays(p.relays) << ','
        << format_thresholds_ms(p.thresholds_s) << ',' << p.path_len << ',' << ms(p.delay_s) << '\n';
  }
}

void write_thresholds_csv(std::ostream& out, const std::vector<PlanRecord>& plans) {
  out << "t,src,dst,segment,delta_ms\n";
  for (const auto& p : plans)
    for (std::size_t i = 0; i < p.thresholds_s.size(); ++i)
      out << fixed(p.t, 3) << ',' << p.src << ',' << p.dst << ',' << i << ',' << ms(p.thresholds_s[i]) << '\n';
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  out << "scheme,src,dst,slots,coverage_gap_slots,infeasible_slots,no_relay_slots,evaluated_slots,fp_slots,fn_slots,"
         "fp_ratio,fn_ratio,sent,accepted,rejected,lost,clean_packets,risky_packets,attacks_applied,"
         "attacks_infeasible,mean_inflation_pct\n";
  for (const auto& p : report.pairs) {
    out << report.scheme << ',' << p.src << ',' << p.dst << ',' << p.slots << ',' << p.coverage_gap_slots << ','
        << p.infeasible_slots << ',' << p.no_relay_slots << ',' << p.evaluated_slots << ',' << p.fp_slots << ','
        << p.fn_slots << ',' << fixed(p.fp_ratio()) << ',' << fixed(p.fn_ratio()) << ',' << p.sent << ','
        << p.accepted << ',' << p.rejected << ',' << p.lost << ',' << p.clean_packets << ',' << p.risky_packets
        << ',' << p.attacks_applied << ',' << p.attacks_infeasible << ',' << fixed(p.mean_inflation(), 4) << '\n';
  }
}

void write_variation_csv(std::ostream& out, const std::vector<VariationWindow>& windows) {
  out << "window_first,window_last,rs_changes,nlrp_changes\n";
  for (const auto& w : windows)
    out << w.first_slot << ',' << w.last_slot << ',' << w.rs_changes << ',' << w.nlrp_changes << '\n';
}

void write_goodput_csv(std::ostream& out, const std::vector<int>& n_hops, const std::vector<std::size_t>& payloads,
                       int sigma) {
  out << "scheme,n_hops,field_bytes,payload_bytes,goodput\n";
  for (auto scheme : {Scheme::Icing, Scheme::Opt, Scheme::Epic, Scheme::Leoveri})
    for (int n : n_hops)
      for (auto payload : payloads)
        out << to_string(scheme) << ',' << n << ',' << field_length(scheme, n, sigma) << ',' << payload << ','
            << fixed(goodput_ratio(scheme, n, payload, sigma)) << '\n';
}

void write_comparison_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
  out << "scheme,mean_fp,mean_fn,no_relay_rate,mean_inflation_pct\n";
  for (const auto& r : reports)
    out << r.scheme << ',' << fixed(r.mean_fp()) << ',' << fixed(r.mean_fn()) << ',' << fixed(r.no_relay_rate())
        << ',' << fixed(r.mean_inflation(), 4) << '\n';
}

void write_satellites_csv(std::ostream& out, const Snapshot& snapshot, bool header) {
  if (header) out << "t,p,n,lat,lon,direction\n";
  for (const auto& s : snapshot.satellites())
    out << fixed(snapshot.time(), 3) << ',' << s.coord.p << ',' << s.coord.n << ',' << fixed(s.subpoint.lat_deg, 4)
        << ',' << fixed(s.subpoint.lon_deg, 4) << ',' << (s.direction == Direction::NEBound ? "ne" : "se") << '\n';
}

void write_links_csv(std::ostream& out, const Snapshot& snapshot, bool header) {
  if (header) out << "t,a,b,delay_ms\n";
  auto name = [&](NodeId v) {
    if (snapshot.is_satellite(v)) {
      const auto c = snapshot.coord_of(v);
      return std::to_string(c.p) + ':' + std::to_string(c.n);
    }
    return snapshot.ground()[static_cast<std::size_t>(v - snapshot.grid().size())].id;
  };
  const auto& g = snapshot.graph();
  for (NodeId a = 0; a < g.node_count(); ++a)
    for (const auto& e : g.neighbors(a))
      if (a < e.to) out << fixed(snapshot.time(), 3) << ',' << name(a) << ',' << name(e.to) << ',' << ms(e.delay_s) << '\n';
}

std::string summary_json(const MetricsReport& report, int sigma) {
  nlohmann::json j;
  j["scheme"] = report.scheme;
  j["slots"] = report.slots;
  j["risk_too_large_slots"] = report.risk_too_large_slots;
  j["mean_fp"] = report.mean_fp();
  j["mean_fn"] = report.mean_fn();
  j["mean_inflation_pct"] = report.mean_inflation();
  j["no_relay_rate"] = report.no_relay_rate();
  j["ops"] = {{"hash", report.ops.hash}, {"mac_generate", report.ops.mac_generate}, {"mac_verify", report.ops.mac_verify}};

  std::vector<int> all;
  std::map<std::string, long> reasons;
  for (const auto& p : report.pairs) {
    all.insert(all.end(), p.relay_history.begin(), p.relay_history.end());
    for (const auto& [k, v] : p.reject_reasons) reasons[k] += v;
  }
  nlohmann::json rar_json;
  for (int k = -1; k <= sigma; ++k) rar_json[k < 0 ? "infeasible" : std::to_string(k)] = rar(all, k);
  j["rar"] = rar_json;
  j["reject_reasons"] = reasons;

  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"src", p.src},
                     {"dst", p.dst},
                     {"evaluated_slots", p.evaluated_slots},
                     {"fp", p.fp_ratio()},
                     {"fn", p.fn_ratio()},
                     {"mean_inflation_pct", p.mean_inflation()}});
  }
  j["pairs"] = pairs;
  nlohmann::json var = nlohmann::json::array();
  for (const auto& w : report.variation)
    var.push_back({{"first", w.first_slot}, {"last", w.last_slot}, {"rs", w.rs_changes}, {"nlrp", w.nlrp_changes}});
  j["variation"] = var;
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  f << content;
  if (!f) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace leoveri
