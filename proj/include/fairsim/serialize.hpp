#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairsim/csv.hpp"
#include "fairsim/justice.hpp"
#include "fairsim/metrics.hpp"

namespace fairsim {

// Event log: header `tick,agent_id,group,cell_x,cell_y,J,R`, group as G1/G2,
// J and R as 0/1.
void write_events_csv(std::span<const ArrestEvent> events, std::ostream& out);
// One JSON object per line with the same keys as the CSV header.
void write_events_jsonl(std::span<const ArrestEvent> events, std::ostream& out);
EventLog read_events_csv(std::istream& in);

// Flat MetricsReport row. Per group g in {g1, g2}:
//   g_events, g_never_arrested,
//   g_ppv_a, g_fpr_a, g_fnr_a, g_prevalence_a,
//   g_ppv_p, g_fpr_p, g_fnr_p, g_prevalence_p, g_arrest_prob
// then tau_a, tau_p, tau1_a, tau1_p, arrest_ratio. Nulls are empty fields.
std::vector<std::string> metrics_columns();
void write_metrics_fields(CsvWriter& csv, const MetricsReport& report);

nlohmann::json to_json(const GroupTable& table);
nlohmann::json to_json(const MetricsReport& report);

}  // namespace fairsim
