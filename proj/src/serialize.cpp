#include "fairsim/serialize.hpp"

#include <istream>
#include <ostream>

namespace fairsim {

namespace {

nlohmann::json metric_json(const Metric& m) { return m ? nlohmann::json(*m) : nlohmann::json(nullptr); }

int parse_int(const std::string& s, const char* column) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("events csv: bad integer in column ") + column + ": '" + s + "'");
    }
}

bool parse_bit(const std::string& s, const char* column) {
    if (s == "0") return false;
    if (s == "1") return true;
    throw std::runtime_error(std::string("events csv: expected 0/1 in column ") + column + ": '" + s + "'");
}

}  // namespace

void write_events_csv(std::span<const ArrestEvent> events, std::ostream& out) {
    CsvWriter csv(out);
    csv.row({"tick", "agent_id", "group", "cell_x", "cell_y", "J", "R"});
    for (const ArrestEvent& e : events) {
        csv.field(e.tick).field(e.agent_id).field(to_string(e.group)).field(e.cell.x).field(e.cell.y);
        csv.field(e.judged_positive ? 1 : 0).field(e.recidivated ? 1 : 0);
        csv.end_row();
    }
}

void write_events_jsonl(std::span<const ArrestEvent> events, std::ostream& out) {
    for (const ArrestEvent& e : events) {
        nlohmann::ordered_json j;
        j["tick"] = e.tick;
        j["agent_id"] = e.agent_id;
        j["group"] = std::string(to_string(e.group));
        j["cell_x"] = e.cell.x;
        j["cell_y"] = e.cell.y;
        j["J"] = e.judged_positive ? 1 : 0;
        j["R"] = e.recidivated ? 1 : 0;
        out << j.dump() << '\n';
    }
}

EventLog read_events_csv(std::istream& in) {
    const auto rows = parse_csv(in);
    const std::vector<std::string> header{"tick", "agent_id", "group", "cell_x", "cell_y", "J", "R"};
    if (rows.empty() || rows.front() != header) throw std::runtime_error("events csv: unexpected header");
    EventLog log;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != header.size()) throw std::runtime_error("events csv: wrong field count on line " + std::to_string(i + 1));
        ArrestEvent e;
        e.tick = parse_int(r[0], "tick");
        e.agent_id = parse_int(r[1], "agent_id");
        if (r[2] == "G1") {
            e.group = Group::g1;
        } else if (r[2] == "G2") {
            e.group = Group::g2;
        } else {
            throw std::runtime_error("events csv: bad group '" + r[2] + "'");
        }
        e.cell = {parse_int(r[3], "cell_x"), parse_int(r[4], "cell_y")};
        e.judged_positive = parse_bit(r[5], "J");
        e.recidivated = parse_bit(r[6], "R");
        log.push_back(e);
    }
    return log;
}

std::vector<std::string> metrics_columns() {
    std::vector<std::string> cols;
    for (const char* g : {"g1", "g2"}) {
        for (const char* name : {"events", "never_arrested", "ppv_a", "fpr_a", "fnr_a", "prevalence_a", "ppv_p",
                                 "fpr_p", "fnr_p", "prevalence_p", "arrest_prob"}) {
            cols.push_back(std::string(g) + "_" + name);
        }
    }
    for (const char* name : {"tau_a", "tau_p", "tau1_a", "tau1_p", "arrest_ratio"}) cols.emplace_back(name);
    return cols;
}

void write_metrics_fields(CsvWriter& csv, const MetricsReport& r) {
    for (const GroupReport* g : {&r.g1, &r.g2}) {
        csv.field(g->table.events()).field(g->table.never_arrested);
        csv.field(g->arrested.ppv).field(g->arrested.fpr).field(g->arrested.fnr).field(g->arrested.prevalence);
        csv.field(g->population.ppv).field(g->population.fpr).field(g->population.fnr);
        csv.field(g->population.prevalence).field(g->population.arrest_prob);
    }
    csv.field(r.tau_a).field(r.tau_p).field(r.tau1_a).field(r.tau1_p).field(r.arrest_ratio);
}

nlohmann::json to_json(const GroupTable& t) {
    return {{"group", std::string(to_string(t.group))}, {"tp", t.tp}, {"fp", t.fp}, {"fn", t.fn},
            {"tn", t.tn}, {"never_arrested", t.never_arrested}};
}

nlohmann::json to_json(const MetricsReport& r) {
    auto group = [](const GroupReport& g) {
        return nlohmann::json{
            {"table", to_json(g.table)},
            {"ppv_a", metric_json(g.arrested.ppv)},
            {"fpr_a", metric_json(g.arrested.fpr)},
            {"fnr_a", metric_json(g.arrested.fnr)},
            {"prevalence_a", metric_json(g.arrested.prevalence)},
            {"ppv_p", metric_json(g.population.ppv)},
            {"fpr_p", metric_json(g.population.fpr)},
            {"fnr_p", metric_json(g.population.fnr)},
            {"prevalence_p", metric_json(g.population.prevalence)},
            {"arrest_prob", metric_json(g.population.arrest_prob)},
        };
    };
    return {
        {"g1", group(r.g1)},
        {"g2", group(r.g2)},
        {"tau_a", metric_json(r.tau_a)},
        {"tau_p", metric_json(r.tau_p)},
        {"tau1_a", metric_json(r.tau1_a)},
        {"tau1_p", metric_json(r.tau1_p)},
        {"arrest_ratio", metric_json(r.arrest_ratio)},
    };
}

}  // namespace fairsim
