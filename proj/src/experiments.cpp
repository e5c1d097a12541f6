#include "fairsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>

#include "fairsim/csv.hpp"
#include "fairsim/parallel.hpp"
#include "fairsim/rng.hpp"
#include "fairsim/world.hpp"

namespace fairsim {

namespace {

std::vector<double> read_grid(const nlohmann::json& doc, const char* key, bool required,
                              std::vector<double> fallback) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        if (required) throw ConfigError(key, "required field is missing");
        return fallback;
    }
    if (!it->is_array()) throw ConfigError(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) throw ConfigError(key, "must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

void require_grid(const std::vector<double>& grid, const char* field, bool probability) {
    if (grid.empty()) throw ConfigError(field, "must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid[i];
        const bool ok = probability ? (v >= 0.0 && v <= 1.0) : (v > 0.0 && std::isfinite(v));
        if (!ok) {
            throw ConfigError(std::string(field) + "[" + std::to_string(i) + "]",
                              probability ? "must be in [0, 1]" : "must be a positive number");
        }
    }
}

}  // namespace

void SweepConfig::validate() const {
    require_grid(theta_grid, "theta_grid", true);
    require_grid(q0_grid, "q0_grid", true);
    require_grid(eps_tols, "eps_tols", false);
    if (replicates < 1) throw ConfigError("replicates", "must be at least 1");
    try {
        base.validate();
    } catch (const ConfigError& e) {
        throw ConfigError("base." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
}

SweepConfig sweep_config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "must be a JSON object");
    static const std::set<std::string> known = {"theta_grid", "q0_grid",  "replicates",
                                                "base",       "eps_tols", "master_seed"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) throw ConfigError(key, "unknown field");
    }
    SweepConfig c;
    c.theta_grid = read_grid(doc, "theta_grid", true, {});
    c.q0_grid = read_grid(doc, "q0_grid", true, {});
    c.eps_tols = read_grid(doc, "eps_tols", false, c.eps_tols);
    if (auto it = doc.find("replicates"); it != doc.end()) {
        if (!it->is_number_integer()) throw ConfigError("replicates", "must be an integer");
        c.replicates = it->get<int>();
    }
    if (auto it = doc.find("master_seed"); it != doc.end()) {
        if (!it->is_number_integer()) throw ConfigError("master_seed", "must be an integer");
        c.master_seed = it->get<std::uint64_t>();
    }
    if (auto it = doc.find("base"); it != doc.end()) c.base = sim_config_from_json(*it, "base.");
    c.validate();
    return c;
}

nlohmann::json to_json(const SweepConfig& c) {
    return {{"theta_grid", c.theta_grid}, {"q0_grid", c.q0_grid},   {"replicates", c.replicates},
            {"base", to_json(c.base)},     {"eps_tols", c.eps_tols}, {"master_seed", c.master_seed}};
}

std::uint64_t sweep_seed(std::uint64_t master_seed, std::size_t theta_index, std::size_t q0_index, int replicate) {
    return derive_seed(master_seed, {theta_index, q0_index, static_cast<std::uint64_t>(replicate)});
}

SimConfig sweep_cell_config(const SweepConfig& config, std::size_t theta_index, std::size_t q0_index, int replicate) {
    SimConfig c = config.base;
    c.stigma_follow = config.theta_grid.at(theta_index);
    c.cop_bias = config.q0_grid.at(q0_index);
    c.seed = sweep_seed(config.master_seed, theta_index, q0_index, replicate);
    return c;
}

MetricsReport final_report(const SimConfig& config) {
    const SimResult result = run_sim(config);
    const auto [g1, g2] = tabulate(result.events, result.final_state.civilians);
    return make_report(g1, g2);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config, const RunOptions& options) {
    config.validate();
    const std::size_t nq = config.q0_grid.size();
    const auto reps = static_cast<std::size_t>(config.replicates);
    const std::size_t total = config.theta_grid.size() * nq * reps;

    for (std::size_t ti = 0; ti < config.theta_grid.size(); ++ti) {
        for (std::size_t qi = 0; qi < nq; ++qi) {
            try {
                sweep_cell_config(config, ti, qi, 0).validate();
            } catch (const ConfigError& e) {
                throw ConfigError(e.field(), std::string(e.what()) + " (cell theta=" +
                                                 format_number(config.theta_grid[ti]) +
                                                 ", q0=" + format_number(config.q0_grid[qi]) + ")");
            }
        }
    }

    std::vector<SweepRecord> records(total);
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    parallel_for(total, options.workers, [&](std::size_t job) {
        const std::size_t ti = job / (nq * reps);
        const std::size_t qi = (job / reps) % nq;
        const int rep = static_cast<int>(job % reps);
        const SimConfig cell = sweep_cell_config(config, ti, qi, rep);

        SweepRecord& rec = records[job];
        rec.theta = cell.stigma_follow;
        rec.q0 = cell.cop_bias;
        rec.replicate = rep;
        rec.seed = cell.seed;
        rec.report = final_report(cell);
        for (double tol : config.eps_tols) {
            rec.y_a.push_back(fairness_indicator(rec.report.tau1_a, tol));
            rec.y_p.push_back(fairness_indicator(rec.report.tau1_p, tol));
        }
        const std::size_t finished = ++done;
        if (options.progress) {
            std::lock_guard lock(progress_mutex);
            options.progress(finished, total);
        }
    });
    return records;
}

std::optional<double> Stat::standard_error() const {
    if (!sd || count < 1) return std::nullopt;
    return *sd / std::sqrt(static_cast<double>(count));
}

Stat describe(std::span<const Metric> values) {
    Stat s;
    double sum = 0.0;
    for (const Metric& v : values) {
        if (v) {
            sum += *v;
            ++s.count;
        } else {
            ++s.nulls;
        }
    }
    if (s.count == 0) return s;
    const double mean = sum / s.count;
    s.mean = mean;
    if (s.count >= 2) {
        double ss = 0.0;
        for (const Metric& v : values) {
            if (v) ss += (*v - mean) * (*v - mean);
        }
        s.sd = std::sqrt(ss / (s.count - 1));
    }
    return s;
}

const CellSummary* SweepSummary::find(double theta, double q0) const {
    for (const CellSummary& c : cells) {
        if (c.theta == theta && c.q0 == q0) return &c;
    }
    return nullptr;
}

SweepSummary summarize(std::span<const SweepRecord> records, std::span<const double> eps_tols) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    SweepSummary summary;
    summary.eps_tols.assign(eps_tols.begin(), eps_tols.end());

    std::vector<std::pair<double, double>> keys;
    for (const SweepRecord& r : records) {
        const std::pair<double, double> key{r.theta, r.q0};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [theta, q0] : keys) {
        std::vector<Metric> t1a, t1p, ta, tp, ar;
        std::vector<int> fair_a(eps_tols.size(), 0), fair_p(eps_tols.size(), 0);
        for (const SweepRecord& r : records) {
            if (r.theta != theta || r.q0 != q0) continue;
            t1a.push_back(r.report.tau1_a);
            t1p.push_back(r.report.tau1_p);
            ta.push_back(r.report.tau_a);
            tp.push_back(r.report.tau_p);
            ar.push_back(r.report.arrest_ratio);
            for (std::size_t k = 0; k < eps_tols.size(); ++k) {
                fair_a[k] += fairness_indicator(r.report.tau1_a, eps_tols[k]);
                fair_p[k] += fairness_indicator(r.report.tau1_p, eps_tols[k]);
            }
        }
        CellSummary cell;
        cell.theta = theta;
        cell.q0 = q0;
        cell.replicates = static_cast<int>(t1a.size());
        cell.tau1_a = describe(t1a);
        cell.tau1_p = describe(t1p);
        cell.tau_a = describe(ta);
        cell.tau_p = describe(tp);
        cell.arrest_ratio = describe(ar);
        for (std::size_t k = 0; k < eps_tols.size(); ++k) {
            cell.fair_a.push_back(static_cast<double>(fair_a[k]) / cell.replicates);
            cell.fair_p.push_back(static_cast<double>(fair_p[k]) / cell.replicates);
        }
        summary.cells.push_back(std::move(cell));
    }
    return summary;
}

std::string tol_label(double eps_tol) { return format_number(eps_tol); }

void export_outcomes(std::span<const SweepRecord> records, std::span<const double> eps_tols,
                     const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    CsvWriter csv(out);
    for (const char* name : {"theta", "q0", "replicate", "seed", "tau1_a", "tau1_p", "tau_a", "tau_p", "arrest_ratio"}) {
        csv.field(std::string_view(name));
    }
    for (double tol : eps_tols) csv.field("Y_a_" + tol_label(tol));
    for (double tol : eps_tols) csv.field("Y_p_" + tol_label(tol));
    csv.end_row();

    for (const SweepRecord& r : records) {
        csv.field(r.theta).field(r.q0).field(r.replicate).field(r.seed);
        csv.field(r.report.tau1_a).field(r.report.tau1_p).field(r.report.tau_a).field(r.report.tau_p);
        csv.field(r.report.arrest_ratio);
        for (double tol : eps_tols) csv.field(fairness_indicator(r.report.tau1_a, tol));
        for (double tol : eps_tols) csv.field(fairness_indicator(r.report.tau1_p, tol));
        csv.end_row();
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

void export_summary(const SweepSummary& summary, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    CsvWriter csv(out);
    csv.field(std::string_view("theta")).field(std::string_view("q0")).field(std::string_view("replicates"));
    for (const char* stat : {"tau1_a", "tau1_p", "tau_a", "tau_p", "arrest_ratio"}) {
        for (const char* part : {"mean", "sd", "n", "nulls"}) csv.field(std::string(stat) + "_" + part);
    }
    for (double tol : summary.eps_tols) csv.field("fair_a_" + tol_label(tol));
    for (double tol : summary.eps_tols) csv.field("fair_p_" + tol_label(tol));
    csv.end_row();

    for (const CellSummary& c : summary.cells) {
        csv.field(c.theta).field(c.q0).field(c.replicates);
        for (const Stat* s : {&c.tau1_a, &c.tau1_p, &c.tau_a, &c.tau_p, &c.arrest_ratio}) {
            csv.field(s->mean).field(s->sd).field(s->count).field(s->nulls);
        }
        for (double f : c.fair_a) csv.field(f);
        for (double f : c.fair_p) csv.field(f);
        csv.end_row();
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace fairsim
