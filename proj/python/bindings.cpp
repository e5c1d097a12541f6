// Thin Python surface. Configs and results cross the boundary as JSON text;
// the package __init__ turns them into dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "fairsim/bandit.hpp"
#include "fairsim/experiments.hpp"
#include "fairsim/serialize.hpp"
#include "fairsim/version.hpp"
#include "fairsim/world.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw fairsim::ConfigError("<config>", e.what());
    }
}

std::string simulate(const std::string& config_json) {
    const fairsim::SimConfig config = fairsim::sim_config_from_json(parse(config_json));
    std::optional<fairsim::SimResult> run;
    {
        py::gil_scoped_release release;
        run = fairsim::run_sim(config);
    }
    const fairsim::SimResult& result = *run;
    std::ostringstream events;
    fairsim::write_events_jsonl(result.events, events);
    json event_list = json::array();
    std::istringstream lines(events.str());
    for (std::string line; std::getline(lines, line);) event_list.push_back(json::parse(line));
    const auto [g1, g2] = fairsim::tabulate(result.events, result.final_state.civilians);
    return json{{"config", fairsim::to_json(config)},
                {"ticks", result.final_state.tick},
                {"events", std::move(event_list)},
                {"report", fairsim::to_json(fairsim::make_report(g1, g2))}}
        .dump();
}

std::string sweep(const std::string& config_json, int workers) {
    const fairsim::SweepConfig config = fairsim::sweep_config_from_json(parse(config_json));
    std::vector<fairsim::SweepRecord> records;
    {
        py::gil_scoped_release release;
        records = fairsim::run_sweep(config, {workers, {}});
    }
    json rows = json::array();
    for (const auto& r : records) {
        rows.push_back({{"theta", r.theta},
                        {"q0", r.q0},
                        {"replicate", r.replicate},
                        {"seed", r.seed},
                        {"report", fairsim::to_json(r.report)},
                        {"y_a", r.y_a},
                        {"y_p", r.y_p}});
    }
    return json{{"config", fairsim::to_json(config)}, {"records", std::move(rows)}}.dump();
}

std::string bandit(const std::string& config_json, int workers) {
    const fairsim::BanditConfig config = fairsim::bandit_config_from_json(parse(config_json));
    fairsim::BanditResult result;
    {
        py::gil_scoped_release release;
        result = fairsim::run_bandit(config, {workers, {}});
    }
    return json{{"config", fairsim::to_json(config)},
                {"mean_reward", result.mean_reward},
                {"se_reward", result.se_reward},
                {"aggregate_proportions", result.aggregate_proportions},
                {"run_proportions", result.run_proportions}}
        .dump();
}

}  // namespace

PYBIND11_MODULE(_fairsim, m) {
    m.doc() = "Core bindings for the fairsim simulator";
    m.attr("__version__") = fairsim::kVersion;
    py::register_exception<fairsim::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("simulate", &simulate, py::arg("config_json"));
    m.def("sweep", &sweep, py::arg("config_json"), py::arg("workers") = 1);
    m.def("bandit", &bandit, py::arg("config_json"), py::arg("workers") = 1);
    m.def("default_config", [] { return fairsim::to_json(fairsim::SimConfig{}).dump(); });
    m.def("tau1", &fairsim::tau1, py::arg("fpr_g1"), py::arg("fpr_g2"));
    m.def("fairness_indicator", &fairsim::fairness_indicator, py::arg("tau1"), py::arg("eps_tol"));
}
