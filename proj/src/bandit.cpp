#include "fairsim/bandit.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>

#include "fairsim/csv.hpp"
#include "fairsim/parallel.hpp"

namespace fairsim {

namespace {

// Stream tags keep action-selection draws apart from episode seeds.
constexpr std::uint64_t kPolicyStream = 0x706f6c696379ULL;
constexpr std::uint64_t kEpisodeStream = 0x657069736f6465ULL;

}  // namespace

SimConfig BanditConfig::default_episode() {
    SimConfig c;
    c.cop_bias = 0.5;
    c.max_ticks = 1000;
    return c;
}

void BanditConfig::validate() const {
    if (actions.empty()) throw ConfigError("actions", "must not be empty");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (!(actions[i] >= 0.0 && actions[i] <= 1.0)) {
            throw ConfigError("actions[" + std::to_string(i) + "]", "must be in [0, 1]");
        }
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon", "must be in [0, 1]");
    if (pulls < 1) throw ConfigError("pulls", "must be at least 1");
    if (runs < 1) throw ConfigError("runs", "must be at least 1");
    if (!(eps_tol > 0.0)) throw ConfigError("eps_tol", "must be positive");
    try {
        episode.validate();
    } catch (const ConfigError& e) {
        throw ConfigError("episode." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
}

BanditConfig bandit_config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "must be a JSON object");
    static const std::set<std::string> known = {"actions", "epsilon", "pulls",   "runs",
                                                "eps_tol", "variant", "episode", "master_seed"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) throw ConfigError(key, "unknown field");
    }
    BanditConfig c;
    auto number = [&](const char* key, double fallback) {
        auto it = doc.find(key);
        if (it == doc.end()) return fallback;
        if (!it->is_number()) throw ConfigError(key, "must be a number");
        return it->get<double>();
    };
    auto integer = [&](const char* key, long long fallback) {
        auto it = doc.find(key);
        if (it == doc.end()) return fallback;
        if (!it->is_number_integer()) throw ConfigError(key, "must be an integer");
        return it->get<long long>();
    };
    if (auto it = doc.find("actions"); it != doc.end()) {
        if (!it->is_array()) throw ConfigError("actions", "must be an array of numbers");
        c.actions.clear();
        for (const auto& v : *it) {
            if (!v.is_number()) throw ConfigError("actions", "must be an array of numbers");
            c.actions.push_back(v.get<double>());
        }
    }
    c.epsilon = number("epsilon", c.epsilon);
    c.pulls = static_cast<int>(integer("pulls", c.pulls));
    c.runs = static_cast<int>(integer("runs", c.runs));
    c.eps_tol = number("eps_tol", c.eps_tol);
    if (auto it = doc.find("master_seed"); it != doc.end()) {
        if (!it->is_number_integer()) throw ConfigError("master_seed", "must be an integer");
        c.master_seed = it->get<std::uint64_t>();
    }
    if (auto it = doc.find("variant"); it != doc.end()) {
        const std::string v = it->is_string() ? it->get<std::string>() : "";
        if (v == "population") {
            c.variant = Variant::population;
        } else if (v == "arrested") {
            c.variant = Variant::arrested;
        } else {
            throw ConfigError("variant", "must be \"population\" or \"arrested\"");
        }
    }
    if (auto it = doc.find("episode"); it != doc.end()) {
        // Episode fields not given fall back to the episode defaults, not the
        // plain SimConfig defaults.
        nlohmann::json merged = to_json(BanditConfig::default_episode());
        if (!it->is_object()) throw ConfigError("episode", "must be a JSON object");
        if (it->contains("classifier") || it->contains("sentencing_rate")) {
            merged.erase("classifier");
            merged.erase("sentencing_rate");
        }
        merged.update(*it);
        c.episode = sim_config_from_json(merged, "episode.");
    }
    c.validate();
    return c;
}

nlohmann::json to_json(const BanditConfig& c) {
    return {{"actions", c.actions},
            {"epsilon", c.epsilon},
            {"pulls", c.pulls},
            {"runs", c.runs},
            {"eps_tol", c.eps_tol},
            {"variant", c.variant == Variant::population ? "population" : "arrested"},
            {"episode", to_json(c.episode)},
            {"master_seed", c.master_seed}};
}

void BanditState::update(std::size_t action, double reward) {
    counts_.at(action) += 1;
    values_[action] += (reward - values_[action]) / static_cast<double>(counts_[action]);
    history_.push_back({static_cast<int>(history_.size()), action, static_cast<int>(reward)});
}

std::size_t select_action(const BanditState& state, double epsilon, Rng& rng) {
    const std::size_t n = state.n_actions();
    if (rng.bernoulli(epsilon)) return rng.uniform_index(n);

    const auto& q = state.values();
    std::vector<std::size_t> best;
    double best_value = q[0];
    for (std::size_t a = 0; a < n; ++a) {
        if (q[a] > best_value) {
            best_value = q[a];
            best.clear();
        }
        if (q[a] == best_value) best.push_back(a);
    }
    return best.size() == 1 ? best[0] : best[rng.uniform_index(best.size())];
}

std::uint64_t episode_seed(std::uint64_t master_seed, int run, int pull_index) {
    return derive_seed(master_seed, {kEpisodeStream, static_cast<std::uint64_t>(run),
                                     static_cast<std::uint64_t>(pull_index)});
}

int pull(double theta, const SimConfig& episode, double eps_tol, Variant variant, std::uint64_t seed) {
    SimConfig c = episode;
    c.stigma_follow = theta;
    c.seed = seed;
    const MetricsReport report = final_report(c);
    return fairness_indicator(variant == Variant::population ? report.tau1_p : report.tau1_a, eps_tol);
}

int pull(const BanditConfig& config, std::size_t action, int run, int pull_index) {
    return pull(config.actions.at(action), config.episode, config.eps_tol, config.variant,
                episode_seed(config.master_seed, run, pull_index));
}

BanditResult run_bandit(const BanditConfig& config, const RunOptions& options) {
    config.validate();
    const std::size_t n_actions = config.actions.size();
    const auto n_runs = static_cast<std::size_t>(config.runs);

    BanditResult result;
    result.runs.assign(n_runs, BanditState(n_actions));
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    parallel_for(n_runs, options.workers, [&](std::size_t run) {
        BanditState& state = result.runs[run];
        Rng policy_rng(derive_seed(config.master_seed, {kPolicyStream, static_cast<std::uint64_t>(run)}));
        for (int p = 0; p < config.pulls; ++p) {
            const std::size_t a = select_action(state, config.epsilon, policy_rng);
            state.update(a, pull(config, a, static_cast<int>(run), p));
        }
        const std::size_t finished = ++done;
        if (options.progress) {
            std::lock_guard lock(progress_mutex);
            options.progress(finished, n_runs);
        }
    });

    const auto pulls = static_cast<std::size_t>(config.pulls);
    result.mean_reward.assign(pulls, 0.0);
    result.se_reward.assign(pulls, 0.0);
    for (std::size_t p = 0; p < pulls; ++p) {
        double sum = 0.0;
        for (const BanditState& s : result.runs) sum += s.history()[p].reward;
        const double mean = sum / static_cast<double>(n_runs);
        result.mean_reward[p] = mean;
        if (n_runs > 1) {
            double ss = 0.0;
            for (const BanditState& s : result.runs) {
                const double d = s.history()[p].reward - mean;
                ss += d * d;
            }
            result.se_reward[p] = std::sqrt(ss / static_cast<double>(n_runs - 1)) / std::sqrt(static_cast<double>(n_runs));
        }
    }

    result.aggregate_proportions.assign(n_actions, 0.0);
    for (const BanditState& s : result.runs) {
        std::vector<double> props(n_actions, 0.0);
        for (std::size_t a = 0; a < n_actions; ++a) {
            props[a] = static_cast<double>(s.counts()[a]) / static_cast<double>(pulls);
            result.aggregate_proportions[a] += static_cast<double>(s.counts()[a]);
        }
        result.run_proportions.push_back(std::move(props));
    }
    for (double& v : result.aggregate_proportions) v /= static_cast<double>(pulls * n_runs);
    return result;
}

void export_reward(const BanditResult& result, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    CsvWriter csv(out);
    csv.row({"pull", "mean_reward", "se"});
    for (std::size_t p = 0; p < result.mean_reward.size(); ++p) {
        csv.field(static_cast<long>(p + 1)).field(result.mean_reward[p]).field(result.se_reward[p]);
        csv.end_row();
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

void export_actions(const BanditConfig& config, const BanditResult& result, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    CsvWriter csv(out);
    csv.row({"run", "theta", "proportion"});
    for (std::size_t a = 0; a < config.actions.size(); ++a) {
        csv.field(std::string_view("aggregate")).field(config.actions[a]).field(result.aggregate_proportions[a]);
        csv.end_row();
    }
    for (std::size_t r = 0; r < result.run_proportions.size(); ++r) {
        for (std::size_t a = 0; a < config.actions.size(); ++a) {
            csv.field(static_cast<long>(r)).field(config.actions[a]).field(result.run_proportions[r][a]);
            csv.end_row();
        }
    }
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace fairsim
