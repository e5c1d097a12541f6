#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairsim/config.hpp"
#include "fairsim/experiments.hpp"
#include "fairsim/metrics.hpp"
#include "fairsim/rng.hpp"

namespace fairsim {

// Epsilon-greedy search over surveillance policies: each action is a theta,
// each pull a fresh episode whose reward is the fairness indicator Y.
struct BanditConfig {
    std::vector<double> actions{0.0, 0.25, 0.5, 0.75, 1.0};
    double epsilon = 0.1;
    int pulls = 200;
    int runs = 30;
    double eps_tol = 1.0;
    Variant variant = Variant::population;
    SimConfig episode = default_episode();
    std::uint64_t master_seed = 0;

    static SimConfig default_episode();
    void validate() const;
};

BanditConfig bandit_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const BanditConfig& config);

struct PullRecord {
    int index = 0;  // 0-based pull number within the run
    std::size_t action = 0;
    int reward = 0;
};

// Action values are incremental sample means; unpulled actions sit at 0.
class BanditState {
public:
    explicit BanditState(std::size_t n_actions) : values_(n_actions, 0.0), counts_(n_actions, 0) {}

    std::size_t n_actions() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<long>& counts() const { return counts_; }
    const std::vector<PullRecord>& history() const { return history_; }

    // N(a) += 1; Q(a) += (reward - Q(a)) / N(a).
    void update(std::size_t action, double reward);

private:
    std::vector<double> values_;
    std::vector<long> counts_;
    std::vector<PullRecord> history_;
};

// With probability epsilon a uniform action, otherwise a uniformly chosen
// argmax of the action values.
std::size_t select_action(const BanditState& state, double epsilon, Rng& rng);

std::uint64_t episode_seed(std::uint64_t master_seed, int run, int pull);

// Runs one episode with stigma_follow = theta and the given seed and
// returns Y for the final-tick tau1 of `variant`.
int pull(double theta, const SimConfig& episode, double eps_tol, Variant variant, std::uint64_t seed);
int pull(const BanditConfig& config, std::size_t action, int run, int pull_index);

struct BanditResult {
    std::vector<BanditState> runs;
    std::vector<double> mean_reward;  // per pull index, across runs
    std::vector<double> se_reward;    // standard error across runs (0 with one run)
    std::vector<std::vector<double>> run_proportions;  // [run][action]
    std::vector<double> aggregate_proportions;         // over all runs and pulls
};

BanditResult run_bandit(const BanditConfig& config, const RunOptions& options = {});

// bandit_reward.csv: pull,mean_reward,se
void export_reward(const BanditResult& result, const std::filesystem::path& path);
// bandit_actions.csv: run,theta,proportion; run is a run index or "aggregate"
void export_actions(const BanditConfig& config, const BanditResult& result, const std::filesystem::path& path);

}  // namespace fairsim
