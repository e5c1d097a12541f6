#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace fairsim {

// Raised for any invalid parameter. field() names the offending key using
// the JSON spelling, e.g. "crime_rate" or "base.grid_width".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// How a cop combines the stigma move and the random move within a tick.
enum class CopRule {
    exclusive,   // stigma move with probability theta, otherwise random move
    sequential,  // stigma move with probability theta, then always a random move
};

enum class ClassifierKind { random };

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::random;
    double sentencing_rate = 0.5;  // r_c
};

struct SimConfig {
    int grid_width = 50;
    int grid_height = 50;
    int n_per_group = 100;
    int n_cops = 10;
    double crime_rate = 0.01;       // c0
    double recidivism_rate = 0.4;   // r0
    double arrest_rate = 1.0;       // r_a
    double cop_bias = 0.8;          // q0, fraction of cops starting in region 1
    double stigma_follow = 0.5;     // theta
    double long_move_prob = 0.1;    // omega
    int long_move_len = 3;          // m_c
    double stigma_bump_center = 1.0;
    double stigma_bump_neighbor = 0.5;
    int max_ticks = 5000;
    std::uint64_t seed = 0;
    CopRule cop_rule = CopRule::exclusive;
    ClassifierSpec classifier{};

    double sentencing_rate() const { return classifier.sentencing_rate; }

    // Number of cops placed in region 1 at start: round(q0 * n_cops).
    int cops_in_region1() const;

    // Throws ConfigError naming the first offending field.
    void validate() const;
};

std::string to_string(CopRule rule);
std::string to_string(ClassifierKind kind);

// JSON mapping. Missing keys take the defaults above; unknown keys are
// rejected so typos cannot silently fall back to a default. `prefix` is
// prepended to field names in error messages.
SimConfig sim_config_from_json(const nlohmann::json& doc, const std::string& prefix = "");
nlohmann::json to_json(const SimConfig& config);

}  // namespace fairsim
