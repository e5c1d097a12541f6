#include "fairsim/config.hpp"

#include <cmath>
#include <set>

namespace fairsim {

namespace {

void require_probability(double value, const char* field) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ConfigError(field, "must be a probability in [0, 1], got " + std::to_string(value));
    }
}

template <class T>
T read_field(const nlohmann::json& doc, const char* key, const std::string& prefix, T fallback) {
    auto it = doc.find(key);
    if (it == doc.end()) return fallback;
    try {
        if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw ConfigError(prefix + key, "must be an integer");
        } else {
            if (!it->is_number()) throw ConfigError(prefix + key, "must be a number");
        }
        return it->get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(prefix + key, e.what());
    }
}

ClassifierSpec classifier_from_json(const nlohmann::json& doc, const std::string& prefix) {
    if (!doc.is_object()) throw ConfigError(prefix + "classifier", "must be an object");
    ClassifierSpec spec;
    for (const auto& [key, value] : doc.items()) {
        if (key != "kind" && key != "sentencing_rate") {
            throw ConfigError(prefix + "classifier." + key, "unknown field");
        }
    }
    if (auto it = doc.find("kind"); it != doc.end()) {
        if (!it->is_string() || it->get<std::string>() != "random") {
            throw ConfigError(prefix + "classifier.kind", "only \"random\" is supported");
        }
    }
    spec.sentencing_rate =
        read_field<double>(doc, "sentencing_rate", prefix + "classifier.", spec.sentencing_rate);
    return spec;
}

}  // namespace

int SimConfig::cops_in_region1() const {
    return static_cast<int>(std::lround(cop_bias * n_cops));
}

void SimConfig::validate() const {
    if (grid_width < 2 || grid_width % 2 != 0) {
        throw ConfigError("grid_width", "must be even and at least 2, got " + std::to_string(grid_width));
    }
    if (grid_height < 1) throw ConfigError("grid_height", "must be at least 1");
    if (n_per_group < 1) throw ConfigError("n_per_group", "must be at least 1");
    if (n_cops < 1) throw ConfigError("n_cops", "must be at least 1");
    require_probability(crime_rate, "crime_rate");
    require_probability(recidivism_rate, "recidivism_rate");
    require_probability(classifier.sentencing_rate, "sentencing_rate");
    require_probability(arrest_rate, "arrest_rate");
    require_probability(cop_bias, "cop_bias");
    require_probability(stigma_follow, "stigma_follow");
    require_probability(long_move_prob, "long_move_prob");
    if (long_move_len < 1) throw ConfigError("long_move_len", "must be at least 1");
    if (!(stigma_bump_center > 0.0) || !std::isfinite(stigma_bump_center)) {
        throw ConfigError("stigma_bump_center", "must be positive and finite");
    }
    if (!(stigma_bump_neighbor > 0.0 && stigma_bump_neighbor < stigma_bump_center)) {
        throw ConfigError("stigma_bump_neighbor", "must be positive and smaller than stigma_bump_center");
    }
    if (max_ticks < 0) throw ConfigError("max_ticks", "must be non-negative");
}

std::string to_string(CopRule rule) {
    return rule == CopRule::exclusive ? "exclusive" : "sequential";
}

std::string to_string(ClassifierKind) { return "random"; }

SimConfig sim_config_from_json(const nlohmann::json& doc, const std::string& prefix) {
    if (!doc.is_object()) {
        throw ConfigError(prefix.empty() ? "<root>" : prefix.substr(0, prefix.size() - 1),
                          "must be a JSON object");
    }
    static const std::set<std::string> known = {
        "grid_width", "grid_height", "n_per_group", "n_cops", "crime_rate", "recidivism_rate",
        "sentencing_rate", "arrest_rate", "cop_bias", "stigma_follow", "long_move_prob",
        "long_move_len", "stigma_bump_center", "stigma_bump_neighbor", "max_ticks", "seed",
        "cop_rule", "classifier"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) throw ConfigError(prefix + key, "unknown field");
    }

    SimConfig c;
    c.grid_width = read_field(doc, "grid_width", prefix, c.grid_width);
    c.grid_height = read_field(doc, "grid_height", prefix, c.grid_height);
    c.n_per_group = read_field(doc, "n_per_group", prefix, c.n_per_group);
    c.n_cops = read_field(doc, "n_cops", prefix, c.n_cops);
    c.crime_rate = read_field(doc, "crime_rate", prefix, c.crime_rate);
    c.recidivism_rate = read_field(doc, "recidivism_rate", prefix, c.recidivism_rate);
    c.arrest_rate = read_field(doc, "arrest_rate", prefix, c.arrest_rate);
    c.cop_bias = read_field(doc, "cop_bias", prefix, c.cop_bias);
    c.stigma_follow = read_field(doc, "stigma_follow", prefix, c.stigma_follow);
    c.long_move_prob = read_field(doc, "long_move_prob", prefix, c.long_move_prob);
    c.long_move_len = read_field(doc, "long_move_len", prefix, c.long_move_len);
    c.stigma_bump_center = read_field(doc, "stigma_bump_center", prefix, c.stigma_bump_center);
    c.stigma_bump_neighbor = read_field(doc, "stigma_bump_neighbor", prefix, c.stigma_bump_neighbor);
    c.max_ticks = read_field(doc, "max_ticks", prefix, c.max_ticks);
    c.seed = read_field<std::uint64_t>(doc, "seed", prefix, c.seed);

    if (auto it = doc.find("cop_rule"); it != doc.end()) {
        const std::string rule = it->is_string() ? it->get<std::string>() : "";
        if (rule == "exclusive") {
            c.cop_rule = CopRule::exclusive;
        } else if (rule == "sequential") {
            c.cop_rule = CopRule::sequential;
        } else {
            throw ConfigError(prefix + "cop_rule", "must be \"exclusive\" or \"sequential\"");
        }
    }

    // r_c may be given at top level, inside "classifier", or both (must agree).
    if (auto it = doc.find("classifier"); it != doc.end()) {
        c.classifier = classifier_from_json(*it, prefix);
    }
    if (doc.contains("sentencing_rate")) {
        const double top = read_field(doc, "sentencing_rate", prefix, c.classifier.sentencing_rate);
        if (doc.contains("classifier") && doc["classifier"].contains("sentencing_rate") &&
            top != c.classifier.sentencing_rate) {
            throw ConfigError(prefix + "sentencing_rate", "disagrees with classifier.sentencing_rate");
        }
        c.classifier.sentencing_rate = top;
    }

    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
    return c;
}

nlohmann::json to_json(const SimConfig& c) {
    return nlohmann::json{
        {"grid_width", c.grid_width},
        {"grid_height", c.grid_height},
        {"n_per_group", c.n_per_group},
        {"n_cops", c.n_cops},
        {"crime_rate", c.crime_rate},
        {"recidivism_rate", c.recidivism_rate},
        {"sentencing_rate", c.classifier.sentencing_rate},
        {"arrest_rate", c.arrest_rate},
        {"cop_bias", c.cop_bias},
        {"stigma_follow", c.stigma_follow},
        {"long_move_prob", c.long_move_prob},
        {"long_move_len", c.long_move_len},
        {"stigma_bump_center", c.stigma_bump_center},
        {"stigma_bump_neighbor", c.stigma_bump_neighbor},
        {"max_ticks", c.max_ticks},
        {"seed", c.seed},
        {"cop_rule", to_string(c.cop_rule)},
        {"classifier", {{"kind", to_string(c.classifier.kind)}, {"sentencing_rate", c.classifier.sentencing_rate}}},
    };
}

}  // namespace fairsim
