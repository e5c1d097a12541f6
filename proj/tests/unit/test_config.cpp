#include <doctest.h>

#include "fairsim/config.hpp"

using namespace fairsim;
using nlohmann::json;

namespace {

std::string error_field(const json& doc) {
    try {
        sim_config_from_json(doc).validate();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("cop split rounds q0 * n_cops") {
    SimConfig c;
    c.n_cops = 10;
    c.cop_bias = 0.8;
    CHECK(c.cops_in_region1() == 8);
    c.cop_bias = 0.5;
    CHECK(c.cops_in_region1() == 5);
    c.n_cops = 4;
    c.cop_bias = 1.0;
    CHECK(c.cops_in_region1() == 4);
}

TEST_CASE("defaults validate and round-trip through JSON") {
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    c.seed = 123456789012345ULL;
    c.stigma_follow = 0.25;
    c.cop_rule = CopRule::sequential;
    c.classifier.sentencing_rate = 0.3;
    const SimConfig back = sim_config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
}

TEST_CASE("invalid fields are named") {
    CHECK(error_field({{"crime_rate", 1.5}}) == "crime_rate");
    CHECK(error_field({{"grid_width", 51}}) == "grid_width");
    CHECK(error_field({{"n_per_group", 0}}) == "n_per_group");
    CHECK(error_field({{"n_cops", 0}}) == "n_cops");
    CHECK(error_field({{"stigma_bump_neighbor", 1.0}}) == "stigma_bump_neighbor");
    CHECK(error_field({{"long_move_len", 0}}) == "long_move_len");
    CHECK(error_field({{"cop_bias", -0.1}}) == "cop_bias");
    CHECK(error_field({{"sentencing_rate", 2}}) == "sentencing_rate");
    CHECK(error_field({{"crime_rat", 0.1}}) == "crime_rat");
    CHECK(error_field({{"cop_rule", "diagonal"}}) == "cop_rule");
    CHECK(error_field({{"max_ticks", "many"}}) == "max_ticks");
    CHECK(error_field({{"crime_rate", 0.02}}).empty());
}

TEST_CASE("sentencing rate accepts both spellings") {
    CHECK(sim_config_from_json({{"sentencing_rate", 0.7}}).sentencing_rate() == 0.7);
    CHECK(sim_config_from_json({{"classifier", {{"kind", "random"}, {"sentencing_rate", 0.2}}}}).sentencing_rate() == 0.2);
    CHECK_THROWS_AS(sim_config_from_json({{"sentencing_rate", 0.7}, {"classifier", {{"sentencing_rate", 0.2}}}}),
                    ConfigError);
}

TEST_CASE("prefix appears in error fields") {
    try {
        sim_config_from_json({{"recidivism_rate", -1}}, "base.");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "base.recidivism_rate");
    }
}
