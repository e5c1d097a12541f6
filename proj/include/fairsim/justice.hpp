#pragma once

#include <vector>

#include "fairsim/config.hpp"
#include "fairsim/rng.hpp"
#include "fairsim/types.hpp"

namespace fairsim {

// One arrest and its adjudication.
struct ArrestEvent {
    int tick = 0;  // 1-based iteration in which the arrest happened
    int agent_id = 0;
    Group group = Group::g1;
    Cell cell{};
    bool judged_positive = false;  // J
    bool recidivated = false;      // R

    bool operator==(const ArrestEvent&) const = default;
};

using EventLog = std::vector<ArrestEvent>;

struct Verdict {
    bool judged_positive = false;
    bool recidivated = false;
};

// Hard 0/1 decision for an arrested agent. The agent record is passed so a
// covariate-based classifier can be added without touching the engine.
bool classify(const ClassifierSpec& classifier, const Civilian& agent, Rng& rng);

// Draws J then R (independent of each other and of group) and updates the
// agent's arrest bookkeeping. Call only for agents arrested this tick.
Verdict adjudicate(Civilian& agent, const ClassifierSpec& classifier, double recidivism_rate, Rng& rng);

}  // namespace fairsim
