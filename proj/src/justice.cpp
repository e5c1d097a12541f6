#include "fairsim/justice.hpp"

namespace fairsim {

bool classify(const ClassifierSpec& classifier, const Civilian& /*agent*/, Rng& rng) {
    switch (classifier.kind) {
        case ClassifierKind::random:
            return rng.bernoulli(classifier.sentencing_rate);
    }
    return false;
}

Verdict adjudicate(Civilian& agent, const ClassifierSpec& classifier, double recidivism_rate, Rng& rng) {
    Verdict v;
    v.judged_positive = classify(classifier, agent, rng);
    v.recidivated = rng.bernoulli(recidivism_rate);

    agent.arrest_count += 1;
    agent.ever_positive_j = agent.ever_positive_j || v.judged_positive;
    agent.ever_recidivist = agent.ever_recidivist || v.recidivated;
    return v;
}

}  // namespace fairsim
