#include "fairsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fairsim {

namespace {

Metric ratio(long num, long den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

GroupTable& pick(GroupTable& g1, GroupTable& g2, Group g) { return g == Group::g1 ? g1 : g2; }

void count(GroupTable& t, const ArrestEvent& e) {
    if (e.judged_positive) {
        (e.recidivated ? t.tp : t.fp) += 1;
    } else {
        (e.recidivated ? t.fn : t.tn) += 1;
    }
}

// |1 - a/b|, or null when undefined.
Metric deviation(Metric a, Metric b) {
    if (!a || !b || *b == 0.0) return std::nullopt;
    return std::abs(1.0 - *a / *b);
}

}  // namespace

std::pair<GroupTable, GroupTable> tabulate(std::span<const ArrestEvent> events,
                                           std::span<const Civilian> roster) {
    Tabulator t(roster);
    t.add(events);
    return {t.table(Group::g1), t.table(Group::g2)};
}

Tabulator::Tabulator(std::span<const Civilian> roster) {
    int max_id = -1;
    for (const Civilian& c : roster) max_id = std::max(max_id, c.id);
    group_of_.assign(static_cast<std::size_t>(max_id + 1), Group::g1);
    arrests_of_.assign(static_cast<std::size_t>(max_id + 1), -1);  // -1 marks "not in roster"
    for (const Civilian& c : roster) {
        group_of_[static_cast<std::size_t>(c.id)] = c.group;
        arrests_of_[static_cast<std::size_t>(c.id)] = 0;
        (c.group == Group::g1 ? members_g1_ : members_g2_) += 1;
    }
}

void Tabulator::add(const ArrestEvent& e) {
    if (e.agent_id < 0 || static_cast<std::size_t>(e.agent_id) >= arrests_of_.size() ||
        arrests_of_[static_cast<std::size_t>(e.agent_id)] < 0) {
        throw DataIntegrityError("arrest event references unknown agent_id " + std::to_string(e.agent_id));
    }
    const auto idx = static_cast<std::size_t>(e.agent_id);
    if (group_of_[idx] != e.group) {
        throw DataIntegrityError("arrest event group disagrees with roster for agent_id " +
                                 std::to_string(e.agent_id));
    }
    if (arrests_of_[idx]++ == 0) (e.group == Group::g1 ? arrested_g1_ : arrested_g2_) += 1;
    count(pick(g1_, g2_, e.group), e);
}

void Tabulator::add(std::span<const ArrestEvent> events) {
    for (const ArrestEvent& e : events) add(e);
}

GroupTable Tabulator::table(Group g) const {
    GroupTable t = g == Group::g1 ? g1_ : g2_;
    t.never_arrested = g == Group::g1 ? members_g1_ - arrested_g1_ : members_g2_ - arrested_g2_;
    return t;
}

ArrestMetrics arrest_metrics(const GroupTable& t) {
    return {
        ratio(t.tp, t.tp + t.fp),
        ratio(t.fp, t.fp + t.tn),
        ratio(t.fn, t.tp + t.fn),
        ratio(t.tp + t.fn, t.events()),
    };
}

PopulationMetrics population_metrics(const GroupTable& t) {
    // Never-arrested records are (J=0, R=0): they only enlarge the R=0 and
    // total denominators.
    const long records = t.population_records();
    return {
        ratio(t.tp, t.tp + t.fp),
        ratio(t.fp, t.fp + t.tn + t.never_arrested),
        ratio(t.fn, t.tp + t.fn),
        ratio(t.tp + t.fn, records),
        ratio(t.events(), records),
    };
}

RateTriple rates(const GroupTable& table, Variant variant) {
    if (variant == Variant::arrested) {
        const ArrestMetrics m = arrest_metrics(table);
        return {m.ppv, m.fpr, m.fnr};
    }
    const PopulationMetrics m = population_metrics(table);
    return {m.ppv, m.fpr, m.fnr};
}

Metric tau(const RateTriple& g1, const RateTriple& g2) {
    const Metric a = deviation(g1.ppv, g2.ppv);
    const Metric b = deviation(g1.fpr, g2.fpr);
    const Metric c = deviation(g1.fnr, g2.fnr);
    if (!a || !b || !c) return std::nullopt;
    return *a + *b + *c;
}

Metric tau1(Metric fpr_g1, Metric fpr_g2) {
    if (!fpr_g1 || !fpr_g2 || *fpr_g2 == 0.0) return std::nullopt;
    return 1.0 - *fpr_g1 / *fpr_g2;
}

Metric arrest_ratio(const GroupTable& g1, const GroupTable& g2) { return ratio(g1.events(), g2.events()); }

std::optional<double> identity_check(const GroupTable& table, Variant variant) {
    const RateTriple r = rates(table, variant);
    const Metric p = variant == Variant::arrested ? arrest_metrics(table).prevalence
                                                  : population_metrics(table).prevalence;
    if (!r.ppv || !r.fpr || !r.fnr || !p) return std::nullopt;
    if (*r.ppv <= 0.0 || *p >= 1.0) return std::nullopt;
    const double predicted = (*p / (1.0 - *p)) * ((1.0 - *r.ppv) / *r.ppv) * (1.0 - *r.fnr);
    return *r.fpr - predicted;
}

int fairness_indicator(Metric tau1_value, double eps_tol) {
    return tau1_value && std::abs(*tau1_value) < eps_tol ? 1 : 0;
}

MetricsReport make_report(const GroupTable& g1, const GroupTable& g2) {
    MetricsReport r;
    r.g1 = {g1, arrest_metrics(g1), population_metrics(g1)};
    r.g2 = {g2, arrest_metrics(g2), population_metrics(g2)};
    r.tau_a = tau(rates(g1, Variant::arrested), rates(g2, Variant::arrested));
    r.tau_p = tau(rates(g1, Variant::population), rates(g2, Variant::population));
    r.tau1_a = tau1(r.g1.arrested.fpr, r.g2.arrested.fpr);
    r.tau1_p = tau1(r.g1.population.fpr, r.g2.population.fpr);
    r.arrest_ratio = arrest_ratio(g1, g2);
    return r;
}

}  // namespace fairsim
