#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairsim/justice.hpp"
#include "fairsim/types.hpp"

namespace fairsim {

// A metric with a zero denominator is undefined and carried as nullopt.
using Metric = std::optional<double>;

class DataIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Joint counts of (J, R) over one group's arrest events, plus the number of
// group members never arrested. An agent arrested k times contributes k events.
struct GroupTable {
    Group group = Group::g1;
    long tp = 0;  // J=1, R=1
    long fp = 0;  // J=1, R=0
    long fn = 0;  // J=0, R=1
    long tn = 0;  // J=0, R=0
    long never_arrested = 0;

    long events() const { return tp + fp + fn + tn; }
    // Arrest events plus one (A=0, J=0, R=0) record per never-arrested member.
    long population_records() const { return events() + never_arrested; }

    bool operator==(const GroupTable&) const = default;
};

struct ArrestMetrics {
    Metric ppv;
    Metric fpr;
    Metric fnr;
    Metric prevalence;
};

struct PopulationMetrics {
    Metric ppv;
    Metric fpr;
    Metric fnr;
    Metric prevalence;
    Metric arrest_prob;
};

// PPV/FPR/FNR of one group under one variant; the input to tau.
struct RateTriple {
    Metric ppv;
    Metric fpr;
    Metric fnr;
};

enum class Variant { arrested, population };

struct GroupReport {
    GroupTable table;
    ArrestMetrics arrested;
    PopulationMetrics population;
};

struct MetricsReport {
    GroupReport g1;
    GroupReport g2;
    Metric tau_a;
    Metric tau_p;
    Metric tau1_a;
    Metric tau1_p;
    Metric arrest_ratio;
};

// Throws DataIntegrityError for an event whose agent_id is not in the roster
// or whose group disagrees with the roster.
std::pair<GroupTable, GroupTable> tabulate(std::span<const ArrestEvent> events,
                                           std::span<const Civilian> roster);

// Running version of tabulate for time series: feed events as they happen.
class Tabulator {
public:
    explicit Tabulator(std::span<const Civilian> roster);

    void add(const ArrestEvent& event);
    void add(std::span<const ArrestEvent> events);

    GroupTable table(Group g) const;

private:
    std::vector<Group> group_of_;
    std::vector<int> arrests_of_;
    GroupTable g1_{Group::g1};
    GroupTable g2_{Group::g2};
    long members_g1_ = 0;
    long members_g2_ = 0;
    long arrested_g1_ = 0;
    long arrested_g2_ = 0;
};

ArrestMetrics arrest_metrics(const GroupTable& table);
PopulationMetrics population_metrics(const GroupTable& table);

RateTriple rates(const GroupTable& table, Variant variant);

// Sum of |1 - m(G1)/m(G2)| over PPV, FPR and FNR. Null if any input is null
// or any G2 metric is zero.
Metric tau(const RateTriple& g1, const RateTriple& g2);

// Signed single-term version 1 - fpr(G1)/fpr(G2).
Metric tau1(Metric fpr_g1, Metric fpr_g2);

// G1 arrest events over G2 arrest events.
Metric arrest_ratio(const GroupTable& g1, const GroupTable& g2);

// FPR - p/(1-p) * (1-PPV)/PPV * (1-FNR) on one table and variant. Exactly
// zero in real arithmetic. nullopt when the relation does not apply (an
// undefined input, PPV == 0 or prevalence == 1).
std::optional<double> identity_check(const GroupTable& table, Variant variant);

// Y: 1 when tau1 is defined and |tau1| < eps_tol, else 0.
int fairness_indicator(Metric tau1_value, double eps_tol);

MetricsReport make_report(const GroupTable& g1, const GroupTable& g2);

}  // namespace fairsim
