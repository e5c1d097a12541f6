#include <doctest.h>

#include <cmath>

#include "fairsim/metrics.hpp"
#include "fairsim/rng.hpp"
#include "fairsim/world.hpp"

using namespace fairsim;

namespace {

GroupTable table(long tp, long fp, long fn, long tn, long never = 0) {
    GroupTable t;
    t.tp = tp;
    t.fp = fp;
    t.fn = fn;
    t.tn = tn;
    t.never_arrested = never;
    return t;
}

std::vector<Civilian> roster(int per_group) {
    std::vector<Civilian> r;
    for (int i = 0; i < 2 * per_group; ++i) {
        Civilian c;
        c.id = i;
        c.group = i < per_group ? Group::g1 : Group::g2;
        r.push_back(c);
    }
    return r;
}

ArrestEvent event(int id, Group g, bool j, bool r) { return {1, id, g, {0, 0}, j, r}; }

}  // namespace

TEST_CASE("tabulate") {
    const auto people = roster(100);
    SUBCASE("empty log") {
        const auto [g1, g2] = tabulate({}, people);
        CHECK(g1.events() == 0);
        CHECK(g2.events() == 0);
        CHECK(g1.never_arrested == 100);
        CHECK(g2.never_arrested == 100);
    }
    SUBCASE("hand enumeration") {
        const std::vector<ArrestEvent> log = {event(0, Group::g1, true, true), event(1, Group::g1, true, false),
                                              event(2, Group::g1, false, true)};
        const auto [g1, g2] = tabulate(log, people);
        CHECK(g1 == table(1, 1, 1, 0, 97));
        CHECK(g2.never_arrested == 100);
    }
    SUBCASE("repeat arrests count per event") {
        const std::vector<ArrestEvent> log(3, event(150, Group::g2, false, false));
        const auto [g1, g2] = tabulate(log, people);
        CHECK(g2.tn == 3);
        CHECK(g2.never_arrested == 99);
    }
    SUBCASE("bad records") {
        const std::vector<ArrestEvent> unknown = {event(500, Group::g1, true, true)};
        CHECK_THROWS_AS(tabulate(unknown, people), DataIntegrityError);
        const std::vector<ArrestEvent> wrong_group = {event(0, Group::g2, true, true)};
        CHECK_THROWS_AS(tabulate(wrong_group, people), DataIntegrityError);
    }
}

TEST_CASE("incremental tabulation matches the batch version") {
    SimConfig c;
    c.seed = 5;
    c.max_ticks = 1500;
    const SimResult r = run_sim(c);
    Tabulator tab(r.final_state.civilians);
    for (const ArrestEvent& e : r.events) tab.add(e);
    const auto [g1, g2] = tabulate(r.events, r.final_state.civilians);
    CHECK(tab.table(Group::g1) == g1);
    CHECK(tab.table(Group::g2) == g2);
}

TEST_CASE("arrest-conditioned metrics") {
    const ArrestMetrics m = arrest_metrics(table(4, 6, 6, 9));
    CHECK(*m.ppv == doctest::Approx(0.4));
    CHECK(*m.fpr == doctest::Approx(0.4));
    CHECK(*m.fnr == doctest::Approx(0.6));
    CHECK(*m.prevalence == doctest::Approx(0.4));

    const ArrestMetrics z = arrest_metrics(table(0, 0, 0, 0));
    CHECK_FALSE(z.ppv);
    CHECK_FALSE(z.fpr);
    CHECK_FALSE(z.fnr);
    CHECK_FALSE(z.prevalence);
}

TEST_CASE("population metrics") {
    const GroupTable t = table(4, 6, 6, 9, 75);
    const PopulationMetrics p = population_metrics(t);
    CHECK(*p.fpr == doctest::Approx(6.0 / 90));
    CHECK(*p.fnr == doctest::Approx(0.6));
    CHECK(*p.ppv == doctest::Approx(0.4));
    CHECK(*p.prevalence == doctest::Approx(0.1));
    CHECK(*p.arrest_prob == doctest::Approx(0.25));

    const GroupTable all_arrested = table(4, 6, 6, 9, 0);
    CHECK(*population_metrics(all_arrested).fpr == *arrest_metrics(all_arrested).fpr);
}

TEST_CASE("population PPV and prevalence decomposition are exact") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        const GroupTable t = table(static_cast<long>(rng.uniform_index(50)), static_cast<long>(rng.uniform_index(50)),
                                   static_cast<long>(rng.uniform_index(50)), static_cast<long>(rng.uniform_index(50)),
                                   static_cast<long>(rng.uniform_index(100)));
        const ArrestMetrics a = arrest_metrics(t);
        const PopulationMetrics p = population_metrics(t);
        REQUIRE(a.ppv.has_value() == p.ppv.has_value());
        if (a.ppv) CHECK(*a.ppv == *p.ppv);
        // Exact as fractions; the double product can be off by a rounding step.
        if (a.prevalence && p.arrest_prob) {
            CHECK(std::abs(*p.prevalence - *a.prevalence * *p.arrest_prob) <= 4 * 0x1p-52 * *p.prevalence);
        }
    }
}

TEST_CASE("tau") {
    const RateTriple same{0.4, 0.5, 0.5};
    CHECK(*tau(same, same) == 0.0);
    CHECK(*tau({0.4, 0.2, 0.3}, {0.4, 0.1, 0.6}) == doctest::Approx(1.5));
    CHECK_FALSE(tau({0.4, 0.2, 0.3}, {0.4, 0.0, 0.6}));
    CHECK_FALSE(tau({std::nullopt, 0.2, 0.3}, {0.4, 0.1, 0.6}));
}

TEST_CASE("tau1") {
    CHECK(*tau1(0.3, 0.3) == 0.0);
    CHECK(*tau1(0.10, 0.05) == doctest::Approx(-1.0));
    CHECK_FALSE(tau1(0.1, 0.0));
    CHECK_FALSE(tau1(std::nullopt, 0.1));
}

TEST_CASE("arrest ratio") {
    CHECK(*arrest_ratio(table(1, 1, 1, 1), table(1, 1, 1, 1)) == 1.0);
    CHECK(*arrest_ratio(table(150, 0, 0, 0), table(50, 0, 0, 0)) == 3.0);
    CHECK_FALSE(arrest_ratio(table(1, 0, 0, 0), table(0, 0, 0, 0)));
}

TEST_CASE("identity residual") {
    CHECK(std::abs(*identity_check(table(4, 6, 6, 9), Variant::arrested)) < 1e-12);

    Rng rng(12345);
    int checked_a = 0, checked_p = 0;
    for (int i = 0; i < 1000; ++i) {
        const GroupTable t = table(1 + static_cast<long>(rng.uniform_index(500)), 1 + static_cast<long>(rng.uniform_index(500)),
                                   1 + static_cast<long>(rng.uniform_index(500)), 1 + static_cast<long>(rng.uniform_index(500)),
                                   1 + static_cast<long>(rng.uniform_index(500)));
        const auto a = identity_check(t, Variant::arrested);
        const auto p = identity_check(t, Variant::population);
        REQUIRE(a);
        REQUIRE(p);
        CHECK(std::abs(*a) < 1e-12);
        CHECK(std::abs(*p) < 1e-12);
        checked_a += 1;
        checked_p += 1;
    }
    CHECK(checked_a == 1000);
    CHECK(checked_p == 1000);
    CHECK_FALSE(identity_check(table(0, 0, 0, 0), Variant::arrested));
}

TEST_CASE("fairness indicator") {
    CHECK(fairness_indicator(0.0, 0.1) == 1);
    CHECK(fairness_indicator(*tau1(0.2, 0.1), 1.0) == 0);
    CHECK(fairness_indicator(-0.99, 1.0) == 1);
    CHECK(fairness_indicator(std::nullopt, 1.0) == 0);
}

TEST_CASE("arrest-conditioned rates converge on long runs") {
    // Pool independent runs until each group has at least 500 events.
    SimConfig c;
    c.stigma_follow = 0.75;
    GroupTable g1{Group::g1}, g2{Group::g2};
    for (std::uint64_t i = 0; i < 40 && (g1.events() < 500 || g2.events() < 500); ++i) {
        c.seed = derive_seed(404, {i});
        const SimResult r = run_sim(c);
        const auto [a, b] = tabulate(r.events, r.final_state.civilians);
        for (auto [into, from] : {std::pair{&g1, &a}, std::pair{&g2, &b}}) {
            into->tp += from->tp;
            into->fp += from->fp;
            into->fn += from->fn;
            into->tn += from->tn;
        }
    }
    for (const GroupTable* t : {&g1, &g2}) {
        REQUIRE(t->events() >= 500);
        const ArrestMetrics m = arrest_metrics(*t);
        CHECK(std::abs(*m.ppv - 0.4) < 0.07);
        CHECK(std::abs(*m.fpr - 0.5) < 0.07);
        CHECK(std::abs(*m.fnr - 0.5) < 0.07);
    }
}
