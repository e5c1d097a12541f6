#include "fairsim/world.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace fairsim {

namespace {

constexpr std::array<Cell, 8> kHeadings = {{
    {-1, -1}, {0, -1}, {1, -1},
    {-1, 0},           {1, 0},
    {-1, 1},  {0, 1},  {1, 1},
}};

Cell uniform_cell_in_region(const WorldGrid& grid, int region, Rng& rng) {
    const int half = grid.width() / 2;
    const int x0 = region == 1 ? 0 : half;
    const int x = x0 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(half)));
    const int y = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(grid.height())));
    return {x, y};
}

}  // namespace

WorldGrid::WorldGrid(int width, int height)
    : width_(width), height_(height), stigma_(static_cast<std::size_t>(width) * height, 0.0) {}

SimState init_state(const SimConfig& config) {
    config.validate();
    SimState s{config, WorldGrid(config.grid_width, config.grid_height), {}, {}, 0, Rng(config.seed)};

    const int n = config.n_per_group;
    s.civilians.reserve(static_cast<std::size_t>(2 * n));
    for (int id = 0; id < 2 * n; ++id) {
        Civilian c;
        c.id = id;
        c.group = id < n ? Group::g1 : Group::g2;
        c.pos = uniform_cell_in_region(s.grid, region_of(c.group), s.rng);
        s.civilians.push_back(c);
    }

    const int in_region1 = config.cops_in_region1();
    s.cops.reserve(static_cast<std::size_t>(config.n_cops));
    for (int id = 0; id < config.n_cops; ++id) {
        s.cops.push_back({id, uniform_cell_in_region(s.grid, id < in_region1 ? 1 : 2, s.rng)});
    }
    return s;
}

void step_civilians(SimState& state) {
    const WorldGrid& grid = state.grid;
    std::array<Cell, 8> options{};
    for (Civilian& c : state.civilians) {
        c.crime_flag = false;
        const int home = region_of(c.group);
        std::size_t count = 0;
        for (Cell h : kHeadings) {
            const Cell next{c.pos.x + h.x, c.pos.y + h.y};
            if (grid.contains(next) && grid.region(next) == home) options[count++] = next;
        }
        if (count > 0) c.pos = options[state.rng.uniform_index(count)];
    }
    for (Civilian& c : state.civilians) {
        c.crime_flag = state.rng.bernoulli(state.config.crime_rate);
    }
}

Cell stigma_move(const WorldGrid& grid, Cell from, Rng& rng) {
    std::array<Cell, 8> best{};
    std::size_t count = 0;
    double best_value = -1.0;
    for (Cell h : kHeadings) {
        const Cell next{from.x + h.x, from.y + h.y};
        if (!grid.contains(next)) continue;
        const double v = grid.stigma(next);
        if (v > best_value) {
            best_value = v;
            count = 0;
        }
        if (v == best_value) best[count++] = next;
    }
    if (count == 0) return from;
    return count == 1 ? best[0] : best[rng.uniform_index(count)];
}

Cell random_move(const WorldGrid& grid, Cell from, double long_move_prob, int long_len, Rng& rng) {
    const Cell h = kHeadings[rng.uniform_index(kHeadings.size())];
    const int len = rng.bernoulli(long_move_prob) ? long_len : 1;
    return {std::clamp(from.x + h.x * len, 0, grid.width() - 1),
            std::clamp(from.y + h.y * len, 0, grid.height() - 1)};
}

void step_cops(SimState& state) {
    const SimConfig& cfg = state.config;
    for (Cop& cop : state.cops) {
        const bool follow = state.rng.bernoulli(cfg.stigma_follow);
        if (follow) cop.pos = stigma_move(state.grid, cop.pos, state.rng);
        if (!follow || cfg.cop_rule == CopRule::sequential) {
            cop.pos = random_move(state.grid, cop.pos, cfg.long_move_prob, cfg.long_move_len, state.rng);
        }
    }
}

std::vector<ArrestPair> sweep_arrests(SimState& state) {
    std::vector<int> flagged;
    for (const Civilian& c : state.civilians) {
        if (c.crime_flag) flagged.push_back(c.id);
    }
    std::vector<ArrestPair> arrests;
    if (flagged.empty()) return arrests;

    for (const Cop& cop : state.cops) {
        for (int id : flagged) {
            Civilian& c = state.civilians[static_cast<std::size_t>(id)];
            if (!c.crime_flag || !within_moore(cop.pos, c.pos)) continue;
            if (state.rng.bernoulli(state.config.arrest_rate)) {
                arrests.push_back({cop.id, c.id});
                c.crime_flag = false;
            }
        }
    }
    return arrests;
}

void bump_stigma(WorldGrid& grid, Cell cell, double center, double neighbor) {
    grid.add_stigma(cell, center);
    for (Cell h : kHeadings) {
        const Cell next{cell.x + h.x, cell.y + h.y};
        if (grid.contains(next)) grid.add_stigma(next, neighbor);
    }
}

void advance_tick(SimState& state, EventLog& log) {
    state.tick += 1;
    step_civilians(state);
    step_cops(state);
    const std::vector<ArrestPair> arrests = sweep_arrests(state);
    const SimConfig& cfg = state.config;
    for (const ArrestPair& a : arrests) {
        Civilian& agent = state.civilians[static_cast<std::size_t>(a.civilian_id)];
        const Verdict v = adjudicate(agent, cfg.classifier, cfg.recidivism_rate, state.rng);
        bump_stigma(state.grid, agent.pos, cfg.stigma_bump_center, cfg.stigma_bump_neighbor);
        log.push_back({state.tick, agent.id, agent.group, agent.pos, v.judged_positive, v.recidivated});
    }
#ifndef NDEBUG
    for (const Civilian& c : state.civilians) {
        assert(state.grid.region(c.pos) == region_of(c.group));
    }
#endif
}

SimResult run_sim(const SimConfig& config, const TickObserver& observer) {
    SimResult result{{}, init_state(config)};
    while (result.final_state.tick < config.max_ticks) {
        advance_tick(result.final_state, result.events);
        if (observer) observer(result.final_state, result.events);
    }
    return result;
}

}  // namespace fairsim
