#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fairsim/config.hpp"
#include "fairsim/justice.hpp"
#include "fairsim/rng.hpp"
#include "fairsim/types.hpp"

namespace fairsim {

// Bounded width x height lattice split vertically into two regions:
// region 1 is x < width/2, region 2 the rest. Each cell carries a
// non-negative stigma value that only ever grows.
class WorldGrid {
public:
    WorldGrid(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }

    bool contains(Cell c) const { return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_; }
    int region(Cell c) const { return c.x < width_ / 2 ? 1 : 2; }

    double stigma(Cell c) const { return stigma_[index(c)]; }
    void add_stigma(Cell c, double amount) { stigma_[index(c)] += amount; }

    // Row-major (y * width + x) view of the stigma field.
    std::span<const double> stigma_field() const { return stigma_; }

private:
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }

    int width_;
    int height_;
    std::vector<double> stigma_;
};

struct SimState {
    SimConfig config;
    WorldGrid grid;
    std::vector<Civilian> civilians;  // G1 ids first, then G2; index == id
    std::vector<Cop> cops;            // index == id
    int tick = 0;
    Rng rng;
};

struct ArrestPair {
    int cop_id = 0;
    int civilian_id = 0;
};

// Civilians uniform in their own region, round(q0 * n_cops) cops uniform in
// region 1 and the rest in region 2, zero stigma, tick 0. Throws ConfigError.
SimState init_state(const SimConfig& config);

// Each civilian moves to a uniformly chosen Moore neighbour that lies inside
// the grid and inside its own region, then commits a crime with probability c0.
void step_civilians(SimState& state);

// Each cop, in id order, takes the stigma move and/or the random move
// according to config.cop_rule.
void step_cops(SimState& state);

// Stigma move: step to the in-grid Moore neighbour with the largest stigma,
// ties broken uniformly.
Cell stigma_move(const WorldGrid& grid, Cell from, Rng& rng);

// Random move: one of 8 headings uniformly; with probability omega go
// `long_len` cells, otherwise one. Each coordinate is clamped to the grid.
Cell random_move(const WorldGrid& grid, Cell from, double long_move_prob, int long_len, Rng& rng);

// For each cop (id order) and each crime-flagged civilian in the cop's cell or
// Moore neighbourhood (id order), arrest with probability r_a. A civilian is
// arrested at most once per tick; its crime flag is consumed.
std::vector<ArrestPair> sweep_arrests(SimState& state);

// Adds `center` at `cell` and `neighbor` at each in-grid Moore neighbour.
void bump_stigma(WorldGrid& grid, Cell cell, double center, double neighbor);

// One full iteration: tick += 1, civilians, cops, arrests, then for each
// arrest in order adjudicate, bump stigma and append to `log`.
void advance_tick(SimState& state, EventLog& log);

struct SimResult {
    EventLog events;
    SimState final_state;
};

// Called after every tick with the state and the cumulative log.
using TickObserver = std::function<void(const SimState&, const EventLog&)>;

SimResult run_sim(const SimConfig& config, const TickObserver& observer = {});

}  // namespace fairsim
