#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fairsim {

// Seeded stream for one simulation run. The engine is std::mt19937_64, whose
// output sequence is fixed by the standard; the std distributions are not, so
// every draw used by the model is reduced here to keep runs bit-identical
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // p <= 0 never fires, p >= 1 always fires; one draw is consumed either way.
    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Child seed for a position in a job tree, e.g. (theta index, q0 index, replicate).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t part : path) {
        h = mix64(h ^ mix64(part + 0x632be59bd9b4e019ULL));
    }
    return h;
}

}  // namespace fairsim
