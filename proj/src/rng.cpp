#include "fairsim/rng.hpp"

#include <limits>

namespace fairsim {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::size_t Rng::uniform_index(std::size_t n) {
    // Lemire's multiply-shift with rejection of the biased low zone.
    const auto range = static_cast<std::uint64_t>(n);
    std::uint64_t x = engine_();
    u128 m = static_cast<u128>(x) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (std::numeric_limits<std::uint64_t>::max() - range + 1) % range;
        while (low < threshold) {
            x = engine_();
            m = static_cast<u128>(x) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

}  // namespace fairsim
