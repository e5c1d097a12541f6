#pragma once

#include <cstdint>
#include <string_view>

namespace fairsim {

enum class Group : std::uint8_t { g1 = 1, g2 = 2 };

constexpr std::string_view to_string(Group g) { return g == Group::g1 ? "G1" : "G2"; }
constexpr int region_of(Group g) { return static_cast<int>(g); }

struct Cell {
    int x = 0;
    int y = 0;

    bool operator==(const Cell&) const = default;
};

// Chebyshev distance <= 1: the cell itself or one of its 8 Moore neighbours.
constexpr bool within_moore(Cell a, Cell b) {
    const int dx = a.x - b.x;
    const int dy = a.y - b.y;
    return dx >= -1 && dx <= 1 && dy >= -1 && dy <= 1;
}

struct Civilian {
    int id = 0;
    Group group = Group::g1;
    Cell pos{};
    bool crime_flag = false;
    int arrest_count = 0;
    bool ever_positive_j = false;
    bool ever_recidivist = false;
};

struct Cop {
    int id = 0;
    Cell pos{};
};

}  // namespace fairsim
