#pragma once

namespace fairsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairsim
