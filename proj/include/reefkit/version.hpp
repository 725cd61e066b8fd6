#pragma once

namespace reefkit {

inline constexpr const char* version = "0.1.0";

}  // namespace reefkit
