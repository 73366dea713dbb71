#pragma once

#include <string_view>

namespace compminer {

inline constexpr std::string_view kToolName = "composite-miner";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace compminer
