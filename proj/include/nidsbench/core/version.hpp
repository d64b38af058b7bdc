#pragma once
#include <string_view>

namespace nidsbench {
inline constexpr std::string_view kToolkitVersion = "nidsbench 1.0.0";
} // namespace nidsbench
