#pragma once

namespace sqtile {
inline constexpr const char* kVersion = "0.1.0";
}
