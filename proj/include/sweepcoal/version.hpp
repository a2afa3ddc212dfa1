#pragma once

namespace sweepcoal {
inline constexpr const char* kVersion = "0.1.0";
}
