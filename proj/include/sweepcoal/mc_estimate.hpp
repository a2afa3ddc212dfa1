#pragma once

#include <cstdint>

namespace sweepcoal {

struct MonteCarloEstimate {
  double value = 0.0;
  double se = 0.0;
  std::uint64_t reps = 0;
};

}  // namespace sweepcoal
