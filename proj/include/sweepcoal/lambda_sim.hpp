#pragma once
// Trajectory samplers for merger processes with a pairwise part plus a finite
// family-frequency part: the plain sampler, and a coupled pair sharing the
// pairwise event stream with a pure-pairwise reference path.
//
// Events that would merge fewer than two blocks change nothing; they are
// dropped from the path but tallied in the diagnostics so event-rate checks
// still see them.

#include <cstdint>
#include <limits>
#include <vector>

#include "sweepcoal/genealogy.hpp"
#include "sweepcoal/lambda_measure.hpp"
#include "sweepcoal/rng.hpp"

namespace sweepcoal {

// Event tallies for one simulate call (reset at entry).
struct LambdaDiagnostics {
  std::uint64_t pairwise_events = 0;   // pairwise merges applied
  std::uint64_t frequency_events = 0;  // frequency-stream arrivals
  std::uint64_t effective_events = 0;  // arrivals that merged >= 2 blocks
  // count of effective events by number of blocks merged (index k, size n+1)
  std::vector<std::uint64_t> merge_size_counts;
};

inline constexpr double kNoHorizon = std::numeric_limits<double>::infinity();

// Simulate from singletons until absorption or `horizon`, whichever is first.
// Pairwise merges at rate kingman_mass per block pair; frequency events as a
// Poisson stream at the frequency-view total mass, each drawing a frequency y
// and merging every block whose y-coin lands heads. Requires finite
// frequency mass (throws std::invalid_argument otherwise).
GenealogyPath simulate_lambda(const LambdaMeasure& measure, int n, double horizon,
                              Rng& rng, LambdaDiagnostics* diag = nullptr);

struct CoupledPaths {
  GenealogyPath lambda_path;
  GenealogyPath kingman_path;
  bool identical = false;  // agreed at every time until both absorbed
};

// Drive both paths from one Poisson stream of block-index pairs (rate 1 per
// pair), with frequency events acting on the first path only. Requires
// kingman_mass == 1 (throws std::invalid_argument otherwise).
CoupledPaths coupled_kingman_lambda(const LambdaMeasure& measure, int n, Rng& rng);

}  // namespace sweepcoal
