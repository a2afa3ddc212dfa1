#pragma once
// Population simulation over a finite time window with sweeps recurring at
// atomic genomic positions, and extraction of the sampled neutral-site
// ancestry at requested look-back times.
//
// Times facing the caller are on the rescaled clock (population time divided
// by N = twoN/2); the window reaches far enough past the oldest requested
// time that a sweep in progress at the window edge is overwhelmingly likely
// to have finished before the observations start.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweepcoal/partition.hpp"
#include "sweepcoal/rng.hpp"
#include "sweepcoal/sweep_spec.hpp"

namespace sweepcoal {

// Thrown when a run would exceed a hard memory budget; carries advice.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AncestralSnapshot {
  std::vector<double> times;       // rescaled look-back times, ascending
  std::vector<Partition> partitions;  // sample partition at each time
  // a sweep was in progress at the oldest requested time, where the
  // sweep-free window-start assumption could still be felt
  bool sweep_at_horizon = false;
};

// Event tallies for one simulate call (reset at entry).
struct RecurrentDiagnostics {
  std::uint64_t sweeps_started = 0;
  std::uint64_t sweeps_fixed = 0;
  std::uint64_t events_logged = 0;
};

// Simulate on [-(N*max(times) + 10*log(twoN)), 0] in raw population time:
// sweep proposals arrive at rate total-atom-rate/N, proposals during an
// active sweep are dropped, active sweeps run the single-sweep dynamics with
// recombination probability r(x)/log(twoN), and the population evolves
// neutrally in between. Samples n chromosomes at time 0 and returns their
// ancestry partition at each requested time.
//
// Guards: twoN in [2, 4000], times ascending in (0, 5], recombination map
// bounded by log(twoN) at every atom. Throws resource_error when the event
// log would exceed the memory budget.
AncestralSnapshot simulate_recurrent(const SweepSpec& spec, long twoN, int n,
                                     const std::vector<double>& times, Rng& rng,
                                     RecurrentDiagnostics* diag = nullptr);

}  // namespace sweepcoal
