#pragma once
// Forward simulation of one selective sweep in a finite two-allele
// population, with backward tracing of the sampled neutral-site lineages.
//
// The population holds `twoN` chromosomes. Replacement proposals arrive at
// total rate twoN; each names a uniform dying chromosome and a uniform
// selected-site parent (self allowed). A proposal is rejected with
// probability s exactly when it would replace a favored carrier by an
// unfavored one; on acceptance the child takes the parent's selected-site
// allele, and its neutral-site parent is the same chromosome unless an
// independent recombination coin (probability r) redirects it to a fresh
// uniform draw. The sweep starts from a single favored copy and runs until
// the favored count hits 0 or twoN; the sampled lineages are then traced
// back through the replacement log to their ancestors at time zero.

#include <cstdint>

#include "sweepcoal/mc_estimate.hpp"
#include "sweepcoal/partition.hpp"
#include "sweepcoal/rng.hpp"

namespace sweepcoal {

struct SweepParams {
  long twoN = 2;   // chromosomes, >= 2
  double s = 0.5;  // selective advantage, in (0,1)
  double r = 0.0;  // per-birth recombination probability, in [0,1]
  int n = 1;       // sample size at the end of the sweep, 1 <= n <= twoN

  void validate() const;  // throws std::invalid_argument naming the field
};

struct SweepOutcome {
  bool fixed = false;  // favored allele reached twoN (vs lost at 0)
  double tau = 0.0;    // absorption time, population-time units
  Partition theta;     // sampled lineages grouped by ancestor at time 0
};

// Event tallies for one simulate call (reset at entry).
struct SweepDiagnostics {
  std::uint64_t proposals = 0;  // includes rejected ones
  std::uint64_t accepted = 0;
  std::uint64_t ups = 0, downs = 0;  // favored-count jumps (for the 1/(2-s) law)
};

SweepOutcome simulate_single_sweep(const SweepParams& params, Rng& rng,
                                   SweepDiagnostics* diag = nullptr);

// Probability that a +/-1 random walk with down-step thinning s (favored-
// count walk of the sweep) started at k hits j before i. Exact and stable:
// expm1((k-i) log1p(-s)) / expm1((j-i) log1p(-s)).
double hitting_probability(long i, long j, long k, double s);

// Mean sweep duration over unconditioned runs (fixed and lost together).
MonteCarloEstimate sweep_duration_mean(const SweepParams& params, std::uint64_t reps,
                                       Rng& rng);

// Frequency of the joint event {lost, sample not all-singletons}: how often
// a failed sweep still leaves a trace in the sample's ancestry.
MonteCarloEstimate prob_coalescence_given_loss(const SweepParams& params,
                                               std::uint64_t reps, Rng& rng);

}  // namespace sweepcoal
