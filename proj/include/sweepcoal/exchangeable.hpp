#pragma once
// Exchangeable random partitions driven by mass vectors.
//
// Two samplers live here: the generic paintbox (points fall into boxes with
// the given masses, leftovers are dust singletons) and the stick-breaking
// family-size construction used for sweep events. The stick construction
// breaks a unit stick at stages k = M..2; at stage k a biased coin (theta)
// decides whether a Beta(1, k-1) fraction of the remaining stick splits off
// as its own family. The unbroken remainder is a family too, so the masses
// always sum to one.
//
// For n <= 5 the law of the induced sample partition has a closed form in
// the joint power-sum moments of the mass vector; stick_breaking_partition_law
// computes those moments by an O(M) recursion over stages. This is the exact
// reference the samplers are tested against.

#include <vector>

#include "sweepcoal/partition.hpp"
#include "sweepcoal/partition_dist.hpp"
#include "sweepcoal/rng.hpp"

namespace sweepcoal {

// Ranked (non-increasing) sub-probability masses; the zero tail is implicit
// and 1 - sum is dust.
struct RankedMasses {
  std::vector<double> masses;

  double total() const;
  void validate() const;  // ranked, entries in [0,1], total <= 1 + 1e-9
};

struct StickBreaking {
  double theta = 0.0;  // per-stage family coin, in [0,1]
  long stages = 1;     // M >= 1; stage k in [2,M] may break off a family

  void validate() const;
};

// Paintbox partition: each of n points picks box j with probability masses[j]
// and dust with the leftover probability; dust points stay singletons.
Partition sample_paintbox(const RankedMasses& y, int n, Rng& rng);

// Exact paintbox law by enumeration over box assignments (test oracle).
// Requires n <= 5 and a small number of boxes.
PartitionDistribution paintbox_law_exact(const RankedMasses& y, int n);

// One stick-breaking mass vector, ranked. Stages whose coin came up zero
// contribute nothing and are skipped in O(1) via geometric gaps, so the cost
// is O(1 + theta*M) rather than O(M).
RankedMasses stick_breaking_masses(const StickBreaking& sb, Rng& rng);

// Same law as sample_paintbox(stick_breaking_masses(sb), n) without ever
// materializing the masses: points are assigned while the stick breaks.
Partition sample_stick_breaking_partition(const StickBreaking& sb, int n, Rng& rng);

// Joint power-sum moments E[m2], E[m3], E[m4], E[m5], E[m2^2], E[m2*m3]
// of the stick-breaking mass vector (m_q = sum of q-th powers of masses).
struct StickMoments {
  double e2 = 1, e3 = 1, e4 = 1, e5 = 1, e22 = 1, e23 = 1;
};

StickMoments stick_breaking_moments(const StickBreaking& sb);

// Exact n-sample partition law for a paintbox with the given joint moments
// (no dust: masses must sum to 1). n <= 5.
PartitionDistribution paintbox_law_from_moments(const StickMoments& m, int n);

// Convenience: exact law of sample_stick_breaking_partition.
PartitionDistribution stick_breaking_partition_law(const StickBreaking& sb, int n);

// Moments of a fixed mass vector (total must be 1); feeds the same EPPF
// formulas, used to cross-check them against brute-force enumeration.
StickMoments moments_of_fixed_masses(const RankedMasses& y);

}  // namespace sweepcoal
