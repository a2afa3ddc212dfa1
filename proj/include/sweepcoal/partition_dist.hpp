#pragma once
// Probability distributions over partitions of a fixed {1..n}, plus the
// two-coin single-family law and total-variation utilities.

#include <map>
#include <vector>

#include "sweepcoal/partition.hpp"
#include "sweepcoal/rng.hpp"

namespace sweepcoal {

struct PartitionDistribution {
  int n = 0;
  std::map<Partition, double> weights;

  // Throws unless every weight is >= 0 on a partition of {1..n} and the
  // total is 1 within 1e-12.
  void validate() const;

  double prob(const Partition& pi) const {
    auto it = weights.find(pi);
    return it == weights.end() ? 0.0 : it->second;
  }
};

// Half L1 distance over the union of supports. Sizes must match.
double tv_distance(const PartitionDistribution& a, const PartitionDistribution& b);

PartitionDistribution empirical_distribution(int n, const std::vector<Partition>& samples);

// Counts keyed by partition; convenient for streaming tallies.
struct PartitionCounter {
  int n = 0;
  long total = 0;
  std::map<Partition, long> counts;

  explicit PartitionCounter(int n_) : n(n_) {}
  void add(const Partition& pi, long k = 1) {
    counts[pi] += k;
    total += k;
  }
  void merge(const PartitionCounter& other);
  PartitionDistribution distribution() const;
};

// One round of coin flips at heads-probability p: all heads fall into one
// family, tails stay singletons. (A lone head is indistinguishable from a
// tail in the resulting partition.)
Partition sample_two_coin(double p, int n, Rng& rng);

// Exact law of sample_two_coin; enumeration over head subsets, n <= 16.
PartitionDistribution two_coin_law(double p, int n);

// Bootstrap standard error of the TV distance between an empirical counter
// and a fixed reference law (multinomial resampling of the counts).
double tv_bootstrap_se(const PartitionCounter& counts, const PartitionDistribution& ref,
                       int boot_reps, Rng& rng);

}  // namespace sweepcoal
