#pragma once
// Exact finite-time laws of merger processes on the full partition lattice of
// a small sample (n <= 5, at most 52 states). The generator merges any k of
// the b current blocks at the measure's (b,k) rate; laws are evaluated by
// uniformization to absolute tolerance 1e-12.

#include <map>
#include <vector>

#include "sweepcoal/lambda_measure.hpp"
#include "sweepcoal/partition.hpp"
#include "sweepcoal/partition_dist.hpp"

namespace sweepcoal {

class PartitionLattice {
 public:
  PartitionLattice(const LambdaMeasure& measure, int n);  // n in [2,5]

  int n() const { return n_; }
  const std::vector<Partition>& states() const { return states_; }

  // Law of the state at time t started from singletons.
  PartitionDistribution law_at(double t) const;

  // Mean time until the single-block state, started from singletons
  // (first-step linear system, solved by block-count layers).
  double mean_absorption_time() const;

 private:
  int n_;
  std::vector<Partition> states_;
  std::map<Partition, int> index_;
  std::vector<std::vector<double>> rate_;  // rate_[i][j], i != j
  std::vector<double> exit_;               // total exit rate per state
};

}  // namespace sweepcoal
