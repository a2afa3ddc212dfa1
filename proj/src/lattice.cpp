#include "sweepcoal/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sweepcoal {

PartitionLattice::PartitionLattice(const LambdaMeasure& measure, int n) : n_(n) {
  if (n < 2 || n > 5)
    throw std::invalid_argument("partition lattice: n must lie in [2,5]");
  measure.validate();
  states_ = enumerate_partitions(n);
  for (int i = 0; i < int(states_.size()); ++i) index_[states_[i]] = i;

  const int count = int(states_.size());
  rate_.assign(count, std::vector<double>(count, 0.0));
  exit_.assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    const auto blocks = states_[i].blocks();
    const int b = int(blocks.size());
    if (b < 2) continue;
    // every way of merging k >= 2 of the b blocks, at the (b,k) rate
    for (unsigned mask = 0; mask < (1u << b); ++mask) {
      const int k = __builtin_popcount(mask);
      if (k < 2) continue;
      std::vector<std::vector<int>> merged;
      std::vector<int> big;
      for (int j = 0; j < b; ++j) {
        if (mask & (1u << j))
          big.insert(big.end(), blocks[j].begin(), blocks[j].end());
        else
          merged.push_back(blocks[j]);
      }
      merged.push_back(std::move(big));
      const int target = index_.at(Partition::from_blocks(n, merged));
      const double r = lambda_rate(measure, b, k);
      rate_[i][target] += r;
      exit_[i] += r;
    }
  }
}

PartitionDistribution PartitionLattice::law_at(double t) const {
  if (t < 0.0) throw std::invalid_argument("partition lattice: t >= 0");
  const int count = int(states_.size());
  const double big = *std::max_element(exit_.begin(), exit_.end());

  std::vector<double> law(count, 0.0);
  std::vector<double> v(count, 0.0);
  v[index_.at(Partition::singletons(n_))] = 1.0;

  if (big == 0.0 || t == 0.0) {
    law = v;
  } else {
    // uniformization: law = sum_m Poisson(big*t)(m) * v P^m
    double weight = std::exp(-big * t);
    double covered = weight;
    for (int i = 0; i < count; ++i) law[i] += weight * v[i];
    std::vector<double> next(count, 0.0);
    for (int m = 1; covered < 1.0 - 1e-13 && m < 2000000; ++m) {
      std::fill(next.begin(), next.end(), 0.0);
      for (int i = 0; i < count; ++i) {
        if (v[i] == 0.0) continue;
        next[i] += v[i] * (1.0 - exit_[i] / big);
        for (int j = 0; j < count; ++j)
          if (rate_[i][j] != 0.0) next[j] += v[i] * rate_[i][j] / big;
      }
      v.swap(next);
      weight *= big * t / m;
      covered += weight;
      for (int i = 0; i < count; ++i) law[i] += weight * v[i];
    }
    // fold the truncated tail onto the current vector so mass sums to one
    const double tail = 1.0 - covered;
    if (tail > 0.0)
      for (int i = 0; i < count; ++i) law[i] += tail * v[i];
  }

  PartitionDistribution dist;
  dist.n = n_;
  for (int i = 0; i < count; ++i)
    if (law[i] > 0.0) dist.weights[states_[i]] = law[i];
  dist.validate();
  return dist;
}

double PartitionLattice::mean_absorption_time() const {
  const int count = int(states_.size());
  // transitions strictly coarsen, so solve by decreasing block count
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return states_[a].block_count() < states_[b].block_count();
  });
  std::vector<double> mean(count, 0.0);
  for (int i : order) {
    if (exit_[i] == 0.0) continue;  // absorbing
    double acc = 1.0;
    for (int j = 0; j < count; ++j)
      if (rate_[i][j] != 0.0) acc += rate_[i][j] * mean[j];
    mean[i] = acc / exit_[i];
  }
  return mean[index_.at(Partition::singletons(n_))];
}

}  // namespace sweepcoal
