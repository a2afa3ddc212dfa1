#include "sweepcoal/xi_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sweepcoal/exchangeable.hpp"

namespace sweepcoal {

XiSweepMeasure::XiSweepMeasure(SweepSpec spec, double twoN)
    : spec_(std::move(spec)), twoN_(twoN) {
  spec_.validate();
  if (!(twoN >= 2.0))
    throw std::invalid_argument("sweep measure: population parameter must be >= 2");
  const double log_two_n = std::log(twoN);
  for (std::size_t i = 0; i < spec_.sites.size(); ++i) {
    const auto& s = spec_.sites[i];
    Site site;
    site.rate = s.rate;
    site.advantage = s.advantage;
    site.stages = long(std::floor(twoN * s.advantage));
    if (site.stages < 1)
      throw std::invalid_argument(
          "sweep measure: degenerate mark at sites[" + std::to_string(i) +
          "]: floor(2N * advantage) < 1");
    site.theta = spec_.recomb_at(s.position) / (s.advantage * log_two_n);
    if (site.theta > 1.0)
      throw std::invalid_argument(
          "sweep measure: sites[" + std::to_string(i) +
          "] head probability r/(s log 2N) exceeds 1; increase 2N");
    sites_.push_back(site);
    total_rate_ += s.rate;
    cum_.push_back(total_rate_);
  }
}

int XiSweepMeasure::sample_site(Rng& rng) const {
  if (sites_.size() == 1) return 0;
  const double u = rng.uniform01() * total_rate_;
  std::size_t i = std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin();
  if (i >= sites_.size()) i = sites_.size() - 1;
  return int(i);
}

GenealogyPath simulate_xi_sweep(const XiSweepMeasure& measure, int n, double horizon,
                                Rng& rng, XiDiagnostics* diag) {
  if (n < 1) throw std::invalid_argument("simulate_xi_sweep: n >= 1");
  if (diag) {
    *diag = {};
    diag->family_size_counts.assign(n + 1, 0);
  }
  GenealogyPath path = GenealogyPath::start(n);
  Partition state = Partition::singletons(n);
  double t = 0.0;
  while (state.block_count() >= 2) {
    const double b = double(state.block_count());
    const double pair_rate = 0.5 * b * (b - 1.0);
    const double total = pair_rate + measure.proposal_rate();
    t += rng.exponential(total);
    if (t > horizon) {
      path.end_time = horizon;
      break;
    }
    if (rng.uniform01() * total < pair_rate) {
      const int bi = state.block_count();
      int i = int(rng.uniform_below(std::uint64_t(bi)));
      int j = int(rng.uniform_below(std::uint64_t(bi - 1)));
      if (j >= i) ++j;
      std::vector<int> labels(bi);
      for (int m = 0; m < bi; ++m) labels[m] = m;
      labels[std::max(i, j)] = std::min(i, j);
      state = coagulate(state, Partition::from_labels(labels));
      if (diag) ++diag->pairwise_events;
      path.record(t, state);
    } else {
      const auto& site = measure.sites()[measure.sample_site(rng)];
      if (diag) ++diag->proposals;
      if (!rng.bernoulli(site.advantage)) continue;
      if (diag) ++diag->accepted;
      const Partition grouping = sample_stick_breaking_partition(
          StickBreaking{site.theta, site.stages}, state.block_count(), rng);
      if (grouping.block_count() == state.block_count()) continue;  // all singletons
      if (diag) {
        ++diag->effective;
        for (int size : grouping.block_sizes())
          if (size >= 2) ++diag->family_size_counts[size];
      }
      state = coagulate(state, grouping);
      path.record(t, state);
    }
  }
  return path;
}

}  // namespace sweepcoal
