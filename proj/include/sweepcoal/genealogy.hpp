#pragma once
// A right-continuous partition-valued path: the ancestral-relationship
// process of an n-sample. Paths start at (0, singletons) and record one entry
// per effective merger; they either absorb into a single block or get cut off
// at a horizon.

#include <utility>
#include <vector>

#include "sweepcoal/partition.hpp"

namespace sweepcoal {

struct GenealogyPath {
  int n = 0;
  std::vector<std::pair<double, Partition>> transitions;
  bool absorbed = false;
  // absorption time, or the horizon the path was cut off at
  double end_time = 0.0;

  static GenealogyPath start(int n) {
    GenealogyPath path;
    path.n = n;
    path.transitions.emplace_back(0.0, Partition::singletons(n));
    path.absorbed = (n == 1);
    return path;
  }

  void record(double time, Partition state) {
    absorbed = state.is_single_block();
    end_time = time;
    transitions.emplace_back(time, std::move(state));
  }

  // State at time t (last transition with time <= t).
  const Partition& state_at(double t) const;

  const Partition& final_state() const { return transitions.back().second; }

  double absorption_time() const;  // throws std::logic_error if not absorbed

  // Throws std::logic_error unless times strictly increase, every entry
  // strictly coarsens its predecessor, and the first entry is (0, singletons).
  void check_valid() const;
};

}  // namespace sweepcoal
