#include "sweepcoal/genealogy.hpp"

#include <algorithm>
#include <stdexcept>

namespace sweepcoal {

const Partition& GenealogyPath::state_at(double t) const {
  if (transitions.empty()) throw std::logic_error("genealogy path: empty");
  auto it = std::upper_bound(
      transitions.begin(), transitions.end(), t,
      [](double v, const std::pair<double, Partition>& e) { return v < e.first; });
  if (it == transitions.begin())
    throw std::logic_error("genealogy path: time before start");
  return (it - 1)->second;
}

double GenealogyPath::absorption_time() const {
  if (!absorbed) throw std::logic_error("genealogy path: not absorbed");
  return transitions.back().first;
}

void GenealogyPath::check_valid() const {
  if (transitions.empty()) throw std::logic_error("genealogy path: empty");
  if (transitions.front().first != 0.0 ||
      !transitions.front().second.is_singletons())
    throw std::logic_error("genealogy path: must start at (0, singletons)");
  for (std::size_t i = 1; i < transitions.size(); ++i) {
    if (!(transitions[i - 1].first < transitions[i].first))
      throw std::logic_error("genealogy path: times must strictly increase");
    const Partition& prev = transitions[i - 1].second;
    const Partition& cur = transitions[i].second;
    if (cur.block_count() >= prev.block_count() || !prev.refines(cur))
      throw std::logic_error("genealogy path: entries must strictly coarsen");
  }
  if (absorbed != transitions.back().second.is_single_block())
    throw std::logic_error("genealogy path: absorbed flag inconsistent");
  if (end_time < transitions.back().first)
    throw std::logic_error("genealogy path: end time precedes last transition");
}

}  // namespace sweepcoal
