#include "sweepcoal/lambda_sim.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace sweepcoal {

namespace {

using Blocks = std::vector<std::vector<int>>;

Blocks singleton_blocks(int n) {
  Blocks blocks(n);
  for (int i = 0; i < n; ++i) blocks[i] = {i + 1};
  return blocks;
}

// merge the listed block indices (ascending) into the first one; least-
// element ordering of the block list survives because the head block keeps
// its slot and its minimum
void merge_into_first(Blocks& blocks, const std::vector<int>& picks) {
  auto& head = blocks[picks.front()];
  for (std::size_t i = 1; i < picks.size(); ++i) {
    auto& donor = blocks[picks[i]];
    head.insert(head.end(), donor.begin(), donor.end());
  }
  for (std::size_t i = picks.size(); i-- > 1;)
    blocks.erase(blocks.begin() + picks[i]);
}

}  // namespace

GenealogyPath simulate_lambda(const LambdaMeasure& measure, int n, double horizon,
                              Rng& rng, LambdaDiagnostics* diag) {
  measure.validate();
  if (n < 1) throw std::invalid_argument("simulate_lambda: n >= 1");
  const double freq_mass = measure.frequency_mass();
  if (std::isinf(freq_mass))
    throw std::invalid_argument(
        "simulate_lambda: frequency view has infinite mass");
  std::optional<FrequencySampler> freq;
  if (freq_mass > 0.0) freq.emplace(measure);

  if (diag) {
    *diag = {};
    diag->merge_size_counts.assign(n + 1, 0);
  }
  GenealogyPath path = GenealogyPath::start(n);
  Blocks blocks = singleton_blocks(n);
  double t = 0.0;
  std::vector<int> picks;
  while (blocks.size() >= 2) {
    const double b = double(blocks.size());
    const double pair_rate = measure.kingman_mass * 0.5 * b * (b - 1.0);
    const double total = pair_rate + freq_mass;
    if (total == 0.0) {
      if (std::isinf(horizon))
        throw std::invalid_argument("simulate_lambda: measure drives no events");
      path.end_time = horizon;
      break;
    }
    t += rng.exponential(total);
    if (t > horizon) {
      path.end_time = horizon;
      break;
    }
    if (rng.uniform01() * total < pair_rate) {
      // uniform unordered pair of block indices
      const int bi = int(blocks.size());
      int i = int(rng.uniform_below(std::uint64_t(bi)));
      int j = int(rng.uniform_below(std::uint64_t(bi - 1)));
      if (j >= i) ++j;
      picks = {std::min(i, j), std::max(i, j)};
      merge_into_first(blocks, picks);
      if (diag) {
        ++diag->pairwise_events;
        ++diag->effective_events;
        ++diag->merge_size_counts[2];
      }
      path.record(t, Partition::from_blocks(n, blocks));
    } else {
      const double y = freq->sample(rng);
      picks.clear();
      for (int i = 0; i < int(blocks.size()); ++i)
        if (rng.bernoulli(y)) picks.push_back(i);
      if (diag) ++diag->frequency_events;
      if (picks.size() >= 2) {
        merge_into_first(blocks, picks);
        if (diag) {
          ++diag->effective_events;
          ++diag->merge_size_counts[picks.size()];
        }
        path.record(t, Partition::from_blocks(n, blocks));
      }
    }
  }
  return path;
}

CoupledPaths coupled_kingman_lambda(const LambdaMeasure& measure, int n, Rng& rng) {
  measure.validate();
  if (measure.kingman_mass != 1.0)
    throw std::invalid_argument(
        "coupled sampler: needs unit pairwise mass (coupling is defined for "
        "kingman_mass == 1)");
  if (n < 2) throw std::invalid_argument("coupled sampler: n >= 2");
  const double freq_mass = measure.frequency_mass();
  if (std::isinf(freq_mass))
    throw std::invalid_argument("coupled sampler: frequency view has infinite mass");
  std::optional<FrequencySampler> freq;
  if (freq_mass > 0.0) freq.emplace(measure);

  CoupledPaths out;
  out.lambda_path = GenealogyPath::start(n);
  out.kingman_path = GenealogyPath::start(n);
  out.identical = true;
  Blocks lam = singleton_blocks(n), king = singleton_blocks(n);
  Partition lam_state = Partition::singletons(n);
  Partition king_state = lam_state;

  // block-index-pair points arrive at rate 1 each whether or not they act; a
  // point (i,j) merges blocks i and j in every path that still has j blocks
  const double pair_rate = 0.5 * n * (n - 1.0);
  const double total = pair_rate + freq_mass;
  double t = 0.0;
  std::vector<int> picks;
  while (lam.size() > 1 || king.size() > 1) {
    t += rng.exponential(total);
    if (rng.uniform01() * total < pair_rate) {
      int i = int(rng.uniform_below(std::uint64_t(n)));
      int j = int(rng.uniform_below(std::uint64_t(n - 1)));
      if (j >= i) ++j;
      if (j < i) std::swap(i, j);
      picks = {i, j};
      if (j < int(lam.size())) {
        merge_into_first(lam, picks);
        lam_state = Partition::from_blocks(n, lam);
        out.lambda_path.record(t, lam_state);
      }
      if (j < int(king.size())) {
        merge_into_first(king, picks);
        king_state = Partition::from_blocks(n, king);
        out.kingman_path.record(t, king_state);
      }
    } else {
      const double y = freq->sample(rng);
      picks.clear();
      for (int i = 0; i < int(lam.size()); ++i)
        if (rng.bernoulli(y)) picks.push_back(i);
      if (picks.size() >= 2) {
        merge_into_first(lam, picks);
        lam_state = Partition::from_blocks(n, lam);
        out.lambda_path.record(t, lam_state);
      }
    }
    if (out.identical && !(lam_state == king_state)) out.identical = false;
  }
  return out;
}

}  // namespace sweepcoal
