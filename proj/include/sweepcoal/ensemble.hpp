#pragma once
// Replicate ensembles of genealogy summary statistics.
//
// The direct kernel evolves only the block-size multiset and drops mutations
// interval by interval, so a replicate costs O(n^2 + mutations) instead of
// building a full labeled genealogy. Each replicate owns a stream seeded by
// (master seed, stream tag, replicate index); results land in a vector slot
// fixed by the replicate index, so the serial and the OpenMP execution of the
// same configuration produce byte-identical output, regardless of thread
// count or scheduling.

#include <cstdint>
#include <vector>

#include "sweepcoal/lambda_measure.hpp"
#include "sweepcoal/rng.hpp"
#include "sweepcoal/stats.hpp"

namespace sweepcoal {

enum class ExecutionPolicy { serial, parallel };

struct EnsembleConfig {
  std::uint64_t master_seed = 1;
  std::uint64_t reps = 1;
  ExecutionPolicy policy = ExecutionPolicy::serial;
  int threads = 0;  // 0 = library default when parallel
};

// One replicate of summary statistics via the block-size kernel. Matches the
// law of simulate_lambda + overlay_mutations + sample_statistics, without the
// labeled path (and therefore without the same stream consumption).
SampleStats sample_statistics_direct(const LambdaMeasure& measure, int n,
                                     double theta, Rng& rng);

// Replicate i of the returned vector is computed from stream (master, i) in
// both policies.
std::vector<SampleStats> sample_stat_ensemble(const LambdaMeasure& measure, int n,
                                              double theta,
                                              const EnsembleConfig& config);

}  // namespace sweepcoal
