#include "sweepcoal/ensemble.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sweepcoal {

namespace {

constexpr std::uint64_t kStatsStreamTag = 0x7374617473ull;

SampleStats run_direct(const LambdaMeasure& measure, const FrequencySampler* freq,
                       double freq_mass, int n, double theta, Rng& rng) {
  SampleStats out;
  out.n = n;
  out.theta = theta;
  std::vector<int> sizes(std::size_t(n), 1);
  double pair_weighted = 0.0;
  std::vector<int> picks;
  while (sizes.size() >= 2) {
    const double b = double(sizes.size());
    const double pair_rate = measure.kingman_mass * 0.5 * b * (b - 1.0);
    const double total = pair_rate + freq_mass;
    if (total == 0.0)
      throw std::invalid_argument("sample_statistics_direct: measure drives no events");
    const double dt = rng.exponential(total);

    // Mutations over the standing interval: iid Poisson(theta/2 * dt) per
    // block is one Poisson(theta/2 * dt * b) total with uniform block marks.
    const double mean = 0.5 * theta * dt * b;
    if (mean > 0.0) {
      const long count = std::poisson_distribution<long>(mean)(rng);
      for (long c = 0; c < count; ++c) {
        const int m = sizes[rng.uniform_below(sizes.size())];
        ++out.s_n;
        if (m == 1)
          ++out.eta_e;
        else
          ++out.eta_i;
        pair_weighted += double(m) * double(n - m);
      }
    }
    int singles = 0;
    for (int m : sizes) singles += (m == 1);
    out.external_length += dt * singles;
    out.internal_length += dt * (sizes.size() - singles);

    if (rng.uniform01() * total < pair_rate) {
      const std::size_t bi = sizes.size();
      std::size_t i = rng.uniform_below(bi);
      std::size_t j = rng.uniform_below(bi - 1);
      if (j >= i) ++j;
      if (j < i) std::swap(i, j);
      sizes[i] += sizes[j];
      sizes.erase(sizes.begin() + std::ptrdiff_t(j));
    } else {
      const double y = freq->sample(rng);
      picks.clear();
      for (std::size_t i = 0; i < sizes.size(); ++i)
        if (rng.bernoulli(y)) picks.push_back(int(i));
      if (picks.size() >= 2) {
        for (std::size_t c = 1; c < picks.size(); ++c)
          sizes[picks[0]] += sizes[picks[c]];
        for (std::size_t c = picks.size(); c-- > 1;)
          sizes.erase(sizes.begin() + picks[c]);
      }
    }
  }
  if (n >= 2) out.delta_n = pair_weighted / (0.5 * double(n) * double(n - 1));
  return out;
}

}  // namespace

SampleStats sample_statistics_direct(const LambdaMeasure& measure, int n,
                                     double theta, Rng& rng) {
  measure.validate();
  if (n < 1)
    throw std::invalid_argument("sample_statistics_direct: n must be >= 1");
  if (!(theta >= 0.0))
    throw std::invalid_argument("sample_statistics_direct: theta must be >= 0");
  const double freq_mass = measure.frequency_mass();
  if (std::isinf(freq_mass))
    throw std::invalid_argument(
        "sample_statistics_direct: frequency view has infinite mass");
  std::optional<FrequencySampler> freq;
  if (freq_mass > 0.0) freq.emplace(measure);
  return run_direct(measure, freq ? &*freq : nullptr, freq_mass, n, theta, rng);
}

std::vector<SampleStats> sample_stat_ensemble(const LambdaMeasure& measure, int n,
                                              double theta,
                                              const EnsembleConfig& config) {
  measure.validate();
  if (n < 1)
    throw std::invalid_argument("sample_stat_ensemble: n must be >= 1");
  if (!(theta >= 0.0))
    throw std::invalid_argument("sample_stat_ensemble: theta must be >= 0");
  if (config.reps == 0)
    throw std::invalid_argument("sample_stat_ensemble: reps must be >= 1");
  const double freq_mass = measure.frequency_mass();
  if (std::isinf(freq_mass))
    throw std::invalid_argument(
        "sample_stat_ensemble: frequency view has infinite mass");
  std::optional<FrequencySampler> freq;
  if (freq_mass > 0.0) freq.emplace(measure);
  const FrequencySampler* fp = freq ? &*freq : nullptr;

  std::vector<SampleStats> out(config.reps);
#ifdef _OPENMP
  if (config.policy == ExecutionPolicy::parallel) {
    const int threads =
        config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(config.reps); ++i) {
      Rng rng(config.master_seed, kStatsStreamTag, std::uint64_t(i));
      out[std::size_t(i)] = run_direct(measure, fp, freq_mass, n, theta, rng);
    }
    return out;
  }
#endif
  for (std::uint64_t i = 0; i < config.reps; ++i) {
    Rng rng(config.master_seed, kStatsStreamTag, i);
    out[i] = run_direct(measure, fp, freq_mass, n, theta, rng);
  }
  return out;
}

}  // namespace sweepcoal
