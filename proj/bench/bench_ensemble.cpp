// Wall-time comparison of the three ways to draw summary-statistic
// replicates: the labeled reference pipeline (full genealogy path plus
// mutation overlay), the block-size kernel run serially, and the same kernel
// under OpenMP. The serial and parallel kernel outputs must be identical
// replicate by replicate; the reference pipeline samples the same law from
// independent streams, so only its mean is comparable.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "sweepcoal/ensemble.hpp"
#include "sweepcoal/lambda_measure.hpp"
#include "sweepcoal/lambda_sim.hpp"
#include "sweepcoal/rng.hpp"
#include "sweepcoal/stats.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double mean_s(const std::vector<sweepcoal::SampleStats>& stats) {
  double sum = 0.0;
  for (const auto& s : stats) sum += double(s.s_n);
  return stats.empty() ? 0.0 : sum / double(stats.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark the summary-statistic replicate kernels"};
  int n = 50;
  double theta = 1.0;
  std::uint64_t reps = 20000;
  int threads = 0;
  std::uint64_t seed = 1;
  double atom_x = 0.5, atom_w = 0.8;
  app.add_option("--n", n, "sample size")->check(CLI::Range(2, 100000));
  app.add_option("--theta", theta, "mutation rate")->check(CLI::NonNegativeNumber);
  app.add_option("--reps", reps, "replicates per run");
  app.add_option("--threads", threads, "OpenMP threads (0 = library default)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--atom-x", atom_x, "family frequency of the sweep atom");
  app.add_option("--atom-w", atom_w, "weight of the sweep atom (0 disables)");
  CLI11_PARSE(app, argc, argv);

  sweepcoal::LambdaMeasure measure = sweepcoal::LambdaMeasure::kingman();
  if (atom_w > 0.0) measure.atoms.push_back({atom_x, atom_w});
  measure.validate();

  std::printf("measure: pairwise + atom(%g, %g), n=%d, theta=%g, reps=%llu\n",
              atom_x, atom_w, n, theta, static_cast<unsigned long long>(reps));

  // Labeled reference pipeline (the implementation the tests trust).
  double ref_mean = 0.0;
  double ref_time = 0.0;
  {
    const auto start = std::chrono::steady_clock::now();
    double sum = 0.0;
    for (std::uint64_t i = 0; i < reps; ++i) {
      sweepcoal::Rng rng(seed, 90, i);
      const auto path =
          sweepcoal::simulate_lambda(measure, n, sweepcoal::kNoHorizon, rng);
      const auto stats =
          sweepcoal::sample_statistics(sweepcoal::overlay_mutations(path, theta, rng));
      sum += double(stats.s_n);
    }
    ref_time = seconds_since(start);
    ref_mean = sum / double(reps);
    std::printf("reference pipeline (labeled): %8.3f s  %10.0f reps/s\n", ref_time,
                double(reps) / ref_time);
  }

  sweepcoal::EnsembleConfig config;
  config.master_seed = seed;
  config.reps = reps;

  config.policy = sweepcoal::ExecutionPolicy::serial;
  const auto serial_start = std::chrono::steady_clock::now();
  const auto serial = sweepcoal::sample_stat_ensemble(measure, n, theta, config);
  const double serial_time = seconds_since(serial_start);
  std::printf("block-size kernel, serial:    %8.3f s  %10.0f reps/s  (%.1fx the "
              "reference)\n",
              serial_time, double(reps) / serial_time, ref_time / serial_time);

  config.policy = sweepcoal::ExecutionPolicy::parallel;
  config.threads = threads;
#ifdef _OPENMP
  const int used = threads > 0 ? threads : omp_get_max_threads();
#else
  const int used = 1;
#endif
  const auto parallel_start = std::chrono::steady_clock::now();
  const auto parallel = sweepcoal::sample_stat_ensemble(measure, n, theta, config);
  const double parallel_time = seconds_since(parallel_start);
  std::printf("block-size kernel, %2d threads:%8.3f s  %10.0f reps/s  (%.2fx the "
              "serial kernel)\n",
              used, parallel_time, double(reps) / parallel_time,
              serial_time / parallel_time);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].s_n == parallel[i].s_n &&
                serial[i].delta_n == parallel[i].delta_n &&
                serial[i].eta_e == parallel[i].eta_e &&
                serial[i].eta_i == parallel[i].eta_i &&
                serial[i].external_length == parallel[i].external_length &&
                serial[i].internal_length == parallel[i].internal_length;
  }
  std::printf("serial and parallel replicates identical: %s\n",
              identical ? "yes" : "NO");
  std::printf("mean segregating sites: reference %.4f, kernel %.4f\n", ref_mean,
              mean_s(serial));
  return identical ? 0 : 1;
}
