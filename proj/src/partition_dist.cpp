#include "sweepcoal/partition_dist.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace sweepcoal {

void PartitionDistribution::validate() const {
  double total = 0.0;
  for (const auto& [pi, w] : weights) {
    if (pi.size() != n) throw std::invalid_argument("distribution support size mismatch");
    if (w < 0.0) throw std::invalid_argument("negative partition weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("partition weights do not sum to 1");
}

double tv_distance(const PartitionDistribution& a, const PartitionDistribution& b) {
  if (a.n != b.n) throw std::invalid_argument("tv_distance: sample sizes differ");
  double acc = 0.0;
  for (const auto& [pi, w] : a.weights) acc += std::abs(w - b.prob(pi));
  for (const auto& [pi, w] : b.weights)
    if (a.weights.find(pi) == a.weights.end()) acc += w;
  return 0.5 * acc;
}

PartitionDistribution empirical_distribution(int n, const std::vector<Partition>& samples) {
  if (samples.empty()) throw std::invalid_argument("empirical distribution of nothing");
  PartitionDistribution d;
  d.n = n;
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (const auto& pi : samples) {
    if (pi.size() != n) throw std::invalid_argument("sample size mismatch");
    d.weights[pi] += inv;
  }
  return d;
}

void PartitionCounter::merge(const PartitionCounter& other) {
  if (other.n != n) throw std::invalid_argument("counter size mismatch");
  for (const auto& [pi, c] : other.counts) counts[pi] += c;
  total += other.total;
}

PartitionDistribution PartitionCounter::distribution() const {
  if (total <= 0) throw std::invalid_argument("empty partition counter");
  PartitionDistribution d;
  d.n = n;
  const double inv = 1.0 / static_cast<double>(total);
  for (const auto& [pi, c] : counts) d.weights[pi] = c * inv;
  return d;
}

Partition sample_two_coin(double p, int n, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("two-coin p outside [0,1]");
  if (n < 1) throw std::invalid_argument("two-coin sample size must be >= 1");
  std::vector<int> labels(n);
  int next = 0;
  int family = -1;
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(p)) {
      if (family < 0) family = next++;
      labels[i] = family;
    } else {
      labels[i] = next++;
    }
  }
  return Partition::from_labels(labels);
}

PartitionDistribution two_coin_law(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("two-coin p outside [0,1]");
  if (n < 1 || n > 16) throw std::invalid_argument("two-coin law enumeration needs n <= 16");
  PartitionDistribution d;
  d.n = n;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double w = 1.0;
    std::vector<int> labels(n);
    int next = 0;
    int family = -1;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        w *= p;
        if (family < 0) family = next++;
        labels[i] = family;
      } else {
        w *= 1.0 - p;
        labels[i] = next++;
      }
    }
    if (w > 0.0) d.weights[Partition::from_labels(labels)] += w;
  }
  return d;
}

double tv_bootstrap_se(const PartitionCounter& counts, const PartitionDistribution& ref,
                       int boot_reps, Rng& rng) {
  if (counts.total <= 0 || boot_reps < 2)
    throw std::invalid_argument("bootstrap needs samples and >= 2 reps");
  // Flatten counts for multinomial resampling.
  std::vector<const Partition*> support;
  std::vector<double> probs;
  support.reserve(counts.counts.size());
  for (const auto& [pi, c] : counts.counts) {
    support.push_back(&pi);
    probs.push_back(static_cast<double>(c) / static_cast<double>(counts.total));
  }
  std::vector<double> tvs(boot_reps);
  const long total = counts.total;
  for (int b = 0; b < boot_reps; ++b) {
    // Sequential binomial thinning = one multinomial draw.
    PartitionDistribution emp;
    emp.n = counts.n;
    long remaining = total;
    double mass_left = 1.0;
    for (std::size_t i = 0; i < support.size() && remaining > 0; ++i) {
      const double q = (i + 1 == support.size()) ? 1.0 : std::min(1.0, probs[i] / mass_left);
      long draw;
      if (q >= 1.0) {
        draw = remaining;
      } else {
        std::binomial_distribution<long> bin(remaining, q);
        draw = bin(rng);
      }
      if (draw > 0) emp.weights[*support[i]] = static_cast<double>(draw) / total;
      remaining -= draw;
      mass_left -= probs[i];
    }
    tvs[b] = tv_distance(emp, ref);
  }
  double mean = 0.0;
  for (double v : tvs) mean += v;
  mean /= boot_reps;
  double var = 0.0;
  for (double v : tvs) var += (v - mean) * (v - mean);
  var /= (boot_reps - 1);
  return std::sqrt(var);
}

}  // namespace sweepcoal
