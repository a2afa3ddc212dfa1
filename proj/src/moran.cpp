#include "sweepcoal/moran.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace sweepcoal {

namespace {

void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("sweep params: " + field + " " + why);
}

// tiny union-find over the sampled lineages
struct Merger {
  std::vector<int> parent;
  explicit Merger(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<long> sample_without_replacement(long twoN, int n, Rng& rng) {
  std::vector<long> picks;
  picks.reserve(n);
  std::unordered_set<long> seen;
  for (long t = twoN - n; t < twoN; ++t) {
    long u = long(rng.uniform_below(std::uint64_t(t + 1)));
    if (!seen.insert(u).second) u = t, seen.insert(t);
    picks.push_back(u);
  }
  return picks;
}

}  // namespace

void SweepParams::validate() const {
  if (twoN < 2) fail("twoN", "must be >= 2");
  if (!(s > 0.0 && s < 1.0)) fail("s", "must lie in (0,1)");
  if (!(r >= 0.0 && r <= 1.0)) fail("r", "must lie in [0,1]");
  if (n < 1 || long(n) > twoN) fail("n", "must lie in [1, twoN]");
}

double hitting_probability(long i, long j, long k, double s) {
  if (!(0 <= i && i <= k && k <= j && i < j))
    throw std::domain_error("hitting_probability: need 0 <= i <= k <= j, i < j");
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("hitting_probability: need 0 < s < 1");
  if (k == i) return 0.0;
  if (k == j) return 1.0;
  const double l = std::log1p(-s);
  return std::expm1(double(k - i) * l) / std::expm1(double(j - i) * l);
}

SweepOutcome simulate_single_sweep(const SweepParams& params, Rng& rng,
                                   SweepDiagnostics* diag) {
  params.validate();
  if (diag) *diag = {};
  const long twoN = params.twoN;
  std::vector<std::uint8_t> favored(twoN, 0);
  favored[0] = 1;
  long count = 1;

  // accepted replacements in order: dying slot and neutral-site parent slot
  std::vector<std::uint64_t> log;
  std::uint64_t proposals = 0;
  while (count != 0 && count != twoN) {
    ++proposals;
    const long dying = long(rng.uniform_below(std::uint64_t(twoN)));
    const long parent = long(rng.uniform_below(std::uint64_t(twoN)));
    if (favored[dying] && !favored[parent] && rng.bernoulli(params.s))
      continue;  // selection vetoes replacing a favored copy by an unfavored one
    long neutral = parent;
    if (params.r > 0.0 && rng.bernoulli(params.r))
      neutral = long(rng.uniform_below(std::uint64_t(twoN)));
    if (favored[dying] != favored[parent]) {
      if (diag) ++(favored[parent] ? diag->ups : diag->downs);
      count += favored[parent] ? 1 : -1;
      favored[dying] = favored[parent];
    }
    log.push_back((std::uint64_t(dying) << 32) | std::uint64_t(neutral));
  }
  if (diag) {
    diag->proposals += proposals;
    diag->accepted += log.size();
  }

  SweepOutcome out;
  out.fixed = (count == twoN);
  // proposals form a Poisson stream of rate twoN, so the absorption time is
  // a Gamma(#proposals) sum of exponentials; drawing it in one shot spares
  // the log from carrying per-event times
  out.tau = std::gamma_distribution<double>(double(proposals), 1.0 / double(twoN))(rng);

  // trace the sampled slots back through the log
  const std::vector<long> picks = sample_without_replacement(twoN, params.n, rng);
  std::vector<int> occupant(twoN, -1);
  Merger merger(params.n);
  for (int i = 0; i < params.n; ++i) {
    if (occupant[picks[i]] >= 0)
      merger.unite(i, occupant[picks[i]]);
    else
      occupant[picks[i]] = i;
  }
  for (std::size_t e = log.size(); e-- > 0;) {
    const long dying = long(log[e] >> 32);
    const long neutral = long(log[e] & 0xffffffffull);
    const int lineage = occupant[dying];
    if (lineage < 0) continue;
    if (dying == neutral) continue;
    occupant[dying] = -1;
    if (occupant[neutral] >= 0)
      merger.unite(lineage, occupant[neutral]);
    else
      occupant[neutral] = lineage;
  }
  std::vector<int> labels(params.n);
  for (int i = 0; i < params.n; ++i) labels[i] = merger.find(i);
  out.theta = Partition::from_labels(labels);
  return out;
}

MonteCarloEstimate sweep_duration_mean(const SweepParams& params, std::uint64_t reps,
                                       Rng& rng) {
  if (reps < 2) throw std::invalid_argument("sweep_duration_mean: reps >= 2");
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const SweepOutcome out = simulate_single_sweep(params, rng);
    const double delta = out.tau - mean;
    mean += delta / double(i + 1);
    m2 += delta * (out.tau - mean);
  }
  MonteCarloEstimate est;
  est.value = mean;
  est.se = std::sqrt(m2 / double(reps - 1) / double(reps));
  est.reps = reps;
  return est;
}

MonteCarloEstimate prob_coalescence_given_loss(const SweepParams& params,
                                               std::uint64_t reps, Rng& rng) {
  if (reps < 1) throw std::invalid_argument("prob_coalescence_given_loss: reps >= 1");
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const SweepOutcome out = simulate_single_sweep(params, rng);
    if (!out.fixed && !out.theta.is_singletons()) ++hits;
  }
  MonteCarloEstimate est;
  est.value = double(hits) / double(reps);
  est.se = std::sqrt(est.value * (1.0 - est.value) / double(reps));
  est.reps = reps;
  return est;
}

}  // namespace sweepcoal
