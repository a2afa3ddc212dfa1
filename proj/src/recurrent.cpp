#include "sweepcoal/recurrent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

namespace sweepcoal {

namespace {

// hard cap on logged replacement events (8 bytes each, ~1.2 GB)
constexpr std::uint64_t kMaxLogEvents = 150'000'000;

struct Event {
  std::uint32_t dying, parent;
};

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

}  // namespace

AncestralSnapshot simulate_recurrent(const SweepSpec& spec, long twoN, int n,
                                     const std::vector<double>& times, Rng& rng,
                                     RecurrentDiagnostics* diag) {
  spec.validate();
  if (twoN < 2 || twoN > 4000)
    throw std::invalid_argument("simulate_recurrent: twoN must lie in [2, 4000]");
  if (n < 1 || long(n) > twoN)
    throw std::invalid_argument("simulate_recurrent: n must lie in [1, twoN]");
  if (times.empty())
    throw std::invalid_argument("simulate_recurrent: need at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0 && times[i] <= 5.0))
      throw std::invalid_argument("simulate_recurrent: times must lie in (0, 5]");
    if (i > 0 && !(times[i - 1] < times[i]))
      throw std::invalid_argument("simulate_recurrent: times must be ascending");
  }
  const double log_two_n = std::log(double(twoN));
  for (std::size_t i = 0; i < spec.sites.size(); ++i)
    if (spec.recomb_at(spec.sites[i].position) > log_two_n)
      throw std::invalid_argument(
          "simulate_recurrent: recombination exceeds log(twoN) at atoms[" +
          std::to_string(i) + "]");
  if (diag) *diag = {};

  const double half_n = double(twoN) / 2.0;
  const double window = half_n * times.back() + 10.0 * log_two_n;
  const double expected_events = window * double(twoN);
  if (expected_events > 0.9 * double(kMaxLogEvents))
    throw resource_error(
        "simulate_recurrent: window needs ~" +
        std::to_string(std::uint64_t(expected_events)) +
        " logged events, over the memory budget; shorten the oldest time or "
        "reduce twoN");

  // raw-clock boundaries where ancestry must be read off, oldest first
  std::vector<double> cuts(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    cuts[i] = -half_n * times[times.size() - 1 - i];
  std::vector<std::uint64_t> cut_index(cuts.size(), 0);

  std::vector<Event> log;
  log.reserve(std::size_t(expected_events * 1.02) + 1024);

  const double proposal_rate = spec.total_rate() / half_n;  // per raw time unit
  std::vector<std::uint8_t> favored(twoN, 0);
  std::vector<double> site_cum;
  for (const auto& site : spec.sites)
    site_cum.push_back((site_cum.empty() ? 0.0 : site_cum.back()) + site.rate);

  double t = -window;
  std::size_t next_cut = 0;
  bool sweep_at_horizon = false;

  // append one neutral stretch of the given raw length; events need counts
  // and actors only, not times, because the order within a stretch is
  // exchangeable and no boundary falls inside it
  auto run_neutral = [&](double len) {
    if (len <= 0.0) return;
    const std::uint64_t count =
        std::poisson_distribution<std::uint64_t>(double(twoN) * len)(rng);
    if (log.size() + count > kMaxLogEvents)
      throw resource_error("simulate_recurrent: event log exceeded its budget");
    for (std::uint64_t i = 0; i < count; ++i)
      log.push_back({std::uint32_t(rng.uniform_below(std::uint64_t(twoN))),
                     std::uint32_t(rng.uniform_below(std::uint64_t(twoN)))});
  };

  // advance neutrally from t to `until`, snapshotting at any cut in between
  auto advance_neutral = [&](double until) {
    while (next_cut < cuts.size() && cuts[next_cut] <= until) {
      run_neutral(cuts[next_cut] - t);
      t = cuts[next_cut];
      cut_index[next_cut] = log.size();
      ++next_cut;
    }
    run_neutral(until - t);
    t = until;
  };

  while (true) {
    const double next_proposal =
        proposal_rate > 0.0 ? t + rng.exponential(proposal_rate)
                            : std::numeric_limits<double>::infinity();
    if (next_proposal >= 0.0) {
      advance_neutral(0.0);
      break;
    }
    advance_neutral(next_proposal);

    // a sweep begins: one uniform chromosome turns favored
    int site_idx = 0;
    if (spec.sites.size() > 1) {
      const double u = rng.uniform01() * site_cum.back();
      site_idx = int(std::lower_bound(site_cum.begin(), site_cum.end(), u) -
                     site_cum.begin());
      if (site_idx >= int(spec.sites.size())) site_idx = int(spec.sites.size()) - 1;
    }
    const double s = spec.sites[site_idx].advantage;
    const double r_n =
        spec.recomb_at(spec.sites[site_idx].position) / log_two_n;
    if (diag) ++diag->sweeps_started;
    favored[rng.uniform_below(std::uint64_t(twoN))] = 1;
    long count = 1;
    // per-proposal clock: boundaries can fall inside a sweep
    bool truncated = false;
    while (count != 0 && count != twoN) {
      const double dt = rng.exponential(double(twoN));
      const double reach = std::min(t + dt, 0.0);
      while (next_cut < cuts.size() && cuts[next_cut] <= reach) {
        if (next_cut == 0) sweep_at_horizon = true;
        cut_index[next_cut] = log.size();
        ++next_cut;
      }
      if (t + dt >= 0.0) {
        // window ends mid-sweep; the sample is taken as-is
        truncated = true;
        t = 0.0;
        break;
      }
      t += dt;
      const long dying = long(rng.uniform_below(std::uint64_t(twoN)));
      const long parent = long(rng.uniform_below(std::uint64_t(twoN)));
      if (favored[dying] && !favored[parent] && rng.bernoulli(s)) continue;
      long neutral = parent;
      if (r_n > 0.0 && rng.bernoulli(r_n))
        neutral = long(rng.uniform_below(std::uint64_t(twoN)));
      if (favored[dying] != favored[parent]) {
        count += favored[parent] ? 1 : -1;
        favored[dying] = favored[parent];
      }
      if (log.size() >= kMaxLogEvents)
        throw resource_error("simulate_recurrent: event log exceeded its budget");
      log.push_back({std::uint32_t(dying), std::uint32_t(neutral)});
    }
    if (diag && count == twoN) ++diag->sweeps_fixed;
    if (truncated) break;
    // selected site is monomorphic again either way; forget it
    std::fill(favored.begin(), favored.end(), std::uint8_t(0));
  }
  if (diag) diag->events_logged += log.size();

  // sample n distinct chromosomes at time 0 (Floyd)
  std::vector<long> picks;
  {
    std::unordered_set<long> seen;
    for (long m = twoN - n; m < twoN; ++m) {
      long u = long(rng.uniform_below(std::uint64_t(m + 1)));
      if (!seen.insert(u).second) u = m, seen.insert(m);
      picks.push_back(u);
    }
  }

  // trace back, reading off the partition at each cut (newest cut first)
  std::vector<int> occupant(twoN, -1);
  Merger merger(n);
  for (int i = 0; i < n; ++i) {
    if (occupant[picks[i]] >= 0)
      merger.unite(i, occupant[picks[i]]);
    else
      occupant[picks[i]] = i;
  }
  AncestralSnapshot snap;
  snap.times = times;
  snap.partitions.resize(times.size());
  snap.sweep_at_horizon = sweep_at_horizon;
  std::size_t cut_ptr = cuts.size();  // walks newest (largest index) first
  std::uint64_t e = log.size();
  auto record_cuts_at = [&](std::uint64_t idx) {
    while (cut_ptr > 0 && cut_index[cut_ptr - 1] == idx) {
      --cut_ptr;
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = merger.find(i);
      // cuts are oldest-first; times are ascending, so cut j maps to
      // times[m-1-j]
      snap.partitions[cuts.size() - 1 - cut_ptr] = Partition::from_labels(labels);
    }
  };
  while (true) {
    record_cuts_at(e);
    if (e == 0) break;
    --e;
    const Event ev = log[e];
    if (ev.dying == ev.parent) continue;
    const int lineage = occupant[ev.dying];
    if (lineage < 0) continue;
    occupant[ev.dying] = -1;
    if (occupant[ev.parent] >= 0)
      merger.unite(lineage, occupant[ev.parent]);
    else
      occupant[ev.parent] = lineage;
  }
  return snap;
}

}  // namespace sweepcoal
