#pragma once
// Prelimit simulator at a finite population-size parameter: pairwise mergers
// at rate 1 per pair, plus sweep proposals whose accepted events group the
// current blocks by a stick-breaking paintbox. Several families may merge in
// the same event, which is exactly what distinguishes this process from its
// single-family limit.

#include <cstdint>
#include <vector>

#include "sweepcoal/genealogy.hpp"
#include "sweepcoal/rng.hpp"
#include "sweepcoal/sweep_spec.hpp"

namespace sweepcoal {

class XiSweepMeasure {
 public:
  XiSweepMeasure(SweepSpec spec, double twoN);

  const SweepSpec& spec() const { return spec_; }
  double twoN() const { return twoN_; }
  double proposal_rate() const { return total_rate_; }

  struct Site {
    double rate;
    double advantage;
    double theta;  // head probability r(x) / (advantage * log(2N))
    long stages;   // floor(2N * advantage)
  };
  const std::vector<Site>& sites() const { return sites_; }

  // Pick a site index proportional to rate.
  int sample_site(Rng& rng) const;

 private:
  SweepSpec spec_;
  double twoN_;
  double total_rate_ = 0.0;
  std::vector<Site> sites_;
  std::vector<double> cum_;
};

// Event tallies for one simulate call (reset at entry).
struct XiDiagnostics {
  std::uint64_t proposals = 0;  // sweep-stream arrivals
  std::uint64_t accepted = 0;   // passed the advantage coin
  std::uint64_t effective = 0;  // changed the state
  std::uint64_t pairwise_events = 0;
  // families of each size merged across effective sweep events (index = size)
  std::vector<std::uint64_t> family_size_counts;
};

GenealogyPath simulate_xi_sweep(const XiSweepMeasure& measure, int n, double horizon,
                                Rng& rng, XiDiagnostics* diag = nullptr);

}  // namespace sweepcoal
