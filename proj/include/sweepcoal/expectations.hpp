#pragma once
// Exact expectations for genealogy summary statistics under a merger-rate
// measure, plus the baseline-excess functional rho.
//
// Everything here runs on the block-count jump chain: from b blocks the next
// merger takes k of them with probability given by merger_size_law, so visit
// probabilities, expected branch lengths, and expected mutation counts reduce
// to one-dimensional dynamic programs over the level b.

#include <vector>

#include "sweepcoal/lambda_measure.hpp"
#include "sweepcoal/mc_estimate.hpp"
#include "sweepcoal/rng.hpp"

namespace sweepcoal {

// visit[b] = probability the block-count chain started at n ever sits at b,
// for 1 <= b <= n (visit[n] = visit[1] = 1). Index 0 unused.
std::vector<double> visit_probabilities(const LambdaMeasure& measure, int n);

// Single visit probability, 2 <= b <= n.
double gnb(const LambdaMeasure& measure, int n, int b);

// Expected pairwise difference count at mutation rate theta/2 per lineage:
// theta divided by the total merger rate of two blocks.
double expected_pairwise(const LambdaMeasure& measure, double theta);

// Expected segregating sites for a sample of n.
double expected_segregating(const LambdaMeasure& measure, double theta, int n);

// Expected time a tagged sample element stays in a singleton block.
double expected_singleton_duration(const LambdaMeasure& measure, int n);

// Expected total external branch length, n * expected_singleton_duration.
double expected_external_length(const LambdaMeasure& measure, int n);

// Monte Carlo estimate of the external-length deficit 2 - E[external length]
// relative to the large-n pairwise baseline.
MonteCarloEstimate external_branch_deficit(const LambdaMeasure& measure, int n,
                                           std::uint64_t reps, Rng& rng);

// Probability that the coupled pairwise-only and full chains agree for a
// sample of n: product over b of (1 - alpha_b / lambda_b). Requires unit
// pairwise mass.
double coupling_identity_probability(const LambdaMeasure& measure, int n);

struct RhoResult {
  double value = 0.0;             // limit of theta * h_{n-1} - E[S_n], >= 0
  double truncation_bound = 0.0;  // rigorous bound on the discarded tails
  int truncation_level = 0;       // level B the sums were cut at
};

// Limiting shortfall of expected segregating sites under the pairwise-only
// baseline: the large-n limit of theta*h_{n-1} - E[S_n], which is >= 0.
// The infinite sums are truncated at a level B chosen so that
// provable tail bounds fall under tol; measures whose frequency view piles
// up mass too fast near zero make the sum diverge and are rejected with
// std::domain_error instead of returning a number. Requires unit pairwise
// mass.
RhoResult rho(const LambdaMeasure& measure, double theta, double tol);

}  // namespace sweepcoal
