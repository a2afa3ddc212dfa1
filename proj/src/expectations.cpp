#include "sweepcoal/expectations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sweepcoal/lambda_sim.hpp"
#include "sweepcoal/stats.hpp"

namespace sweepcoal {

namespace {

// Normalized merger-size row at level b. merger_size_law is already a
// probability row up to rounding; renormalizing keeps the visit DP from
// drifting across thousands of levels.
std::vector<double> jump_row(const LambdaMeasure& m, int b, double lambda_b) {
  std::vector<double> row = merger_size_law(m, b, lambda_b);
  double sum = 0.0;
  for (double w : row) sum += w;
  if (sum > 0.0)
    for (double& w : row) w /= sum;
  return row;
}

// visit[b] for the block-count chain started at `start`, scattering each
// level's mass downward once its own probability is final.
std::vector<double> visit_dp(const LambdaMeasure& measure, const TotalRates& rates,
                             int start) {
  std::vector<double> v(std::size_t(start) + 1, 0.0);
  v[start] = 1.0;
  for (int m = start; m >= 2; --m) {
    if (v[m] == 0.0) continue;
    const std::vector<double> row = jump_row(measure, m, rates.lambda_b(m));
    for (int k = 2; k <= m; ++k) v[m - k + 1] += v[m] * row[k];
  }
  v[1] = 1.0;  // absorption is certain
  return v;
}

void require_unit_pairwise(const LambdaMeasure& measure, const char* who) {
  if (measure.kingman_mass != 1.0)
    throw std::invalid_argument(std::string(who) +
                                ": defined relative to the unit pairwise "
                                "baseline (kingman_mass must be 1)");
}

}  // namespace

std::vector<double> visit_probabilities(const LambdaMeasure& measure, int n) {
  measure.validate();
  if (n < 1) throw std::invalid_argument("visit_probabilities: n must be >= 1");
  if (n == 1) return {0.0, 1.0};
  const TotalRates rates = total_rates(measure, n);
  return visit_dp(measure, rates, n);
}

double gnb(const LambdaMeasure& measure, int n, int b) {
  if (b < 2 || b > n)
    throw std::invalid_argument("gnb: need 2 <= b <= n");
  return visit_probabilities(measure, n)[b];
}

double expected_pairwise(const LambdaMeasure& measure, double theta) {
  measure.validate();
  if (!(theta >= 0.0))
    throw std::invalid_argument("expected_pairwise: theta must be >= 0");
  const double lambda2 = total_rates(measure, 2).lambda_b(2);
  if (lambda2 <= 0.0)
    throw std::invalid_argument("expected_pairwise: measure drives no mergers");
  return theta / lambda2;
}

double expected_segregating(const LambdaMeasure& measure, double theta, int n) {
  measure.validate();
  if (!(theta >= 0.0))
    throw std::invalid_argument("expected_segregating: theta must be >= 0");
  if (n < 1) throw std::invalid_argument("expected_segregating: n must be >= 1");
  if (n == 1) return 0.0;
  const TotalRates rates = total_rates(measure, n);
  const std::vector<double> v = visit_dp(measure, rates, n);
  double sum = 0.0;
  for (int b = 2; b <= n; ++b) sum += b * v[b] / rates.lambda_b(b);
  return 0.5 * theta * sum;
}

double expected_singleton_duration(const LambdaMeasure& measure, int n) {
  measure.validate();
  if (n < 1)
    throw std::invalid_argument("expected_singleton_duration: n must be >= 1");
  if (n == 1) return 0.0;
  const TotalRates rates = total_rates(measure, n);
  // K[m]: expected remaining singleton time for a tagged singleton among m
  // blocks. Each jump of size k involves the tagged block with chance k/m.
  std::vector<double> K(std::size_t(n) + 1, 0.0);
  for (int m = 2; m <= n; ++m) {
    const std::vector<double> row = jump_row(measure, m, rates.lambda_b(m));
    double value = 1.0 / rates.lambda_b(m);
    for (int k = 2; k < m; ++k)
      value += row[k] * (1.0 - double(k) / m) * K[m - k + 1];
    K[m] = value;
  }
  return K[n];
}

double expected_external_length(const LambdaMeasure& measure, int n) {
  return n * expected_singleton_duration(measure, n);
}

MonteCarloEstimate external_branch_deficit(const LambdaMeasure& measure, int n,
                                           std::uint64_t reps, Rng& rng) {
  measure.validate();
  if (n < 2)
    throw std::invalid_argument("external_branch_deficit: n must be >= 2");
  if (reps < 2)
    throw std::invalid_argument("external_branch_deficit: reps must be >= 2");
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const GenealogyPath path = simulate_lambda(measure, n, kNoHorizon, rng);
    const double x = 2.0 - path_branch_lengths(path).external;
    const double d = x - mean;
    mean += d / double(i + 1);
    m2 += d * (x - mean);
  }
  MonteCarloEstimate out;
  out.value = mean;
  out.se = std::sqrt(m2 / (double(reps) * double(reps - 1)));
  out.reps = reps;
  return out;
}

double coupling_identity_probability(const LambdaMeasure& measure, int n) {
  measure.validate();
  require_unit_pairwise(measure, "coupling_identity_probability");
  if (n < 2)
    throw std::invalid_argument("coupling_identity_probability: n must be >= 2");
  const TotalRates rates = total_rates(measure, n);
  double prod = 1.0;
  for (int b = 2; b <= n; ++b)
    prod *= 1.0 - rates.alpha_b(b) / rates.lambda_b(b);
  return prod;
}

namespace {

// Tail behaviour of the sweep part, split by how fast the per-level excess
// rate alpha_b can grow:
//   - components with finite frequency-view mass give alpha_b <= alpha_bar,
//   - a linear density h(y) = c*y reaching zero gives alpha_b <= c (1+log b).
// A density with positive height at zero grows like alpha_b ~ b, the level
// sums diverge, and rho does not exist.
struct TailFamilies {
  double alpha_bar = 0.0;
  double c_lin = 0.0;
};

TailFamilies classify_for_rho(const LambdaMeasure& m) {
  TailFamilies fam;
  for (const auto& [p, w] : m.atoms) fam.alpha_bar += w / (p * p);
  for (const Density& d : m.densities) {
    if (d.form == Density::Form::linear) {
      if (d.c == 0.0) continue;
      if (d.lo == 0.0)
        fam.c_lin += d.c;
      else
        fam.alpha_bar += d.c * std::log(d.hi / d.lo);
    } else {
      for (std::size_t j = 0; j + 1 < d.xs.size(); ++j) {
        if (d.hs[j] == 0.0) continue;
        if (d.xs[j] == 0.0)
          throw std::domain_error(
              "rho: density with positive height at zero accumulates excess "
              "rate like alpha_b ~ b and the level sums diverge");
        fam.alpha_bar += d.hs[j] * (1.0 / d.xs[j] - 1.0 / d.xs[j + 1]);
      }
    }
  }
  return fam;
}

// Rigorous closed-form upper bounds on the infinite tails cut off at level B.
// Each is (sum of the first term) + (integral of a decreasing majorant).

// sum_{m >= B} 1/m^3
double tail_cubed(double B) { return 1.0 / (B * B * B) + 0.5 / (B * B); }

// sum_{m >= B} (1 + log(m+1)) / m^3, via 1 + log(x+1) <= 1 + log 2 + log x
double tail_cubed_log(double B) {
  return (1.0 + std::log(B + 1.0)) / (B * B * B) +
         (0.5 * (1.0 + std::log(2.0)) + 0.5 * std::log(B) + 0.25) / (B * B);
}

// sum_{m >= M} (1 + log(m+1)) / (m (m+1))
double tail_squared_log(double M) {
  return (1.0 + std::log(M + 1.0)) / (M * M) +
         (2.0 + std::log(2.0) + std::log(M)) / M;
}

// |G_inf(b) - G_M(b)| and 1 - G_inf(M): moving the start level from m to m+1
// changes a visit probability by at most 2 alpha_{m+1} / (m (m+1)).
double visit_gap_bound(const TailFamilies& fam, double M) {
  return 2.0 * (fam.alpha_bar / M + fam.c_lin * tail_squared_log(M));
}

// sum_{b > B} (4 + log b) / (b (b-1)), majorizing the linear-family part of
// the second tail; tail_squared_log(b) <= (4 + log b) / b for b >= 2.
double tail2_linear_part(double B) {
  return (4.0 + std::log(B + 1.0)) / (B * B) +
         (5.0 + std::log(2.0) + std::log(B)) / B;
}

double truncation_bound(const TailFamilies& fam, int level, double theta) {
  const double B = double(level);
  // first sum, terms 2 alpha_b / ((b-1) lambda_b) <= 4 alpha_b / (b (b-1)^2)
  const double tail1 =
      4.0 * (fam.alpha_bar * tail_cubed(B) + fam.c_lin * tail_cubed_log(B));
  // second sum, terms (b / lambda_b)(1 - G_inf(b)) <= (2/(b-1)) * gap(b)
  const double tail2 =
      4.0 * (fam.alpha_bar / B + fam.c_lin * tail2_linear_part(B));
  // cost of evaluating G at start level B instead of the limit, folded over
  // b = 2..B with sum b / lambda_b <= 2 h_{B-1}
  const double fold = 2.0 * visit_gap_bound(fam, B) * harmonic(level - 1);
  return 0.5 * theta * (tail1 + tail2 + fold);
}

}  // namespace

RhoResult rho(const LambdaMeasure& measure, double theta, double tol) {
  measure.validate();
  require_unit_pairwise(measure, "rho");
  if (!(theta >= 0.0)) throw std::invalid_argument("rho: theta must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("rho: tol must be > 0");
  const TailFamilies fam = classify_for_rho(measure);  // throws if divergent
  if ((fam.alpha_bar == 0.0 && fam.c_lin == 0.0) || theta == 0.0)
    return {0.0, 0.0, 2};  // no sweep part: both sums vanish identically

  constexpr int kMaxLevel = 1 << 15;
  int level = 64;
  while (truncation_bound(fam, level, theta) > tol) {
    if (level >= kMaxLevel)
      throw std::invalid_argument(
          "rho: tol is unattainably small for this measure within the "
          "supported truncation levels");
    level *= 2;
  }

  const TotalRates rates = total_rates(measure, level);
  const std::vector<double> v = visit_dp(measure, rates, level);
  double sum1 = 0.0, sum2 = 0.0;
  for (int b = 2; b <= level; ++b) {
    const double lam = rates.lambda_b(b);
    sum1 += 2.0 * rates.alpha_b(b) / ((b - 1.0) * lam);
    sum2 += (double(b) / lam) * (1.0 - v[b]);
  }
  RhoResult out;
  out.value = 0.5 * theta * (sum1 + sum2);
  out.truncation_bound = truncation_bound(fam, level, theta);
  out.truncation_level = level;
  return out;
}

}  // namespace sweepcoal
