#pragma once
// Finite merger-rate measures on [0,1] and their moment integrals.
//
// A measure here is a point mass at zero (the pairwise part) plus a sweep
// part on (0,1] given by atoms and/or densities. The merger rate of k fixed
// blocks out of b is the integral of x^(k-2) (1-x)^(b-k) against the measure;
// atoms contribute in closed form, the "linear" density (h(y) = c*y on
// [lo,hi]) through the incomplete beta function, and tabulated piecewise-
// constant densities through adaptive quadrature.
//
// The family-frequency view divides the sweep part by x^2; several samplers
// and bounds work with that version, so both are exposed.

#include <cstdint>
#include <string>
#include <vector>

#include "sweepcoal/rng.hpp"

namespace sweepcoal {

struct Density {
  enum class Form { linear, table };
  Form form = Form::linear;
  // linear: h(y) = c*y on [lo,hi]
  double c = 0.0, lo = 0.0, hi = 1.0;
  // table: h(y) = hs[i] on [xs[i], xs[i+1]); xs ascending in [0,1]
  std::vector<double> xs, hs;
};

struct LambdaMeasure {
  double kingman_mass = 0.0;
  std::vector<std::pair<double, double>> atoms;  // (location in (0,1], weight > 0)
  std::vector<Density> densities;

  void validate() const;  // throws std::invalid_argument naming the field

  // Total mass of the frequency view (sweep part / x^2); +inf when a density
  // reaches down to zero with positive height.
  double frequency_mass() const;

  double total_mass() const;  // kingman_mass + sweep-part mass

  static LambdaMeasure kingman() { return LambdaMeasure{1.0, {}, {}}; }

  std::string to_json_string() const;
  static LambdaMeasure from_json_string(const std::string& text);
};

// Merger-rate integral for k of b blocks, 2 <= k <= b.
double lambda_rate(const LambdaMeasure& m, int b, int k);

// Per-level totals for b = 2..bmax:
//   lambda[b] = total rate of any merger from b blocks,
//   alpha[b]  = the non-pairwise-part share (lambda[b] - kingman_mass*C(b,2)).
// Computed through the frequency view, which stays stable for large b.
struct TotalRates {
  int bmax = 1;
  std::vector<double> lambda, alpha;  // index b, valid for 2..bmax

  double lambda_b(int b) const { return lambda[b]; }
  double alpha_b(int b) const { return alpha[b]; }
};
TotalRates total_rates(const LambdaMeasure& m, int bmax);

// Probability that a merger-size draw at level b takes exactly k blocks:
// C(b,k) * lambda_rate(b,k) / lambda_b. Row is computed stably in log space.
std::vector<double> merger_size_law(const LambdaMeasure& m, int b, double lambda_b);

// Draw from the normalized frequency view (positions in (0,1]); requires
// finite frequency mass.
class FrequencySampler {
 public:
  explicit FrequencySampler(const LambdaMeasure& m);
  double total_mass() const { return total_; }
  double sample(Rng& rng) const;

 private:
  struct Component {
    double mass;
    int kind;  // 0 atom, 1 linear, 2 table piece
    double a, b, c;
  };
  std::vector<Component> comps_;
  std::vector<double> cum_;
  double total_ = 0.0;
};

// P(binomial(b, y) >= 2): the chance a mass-y event moves >= 2 of b blocks.
double excess_merge_probability(int b, double y);

}  // namespace sweepcoal
