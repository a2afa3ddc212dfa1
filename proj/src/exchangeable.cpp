#include "sweepcoal/exchangeable.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace sweepcoal {

double RankedMasses::total() const {
  double t = 0.0;
  for (double m : masses) t += m;
  return t;
}

void RankedMasses::validate() const {
  double prev = 1.0;
  for (double m : masses) {
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("mass outside [0,1]");
    if (m > prev + 1e-12) throw std::invalid_argument("masses not ranked decreasingly");
    prev = m;
  }
  if (total() > 1.0 + 1e-9) throw std::invalid_argument("masses sum beyond 1");
}

void StickBreaking::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("stick-breaking coin outside [0,1]");
  if (stages < 1) throw std::invalid_argument("stick-breaking needs >= 1 stage");
}

Partition sample_paintbox(const RankedMasses& y, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("paintbox sample size must be >= 1");
  std::vector<int> labels(n);
  // Box index per point: 0..K-1 are boxes, K.. are distinct dust labels.
  const int K = static_cast<int>(y.masses.size());
  std::vector<int> box_label(K, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    int box = -1;
    for (int j = 0; j < K; ++j) {
      if (u < y.masses[j]) {
        box = j;
        break;
      }
      u -= y.masses[j];
    }
    if (box < 0) {
      labels[i] = next++;  // dust: its own block
    } else {
      if (box_label[box] < 0) box_label[box] = next++;
      labels[i] = box_label[box];
    }
  }
  return Partition::from_labels(labels);
}

PartitionDistribution paintbox_law_exact(const RankedMasses& y, int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("paintbox enumeration needs n <= 5");
  const int K = static_cast<int>(y.masses.size());
  if (K > 16) throw std::invalid_argument("paintbox enumeration needs few boxes");
  const double dust = std::max(0.0, 1.0 - y.total());
  PartitionDistribution d;
  d.n = n;
  // Assignment vector: value in [0,K) = box, K+i = dust for point i (each its own).
  std::vector<int> assign(n, 0);
  std::function<void(int, double)> rec = [&](int i, double w) {
    if (w == 0.0) return;
    if (i == n) {
      std::vector<int> labels(n);
      std::vector<int> box_label(K, -1);
      int next = 0;
      for (int j = 0; j < n; ++j) {
        if (assign[j] >= K) {
          labels[j] = next++;
        } else {
          if (box_label[assign[j]] < 0) box_label[assign[j]] = next++;
          labels[j] = box_label[assign[j]];
        }
      }
      d.weights[Partition::from_labels(labels)] += w;
      return;
    }
    for (int b = 0; b < K; ++b) {
      assign[i] = b;
      rec(i + 1, w * y.masses[b]);
    }
    assign[i] = K + i;
    rec(i + 1, w * dust);
  };
  rec(0, 1.0);
  return d;
}

namespace {

// Descending iterator over stages k in [2, M] whose family coin is one.
// Returns 1 when a stage was produced, 0 once the range is exhausted.
struct HeadStages {
  double theta;
  long k;  // next candidate (inclusive)

  bool next(Rng& rng, long& out) {
    if (theta <= 0.0) return false;
    if (k < 2) return false;
    if (theta >= 1.0) {
      out = k--;
      return true;
    }
    const std::uint64_t gap = rng.geometric_failures(theta);
    if (gap >= static_cast<std::uint64_t>(k - 1)) {  // skipped past stage 2
      k = 1;
      return false;
    }
    out = k - static_cast<long>(gap);
    k = out - 1;
    return true;
  }
};

}  // namespace

RankedMasses stick_breaking_masses(const StickBreaking& sb, Rng& rng) {
  sb.validate();
  std::vector<double> frags;
  double rem = 1.0;
  HeadStages heads{sb.theta, sb.stages};
  long k;
  while (heads.next(rng, k)) {
    const double w = rng.beta_1_b(static_cast<double>(k - 1));
    const double piece = rem * w;
    frags.push_back(piece);
    rem -= piece;
  }
  frags.push_back(rem);  // the never-broken first family
  std::sort(frags.begin(), frags.end(), std::greater<double>());
  while (frags.size() > 1 && frags.back() == 0.0) frags.pop_back();
  return RankedMasses{std::move(frags)};
}

Partition sample_stick_breaking_partition(const StickBreaking& sb, int n, Rng& rng) {
  sb.validate();
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  std::vector<int> labels(n, -1);
  std::vector<int> open(n);  // points still riding the unbroken remainder
  for (int i = 0; i < n; ++i) open[i] = i;
  int next = 0;
  HeadStages heads{sb.theta, sb.stages};
  long k;
  while (!open.empty() && heads.next(rng, k)) {
    const double w = rng.beta_1_b(static_cast<double>(k - 1));
    // Conditional on the past, each open point joins this family with
    // probability w (its position is uniform on the remainder).
    int family = -1;
    for (std::size_t j = open.size(); j-- > 0;) {
      if (rng.bernoulli(w)) {
        if (family < 0) family = next++;
        labels[open[j]] = family;
        open[j] = open.back();
        open.pop_back();
      }
    }
  }
  if (!open.empty()) {
    const int family = next++;
    for (int i : open) labels[i] = family;
  }
  return Partition::from_labels(labels);
}

StickMoments stick_breaking_moments(const StickBreaking& sb) {
  sb.validate();
  StickMoments e;  // M = 1: the whole stick is one family, all moments 1
  const double theta = sb.theta;
  for (long k = 2; k <= sb.stages; ++k) {
    const double beta = static_cast<double>(k - 1);
    // E[W^a (1-W)^b] for W ~ Beta(1, beta): beta * a! / prod_{i=0..a}(beta+b+i).
    const auto ew = [beta](int a, int b) {
      double fact = 1.0, denom = 1.0;
      for (int i = 2; i <= a; ++i) fact *= i;
      for (int i = 0; i <= a; ++i) denom *= (beta + b + i);
      return beta * fact / denom;
    };
    // V = coin * W; the a = 0 case keeps the no-family branch.
    const auto ev = [&](int a, int b) {
      return (a == 0 ? (1.0 - theta) : 0.0) + theta * ew(a, b);
    };
    const StickMoments p = e;
    e.e2 = ev(2, 0) + ev(0, 2) * p.e2;
    e.e3 = ev(3, 0) + ev(0, 3) * p.e3;
    e.e4 = ev(4, 0) + ev(0, 4) * p.e4;
    e.e5 = ev(5, 0) + ev(0, 5) * p.e5;
    e.e22 = ev(4, 0) + 2.0 * ev(2, 2) * p.e2 + ev(0, 4) * p.e22;
    e.e23 = ev(5, 0) + ev(3, 2) * p.e2 + ev(2, 3) * p.e3 + ev(0, 5) * p.e23;
  }
  return e;
}

StickMoments moments_of_fixed_masses(const RankedMasses& y) {
  if (std::abs(y.total() - 1.0) > 1e-9)
    throw std::invalid_argument("moment formulas assume no dust");
  double m2 = 0, m3 = 0, m4 = 0, m5 = 0;
  for (double v : y.masses) {
    const double v2 = v * v;
    m2 += v2;
    m3 += v2 * v;
    m4 += v2 * v2;
    m5 += v2 * v2 * v;
  }
  return StickMoments{m2, m3, m4, m5, m2 * m2, m2 * m3};
}

PartitionDistribution paintbox_law_from_moments(const StickMoments& m, int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("moment EPPF supports n <= 5");
  // A(shape) = expected sum over ordered tuples of distinct boxes of the
  // product of per-block masses; derived by coincidence inclusion-exclusion
  // from raw power sums. Blocks are distinguishable, so no symmetry factor.
  const double A5 = m.e5;
  const double A41 = m.e4 - m.e5;
  const double A32 = m.e23 - m.e5;
  const double A311 = m.e3 - m.e23 - 2 * m.e4 + 2 * m.e5;
  const double A221 = m.e22 - m.e4 - 2 * m.e23 + 2 * m.e5;
  const double A2111 = m.e2 - 3 * m.e22 - 3 * m.e3 + 6 * m.e4 + 5 * m.e23 - 6 * m.e5;
  const double A4 = m.e4;
  const double A31 = m.e3 - m.e4;
  const double A22 = m.e22 - m.e4;
  const double A211 = m.e2 - m.e22 - 2 * m.e3 + 2 * m.e4;
  const double A3 = m.e3;
  const double A21 = m.e2 - m.e3;
  const double A2 = m.e2;

  const auto shape_prob = [&](const std::vector<int>& shape) -> double {
    switch (n) {
      case 1:
        return 1.0;
      case 2:
        if (shape == std::vector<int>{2}) return A2;
        return 1.0 - A2;
      case 3:
        if (shape == std::vector<int>{3}) return A3;
        if (shape == std::vector<int>{2, 1}) return A21;
        return 1.0 - A3 - 3 * A21;
      case 4:
        if (shape == std::vector<int>{4}) return A4;
        if (shape == std::vector<int>{3, 1}) return A31;
        if (shape == std::vector<int>{2, 2}) return A22;
        if (shape == std::vector<int>{2, 1, 1}) return A211;
        return 1.0 - A4 - 4 * A31 - 3 * A22 - 6 * A211;
      default:
        if (shape == std::vector<int>{5}) return A5;
        if (shape == std::vector<int>{4, 1}) return A41;
        if (shape == std::vector<int>{3, 2}) return A32;
        if (shape == std::vector<int>{3, 1, 1}) return A311;
        if (shape == std::vector<int>{2, 2, 1}) return A221;
        if (shape == std::vector<int>{2, 1, 1, 1}) return A2111;
        return 1.0 - A5 - 5 * A41 - 10 * A32 - 10 * A311 - 15 * A221 - 10 * A2111;
    }
  };

  PartitionDistribution d;
  d.n = n;
  double total = 0.0;
  for (const auto& pi : enumerate_partitions(n)) {
    auto shape = pi.block_sizes();
    std::sort(shape.begin(), shape.end(), std::greater<int>());
    double p = shape_prob(shape);
    if (p < 0.0) {
      if (p < -1e-9) throw std::runtime_error("EPPF produced a negative probability");
      p = 0.0;
    }
    d.weights[pi] = p;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::runtime_error("EPPF probabilities do not sum to 1");
  for (auto& [pi, w] : d.weights) w /= total;
  return d;
}

PartitionDistribution stick_breaking_partition_law(const StickBreaking& sb, int n) {
  return paintbox_law_from_moments(stick_breaking_moments(sb), n);
}

}  // namespace sweepcoal
