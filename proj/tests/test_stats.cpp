// Branch statistics, mutation overlays, exact expectation ladders, the
// excess functional rho, the D statistics, and the block-size ensemble
// kernel, pinned by hand cases and cross-checked simulator against ladder.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sweepcoal/ensemble.hpp"
#include "sweepcoal/expectations.hpp"
#include "sweepcoal/genealogy.hpp"
#include "sweepcoal/lambda_measure.hpp"
#include "sweepcoal/lambda_sim.hpp"
#include "sweepcoal/partition.hpp"
#include "sweepcoal/rng.hpp"
#include "sweepcoal/stats.hpp"

using namespace sweepcoal;

namespace {

GenealogyPath caterpillar3() {
  auto path = GenealogyPath::start(3);
  path.record(1.0, Partition::parse("1,2|3"));
  path.record(2.5, Partition::parse("1,2,3"));
  return path;
}

double hand_harmonic(int m) {
  double h = 0.0;
  for (int i = 1; i <= m; ++i) h += 1.0 / i;
  return h;
}

}  // namespace

TEST_CASE("hand genealogies split their statistics exactly") {
  const auto path = caterpillar3();
  const auto lengths = path_branch_lengths(path);
  CHECK(lengths.external == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(lengths.internal == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(element_singleton_duration(path, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(element_singleton_duration(path, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(element_singleton_duration(path, 3) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(element_singleton_duration(path, 0), std::invalid_argument);
  CHECK_THROWS_AS(element_singleton_duration(path, 4), std::invalid_argument);

  // Star tree: everything is external, and with three leaves each mutation
  // separates exactly two of the three pairs, so Delta = (2/3) S.
  auto star = GenealogyPath::start(3);
  star.record(1.7, Partition::parse("1,2,3"));
  const auto star_lengths = path_branch_lengths(star);
  CHECK(star_lengths.external == doctest::Approx(5.1).epsilon(1e-12));
  CHECK(star_lengths.internal == 0.0);

  Rng rng(41, 50, 0);
  for (int i = 0; i < 20; ++i) {
    const auto stats = sample_statistics(overlay_mutations(star, 2.0, rng));
    CHECK(stats.s_n == stats.eta_e + stats.eta_i);
    CHECK(stats.eta_i == 0);
    CHECK(stats.delta_n ==
          doctest::Approx(2.0 * double(stats.s_n) / 3.0).epsilon(1e-12));
    CHECK(stats.external_length == doctest::Approx(5.1).epsilon(1e-12));

    // With three leaves an internal mutation also separates two pairs, so
    // the caterpillar obeys the same proportionality.
    const auto cat = sample_statistics(overlay_mutations(path, 2.0, rng));
    CHECK(cat.s_n == cat.eta_e + cat.eta_i);
    CHECK(cat.delta_n ==
          doctest::Approx(2.0 * double(cat.s_n) / 3.0).epsilon(1e-12));
    CHECK(cat.internal_length == doctest::Approx(1.5).epsilon(1e-12));
  }
}

TEST_CASE("clipped trees are refused unless the caller opts in") {
  auto clipped = GenealogyPath::start(3);
  clipped.record(1.0, Partition::parse("1,2|3"));
  clipped.end_time = 1.8;
  clipped.check_valid();

  Rng rng(42, 51, 0);
  CHECK_THROWS_AS(overlay_mutations(clipped, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(path_branch_lengths(clipped), std::invalid_argument);

  const auto lengths = path_branch_lengths(clipped, true);
  CHECK(lengths.external == doctest::Approx(3.8).epsilon(1e-12));
  CHECK(lengths.internal == doctest::Approx(0.8).epsilon(1e-12));
  const auto overlay = overlay_mutations(clipped, 1.0, rng, true);
  CHECK(overlay.truncated);

  // A horizon-cut simulator path behaves the same way.
  GenealogyPath cut;
  do {
    cut = simulate_lambda(LambdaMeasure::kingman(), 4, 0.2, rng);
  } while (cut.absorbed);
  CHECK_THROWS_AS(path_branch_lengths(cut), std::invalid_argument);
  const auto cut_lengths = path_branch_lengths(cut, true);
  CHECK(cut_lengths.external + cut_lengths.internal > 0.0);
}

TEST_CASE("singleton durations follow the pairwise ladder") {
  // Under the pairwise-only process a tagged element stays a singleton for
  // 2/n on average (induction on the one-step decomposition), so the total
  // external length has mean 2 for every sample size.
  const auto kingman = LambdaMeasure::kingman();
  for (int n : {2, 3, 5, 10, 40}) {
    CHECK(expected_singleton_duration(kingman, n) ==
          doctest::Approx(2.0 / n).epsilon(1e-12));
    CHECK(expected_external_length(kingman, n) == doctest::Approx(2.0).epsilon(1e-12));
  }

  Rng rng(43, 52, 0);
  const int reps = 20000;
  const int n = 5;
  double dur_mean = 0.0, dur_m2 = 0.0, ext_mean = 0.0, ext_m2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const auto path = simulate_lambda(kingman, n, kNoHorizon, rng);
    const double dur = element_singleton_duration(path, 3);
    const auto lengths = path_branch_lengths(path);

    double sum = 0.0;
    for (int e = 1; e <= n; ++e) sum += element_singleton_duration(path, e);
    CHECK(lengths.external == doctest::Approx(sum).epsilon(1e-9));

    double delta = dur - dur_mean;
    dur_mean += delta / (i + 1);
    dur_m2 += delta * (dur - dur_mean);
    delta = lengths.external - ext_mean;
    ext_mean += delta / (i + 1);
    ext_m2 += delta * (lengths.external - ext_mean);
  }
  const double dur_se = std::sqrt(dur_m2 / (reps - 1) / reps);
  CHECK(std::abs(dur_mean - 2.0 / n) < 5.0 * dur_se);
  const double ext_se = std::sqrt(ext_m2 / (reps - 1) / reps);
  CHECK(std::abs(ext_mean - 2.0) < 5.0 * ext_se);
}

TEST_CASE("visit probabilities by hand for the frequency-one atom") {
  // With a unit atom at frequency one, every family event jumps straight to
  // absorption, so reaching level b means winning b - n pairwise races:
  // G(3) = 6/7, G(2) = (6/7)(3/4) = 9/14 from four blocks.
  const LambdaMeasure measure{1.0, {{1.0, 1.0}}, {}};
  const auto visit = visit_probabilities(measure, 4);
  REQUIRE(visit.size() == 5);
  CHECK(visit[4] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(visit[3] == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(visit[2] == doctest::Approx(9.0 / 14.0).epsilon(1e-12));
  CHECK(visit[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gnb(measure, 4, 2) == doctest::Approx(9.0 / 14.0).epsilon(1e-12));

  // The pairwise-only chain walks through every level.
  for (int b = 2; b <= 6; ++b)
    CHECK(gnb(LambdaMeasure::kingman(), 6, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expected counts match the closed forms and the simulator") {
  CHECK(expected_pairwise(LambdaMeasure::kingman(), 1.7) ==
        doctest::Approx(1.7).epsilon(1e-12));
  CHECK(expected_segregating(LambdaMeasure::kingman(), 2.0, 10) ==
        doctest::Approx(2.0 * hand_harmonic(9)).epsilon(1e-12));
  CHECK(expected_segregating(LambdaMeasure::kingman(), 2.0, 2) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // A pair inside any sample still merges at the two-block rate, here
  // 1 + 0.8 from the atom at one half.
  const LambdaMeasure measure{1.0, {{0.5, 0.8}}, {}};
  const double theta = 1.3;
  CHECK(expected_pairwise(measure, theta) ==
        doctest::Approx(theta / 1.8).epsilon(1e-12));

  const int n = 5;
  const double exact_s = expected_segregating(measure, theta, n);
  const double exact_ext = expected_external_length(measure, n);
  Rng rng(44, 53, 0);
  const int reps = 30000;
  double s_mean = 0.0, s_m2 = 0.0, d_mean = 0.0, d_m2 = 0.0, e_mean = 0.0,
         e_m2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const auto path = simulate_lambda(measure, n, kNoHorizon, rng);
    const auto stats = sample_statistics(overlay_mutations(path, theta, rng));
    CHECK(stats.s_n == stats.eta_e + stats.eta_i);
    double delta = double(stats.s_n) - s_mean;
    s_mean += delta / (i + 1);
    s_m2 += delta * (double(stats.s_n) - s_mean);
    delta = stats.delta_n - d_mean;
    d_mean += delta / (i + 1);
    d_m2 += delta * (stats.delta_n - d_mean);
    delta = double(stats.eta_e) - e_mean;
    e_mean += delta / (i + 1);
    e_m2 += delta * (double(stats.eta_e) - e_mean);
  }
  CHECK(std::abs(s_mean - exact_s) < 5.0 * std::sqrt(s_m2 / (reps - 1) / reps));
  CHECK(std::abs(d_mean - theta / 1.8) < 5.0 * std::sqrt(d_m2 / (reps - 1) / reps));
  // Mutations land on external branches at theta/2 per unit length.
  CHECK(std::abs(e_mean - 0.5 * theta * exact_ext) <
        5.0 * std::sqrt(e_m2 / (reps - 1) / reps));
}

TEST_CASE("rho vanishes on the pairwise baseline and grows with the sweep part") {
  const auto baseline = rho(LambdaMeasure::kingman(), 1.3, 1e-6);
  CHECK(baseline.value == 0.0);
  CHECK(baseline.truncation_bound == 0.0);

  double prev = 0.0;
  for (double weight : {0.001, 0.01, 0.1}) {
    const LambdaMeasure measure{1.0, {{0.3, weight}}, {}};
    const auto result = rho(measure, 1.0, 5e-3);
    CAPTURE(weight);
    CHECK(result.truncation_bound <= 5e-3);
    CHECK(result.value > 0.0);
    CHECK(result.value > prev);
    prev = result.value;
  }

  // Independent route: rho is the limit of theta h_{n-1} - E[S_n], so the
  // fixed-n shortfall computed from the counting ladder must approach it.
  {
    const LambdaMeasure measure{1.0, {{0.3, 0.1}}, {}};
    const auto result = rho(measure, 1.0, 5e-3);
    const int big_n = 2000;
    const double seq =
        hand_harmonic(big_n - 1) - expected_segregating(measure, 1.0, big_n);
    CHECK(std::abs(seq - result.value) < 0.02);
  }

  // A density with positive height at zero piles up excess rate like the
  // level itself and the sums diverge.
  LambdaMeasure diverging = LambdaMeasure::kingman();
  Density table;
  table.form = Density::Form::table;
  table.xs = {0.0, 0.5};
  table.hs = {1.0};
  diverging.densities.push_back(table);
  CHECK_THROWS_AS(rho(diverging, 1.0, 1e-3), std::domain_error);

  // A linear density is integrable down to zero and passes.
  LambdaMeasure linear_ok = LambdaMeasure::kingman();
  Density lin;
  lin.form = Density::Form::linear;
  lin.c = 0.5;
  lin.lo = 0.0;
  lin.hi = 1.0;
  linear_ok.densities.push_back(lin);
  const auto lin_result = rho(linear_ok, 1.0, 0.02);
  CHECK(lin_result.value > 0.0);
  CHECK(lin_result.truncation_bound <= 0.02);
}

TEST_CASE("coupling identity probability in closed form") {
  const LambdaMeasure measure{1.0, {{1.0, 1.0}}, {}};
  CHECK(coupling_identity_probability(measure, 3) ==
        doctest::Approx(3.0 / 8.0).epsilon(1e-12));
  // (1/2)(3/4)(6/7)(10/11) for five samples.
  CHECK(coupling_identity_probability(measure, 5) ==
        doctest::Approx(45.0 / 154.0).epsilon(1e-12));
  const LambdaMeasure off{0.5, {{1.0, 1.0}}, {}};
  CHECK_THROWS_AS(coupling_identity_probability(off, 3), std::invalid_argument);
}

TEST_CASE("classical constants pinned by hand at n = 4") {
  CHECK(harmonic(0) == 0.0);
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(5) == doctest::Approx(137.0 / 60.0).epsilon(1e-15));
  CHECK(harmonic(9) == doctest::Approx(hand_harmonic(9)).epsilon(1e-15));

  // a1 = 11/6, a2 = 49/36; b1 = 5/9, b2 = 23/54; c1 = b1 - 1/a1 = 1/99,
  // c2 = b2 - 6/(4 a1) + a2/a1^2 = 913/71874; e1 = c1/a1, e2 = c2/(a1^2+a2).
  double e1 = 0.0, e2 = 0.0;
  tajima_constants(4, e1, e2);
  CHECK(e1 == doctest::Approx(2.0 / 363.0).epsilon(1e-12));
  CHECK(e2 == doctest::Approx((913.0 / 71874.0) / (85.0 / 18.0)).epsilon(1e-12));

  // a = 11/6, b = 49/36; c = 4/9; v = 1 + (a^2/(b+a^2))(c - 5/3) = 199/1530,
  // u = a - 1 - v = 1076/1530.
  double u = 0.0, v = 0.0;
  fu_li_constants(4, u, v);
  CHECK(v == doctest::Approx(199.0 / 1530.0).epsilon(1e-12));
  CHECK(u == doctest::Approx(1076.0 / 1530.0).epsilon(1e-12));
}

TEST_CASE("the D statistics recombine the counts exactly and gate their input") {
  Rng rng(45, 54, 0);
  const int n = 6;
  const double h = hand_harmonic(n - 1);
  double te1 = 0.0, te2 = 0.0, fu = 0.0, fv = 0.0;
  tajima_constants(n, te1, te2);
  fu_li_constants(n, fu, fv);

  for (int i = 0; i < 50; ++i) {
    const auto path = simulate_lambda(LambdaMeasure::kingman(), n, kNoHorizon, rng);
    const auto stats = sample_statistics(overlay_mutations(path, 2.0, rng));
    const auto result = d_statistics(stats);
    const double s = double(stats.s_n);
    CHECK(result.tajima_numerator ==
          doctest::Approx(stats.delta_n - s / h).epsilon(1e-12));
    CHECK(result.fu_li_numerator ==
          doctest::Approx(s - h * double(stats.eta_e)).epsilon(1e-12));
    // Equivalent internal/external form of the same numerator.
    CHECK(result.fu_li_numerator ==
          doctest::Approx(double(stats.eta_i) - (h - 1.0) * double(stats.eta_e))
              .epsilon(1e-9));
    if (stats.s_n > 0) {
      REQUIRE(result.tajima_d.has_value());
      REQUIRE(result.fu_li_d.has_value());
      CHECK(*result.tajima_d ==
            doctest::Approx(result.tajima_numerator /
                            std::sqrt(te1 * s + te2 * s * (s - 1.0)))
                .epsilon(1e-12));
      CHECK(*result.fu_li_d ==
            doctest::Approx(result.fu_li_numerator /
                            std::sqrt(fu * s + fv * s * s))
                .epsilon(1e-12));
    } else {
      CHECK_FALSE(result.tajima_d.has_value());
      CHECK_FALSE(result.fu_li_d.has_value());
    }
  }

  // Injected constants replace the classical denominators.
  SampleStats stats;
  stats.n = n;
  stats.theta = 1.0;
  stats.s_n = 10;
  stats.delta_n = 3.0;
  stats.eta_e = 4;
  stats.eta_i = 6;
  DStatConfig custom;
  custom.tajima_e1 = 0.5;
  custom.tajima_e2 = 0.25;
  custom.fu_li_u = 0.125;
  custom.fu_li_v = 0.0625;
  const auto result = d_statistics(stats, custom);
  CHECK(*result.tajima_d ==
        doctest::Approx(result.tajima_numerator /
                        std::sqrt(0.5 * 10.0 + 0.25 * 10.0 * 9.0))
            .epsilon(1e-12));
  CHECK(*result.fu_li_d ==
        doctest::Approx(result.fu_li_numerator /
                        std::sqrt(0.125 * 10.0 + 0.0625 * 100.0))
            .epsilon(1e-12));

  // Small samples carry numerators but no normalized statistic.
  SampleStats small = stats;
  small.n = 3;
  CHECK_THROWS_AS(d_statistics(small), std::invalid_argument);
  DStatConfig raw;
  raw.normalize = false;
  CHECK_NOTHROW(d_statistics(small, raw));
  SampleStats lone = stats;
  lone.n = 1;
  CHECK_THROWS_AS(d_statistics(lone, raw), std::invalid_argument);

  SampleStats empty;
  empty.n = 6;
  const auto no_sites = d_statistics(empty);
  CHECK(no_sites.tajima_numerator == 0.0);
  CHECK(no_sites.fu_li_numerator == 0.0);
  CHECK_FALSE(no_sites.tajima_d.has_value());
  CHECK_FALSE(no_sites.fu_li_d.has_value());
}

TEST_CASE("numerator means: zero at the pairwise baseline, negative under sweeps") {
  Rng rng(46, 55, 0);
  {
    const int n = 10;
    const double theta = 1.5;
    const int reps = 40000;
    double t_mean = 0.0, t_m2 = 0.0, f_mean = 0.0, f_m2 = 0.0;
    for (int i = 0; i < reps; ++i) {
      const auto path = simulate_lambda(LambdaMeasure::kingman(), n, kNoHorizon, rng);
      const auto stats = sample_statistics(overlay_mutations(path, theta, rng));
      DStatConfig raw;
      raw.normalize = false;
      const auto result = d_statistics(stats, raw);
      double delta = result.tajima_numerator - t_mean;
      t_mean += delta / (i + 1);
      t_m2 += delta * (result.tajima_numerator - t_mean);
      delta = result.fu_li_numerator - f_mean;
      f_mean += delta / (i + 1);
      f_m2 += delta * (result.fu_li_numerator - f_mean);
    }
    CHECK(std::abs(t_mean) < 5.0 * std::sqrt(t_m2 / (reps - 1) / reps));
    CHECK(std::abs(f_mean) < 5.0 * std::sqrt(f_m2 / (reps - 1) / reps));
  }

  // A heavy family-frequency atom starves pairwise differences relative to
  // mutation counts and piles mutations onto external branches: both
  // numerators drop below zero.
  {
    const LambdaMeasure sweepy{1.0, {{0.5, 3.0}}, {}};
    EnsembleConfig config;
    config.master_seed = 4646;
    config.reps = 4000;
    const auto ensemble = sample_stat_ensemble(sweepy, 100, 2.0, config);
    REQUIRE(ensemble.size() == config.reps);
    double t_mean = 0.0, t_m2 = 0.0, f_mean = 0.0, f_m2 = 0.0;
    int i = 0;
    for (const auto& stats : ensemble) {
      DStatConfig raw;
      raw.normalize = false;
      const auto result = d_statistics(stats, raw);
      double delta = result.tajima_numerator - t_mean;
      t_mean += delta / (i + 1);
      t_m2 += delta * (result.tajima_numerator - t_mean);
      delta = result.fu_li_numerator - f_mean;
      f_mean += delta / (i + 1);
      f_m2 += delta * (result.fu_li_numerator - f_mean);
      ++i;
    }
    const long reps = long(config.reps);
    CHECK(t_mean + 5.0 * std::sqrt(t_m2 / (reps - 1) / reps) < 0.0);
    CHECK(f_mean + 5.0 * std::sqrt(f_m2 / (reps - 1) / reps) < 0.0);
  }
}

TEST_CASE("external branch deficit: ladder agreement and decay in n") {
  Rng rng(47, 56, 0);
  const auto flat = external_branch_deficit(LambdaMeasure::kingman(), 8, 15000, rng);
  CHECK(std::abs(flat.value) < 5.0 * flat.se);

  const LambdaMeasure measure{1.0, {{0.4, 0.8}}, {}};
  double prev = 2.0;
  for (int n : {10, 20, 40}) {
    const double deficit = 2.0 - expected_external_length(measure, n);
    CAPTURE(n);
    CHECK(deficit > 0.0);
    CHECK(deficit < prev);
    prev = deficit;
  }

  const auto mc = external_branch_deficit(measure, 12, 20000, rng);
  const double exact = 2.0 - expected_external_length(measure, 12);
  CHECK(std::abs(mc.value - exact) < 5.0 * mc.se);
}

TEST_CASE("the block-size kernel matches the reference pipeline and the ladder") {
  const LambdaMeasure measure{1.0, {{0.5, 0.8}}, {}};
  const int n = 6;
  const double theta = 1.2;
  const double exact_s = expected_segregating(measure, theta, n);
  const double exact_d = theta / 1.8;
  const double exact_ext = expected_external_length(measure, n);

  EnsembleConfig config;
  config.master_seed = 777;
  config.reps = 30000;
  const auto ensemble = sample_stat_ensemble(measure, n, theta, config);
  double ks_mean = 0.0, ks_m2 = 0.0, kd_mean = 0.0, kd_m2 = 0.0, ke_mean = 0.0,
         ke_m2 = 0.0;
  int i = 0;
  for (const auto& stats : ensemble) {
    REQUIRE(stats.n == n);
    REQUIRE(stats.s_n == stats.eta_e + stats.eta_i);
    double delta = double(stats.s_n) - ks_mean;
    ks_mean += delta / (i + 1);
    ks_m2 += delta * (double(stats.s_n) - ks_mean);
    delta = stats.delta_n - kd_mean;
    kd_mean += delta / (i + 1);
    kd_m2 += delta * (stats.delta_n - kd_mean);
    delta = stats.external_length - ke_mean;
    ke_mean += delta / (i + 1);
    ke_m2 += delta * (stats.external_length - ke_mean);
    ++i;
  }
  const double reps = double(config.reps);
  const double ks_se = std::sqrt(ks_m2 / (reps - 1) / reps);
  const double kd_se = std::sqrt(kd_m2 / (reps - 1) / reps);
  const double ke_se = std::sqrt(ke_m2 / (reps - 1) / reps);
  CHECK(std::abs(ks_mean - exact_s) < 5.0 * ks_se);
  CHECK(std::abs(kd_mean - exact_d) < 5.0 * kd_se);
  CHECK(std::abs(ke_mean - exact_ext) < 5.0 * ke_se);

  // Reference pipeline on the same law.
  Rng rng(48, 57, 0);
  double rs_mean = 0.0, rs_m2 = 0.0;
  const int ref_reps = 30000;
  for (int j = 0; j < ref_reps; ++j) {
    const auto path = simulate_lambda(measure, n, kNoHorizon, rng);
    const auto stats = sample_statistics(overlay_mutations(path, theta, rng));
    const double delta = double(stats.s_n) - rs_mean;
    rs_mean += delta / (j + 1);
    rs_m2 += delta * (double(stats.s_n) - rs_mean);
  }
  const double rs_se = std::sqrt(rs_m2 / (ref_reps - 1) / ref_reps);
  CHECK(std::abs(ks_mean - rs_mean) < 5.0 * std::sqrt(ks_se * ks_se + rs_se * rs_se));
}

TEST_CASE("the ensemble is byte-stable across execution policies") {
  const LambdaMeasure measure{1.0, {{0.6, 0.5}}, {}};
  EnsembleConfig serial;
  serial.master_seed = 99;
  serial.reps = 2000;
  serial.policy = ExecutionPolicy::serial;
  EnsembleConfig parallel = serial;
  parallel.policy = ExecutionPolicy::parallel;
  parallel.threads = 3;

  const auto a = sample_stat_ensemble(measure, 8, 1.0, serial);
  const auto b = sample_stat_ensemble(measure, 8, 1.0, parallel);
  const auto c = sample_stat_ensemble(measure, 8, 1.0, serial);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].s_n == b[i].s_n);
    CHECK(a[i].delta_n == b[i].delta_n);
    CHECK(a[i].eta_e == b[i].eta_e);
    CHECK(a[i].eta_i == b[i].eta_i);
    CHECK(a[i].external_length == b[i].external_length);
    CHECK(a[i].internal_length == b[i].internal_length);
    CHECK(a[i].s_n == c[i].s_n);
    CHECK(a[i].delta_n == c[i].delta_n);
  }

  // Measures the kernel cannot drive are rejected up front.
  LambdaMeasure diverging = LambdaMeasure::kingman();
  Density table;
  table.form = Density::Form::table;
  table.xs = {0.0, 0.5};
  table.hs = {1.0};
  diverging.densities.push_back(table);
  EnsembleConfig small;
  small.reps = 2;
  CHECK_THROWS_AS(sample_stat_ensemble(diverging, 4, 1.0, small),
                  std::invalid_argument);
  const LambdaMeasure zero{0.0, {}, {}};
  CHECK_THROWS_AS(sample_stat_ensemble(zero, 4, 1.0, small), std::invalid_argument);
}
