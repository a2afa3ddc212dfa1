// Partition mechanics and the two-coin family law, checked against
// independently computed oracles: direct containment/union-find reimplementations
// for refines/coagulate, closed-form probabilities for the coin laws, and
// known Bell counts for the enumeration.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "sweepcoal/partition.hpp"
#include "sweepcoal/partition_dist.hpp"
#include "sweepcoal/rng.hpp"

using namespace sweepcoal;

namespace {

// Independent containment oracle: pi refines rho iff each pi-block sits
// inside one rho-block.
bool refines_oracle(const Partition& pi, const Partition& rho) {
  for (const auto& block : pi.blocks()) {
    const int target = rho.block_of(block.front());
    for (int e : block)
      if (rho.block_of(e) != target) return false;
  }
  return true;
}

// Independent coagulation oracle via union-find over the elements of pi.
Partition coagulate_oracle(const Partition& pi, const Partition& grouping) {
  const int n = pi.size();
  std::vector<int> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  // join elements within pi blocks
  for (const auto& block : pi.blocks())
    for (std::size_t i = 1; i < block.size(); ++i) unite(block[i], block[0]);
  // join pi blocks (numbered by least element, 1-based) per grouping
  const auto blocks = pi.blocks();  // least-element order
  for (int i = 1; i <= int(blocks.size()); ++i)
    for (int j = i + 1; j <= int(blocks.size()); ++j)
      if (grouping.block_of(i) == grouping.block_of(j))
        unite(blocks[i - 1][0], blocks[j - 1][0]);
  std::vector<int> labels(n);
  for (int e = 1; e <= n; ++e) labels[e - 1] = find(e) - 1;
  return Partition::from_labels(labels);
}

}  // namespace

TEST_CASE("enumeration matches Bell numbers and is duplicate-free") {
  const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (int n = 1; n <= 8; ++n) {
    auto all = enumerate_partitions(n);
    CHECK(all.size() == bell[n]);
    CHECK(bell_number(n) == bell[n]);
    std::set<Partition> uniq(all.begin(), all.end());
    CHECK(uniq.size() == all.size());
    for (const auto& p : all) CHECK(p.size() == n);
  }
}

TEST_CASE("construction, canonical form, and round trips") {
  const Partition p = Partition::from_blocks(5, {{3, 1}, {2, 5}, {4}});
  CHECK(p.block_count() == 3);
  CHECK(p.block_of(1) == p.block_of(3));
  CHECK(p.block_of(2) == p.block_of(5));
  CHECK(p.block_of(4) != p.block_of(1));
  CHECK(p.block_sizes() == std::vector<int>{2, 2, 1});
  CHECK(Partition::parse(p.to_string()) == p);
  CHECK(Partition::from_labels(p.labels()) == p);

  CHECK(Partition::singletons(4).is_singletons());
  CHECK(Partition::single_block(4).is_single_block());
  CHECK(Partition::singletons(1).is_single_block());

  for (const auto& q : enumerate_partitions(6)) {
    CHECK(Partition::parse(q.to_string()) == q);
    CHECK(Partition::from_blocks(6, q.blocks()) == q);
  }
}

TEST_CASE("refines agrees with the containment oracle exhaustively at n = 4") {
  const auto all = enumerate_partitions(4);
  for (const auto& p : all)
    for (const auto& q : all) CHECK(p.refines(q) == refines_oracle(p, q));
}

TEST_CASE("coagulate agrees with the union-find oracle exhaustively at n = 4") {
  const auto all = enumerate_partitions(4);
  for (const auto& p : all) {
    const auto groupings = enumerate_partitions(p.block_count());
    for (const auto& g : groupings)
      CHECK(coagulate(p, g) == coagulate_oracle(p, g));
  }
}

TEST_CASE("coagulate respects identity and full grouping") {
  for (const auto& p : enumerate_partitions(5)) {
    CHECK(coagulate(p, Partition::singletons(p.block_count())) == p);
    CHECK(coagulate(p, Partition::single_block(p.block_count())) ==
          Partition::single_block(5));
  }
}

TEST_CASE("relabeling preserves the block-size profile") {
  Rng rng(11, 0, 0);
  for (const auto& p : enumerate_partitions(5)) {
    std::vector<int> sigma(5);
    std::iota(sigma.begin(), sigma.end(), 1);
    for (int i = 4; i > 0; --i)
      std::swap(sigma[i], sigma[rng.uniform_below(std::uint64_t(i + 1))]);
    auto a = p.block_sizes();
    auto b = relabeled(p, sigma).block_sizes();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("codes are unique across partitions of one n") {
  for (int n = 1; n <= 8; ++n) {
    std::set<std::uint64_t> codes;
    for (const auto& p : enumerate_partitions(n)) codes.insert(p.code());
    CHECK(codes.size() == bell_number(n));
  }
}

TEST_CASE("two-coin law pins closed-form probabilities") {
  // At heads-probability p the merged family is the head set when it has
  // >= 2 elements; a specific pair partition carries p^2 (1-p)^(n-2).
  const auto law3 = two_coin_law(0.5, 3);
  law3.validate();
  CHECK(law3.prob(Partition::from_blocks(3, {{1, 2}, {3}})) ==
        doctest::Approx(0.125).epsilon(1e-12));
  CHECK(law3.prob(Partition::single_block(3)) ==
        doctest::Approx(0.125).epsilon(1e-12));
  // all-singletons collects the empty, single-head, and no other outcomes
  CHECK(law3.prob(Partition::singletons(3)) ==
        doctest::Approx(0.125 + 3 * 0.125).epsilon(1e-12));

  const auto law4 = two_coin_law(0.3, 4);
  law4.validate();
  CHECK(law4.prob(Partition::from_blocks(4, {{2, 4}, {1}, {3}})) ==
        doctest::Approx(0.09 * 0.49).epsilon(1e-12));
}

TEST_CASE("tv distance between two-coin laws: frozen boundary value") {
  // n = 2: merge probabilities p^2, so laws at p = 0.5 and p = 1 sit at
  // distance |0.25 - 1| = 0.75.
  CHECK(tv_distance(two_coin_law(0.5, 2), two_coin_law(1.0, 2)) ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(tv_distance(two_coin_law(0.3, 4), two_coin_law(0.3, 4)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two-coin sampler matches its exact law in TV") {
  Rng rng(2024, 0, 0);
  const double p = 0.3;
  const int n = 4;
  PartitionCounter counter(n);
  const int reps = 40000;
  for (int i = 0; i < reps; ++i) counter.add(sample_two_coin(p, n, rng));
  const auto ref = two_coin_law(p, n);
  const double tv = tv_distance(counter.distribution(), ref);
  const double se = tv_bootstrap_se(counter, ref, 200, rng);
  CHECK(tv < 5.0 * se + 1e-3);
}

TEST_CASE("two-coin sampler is exchangeable: pair partitions equally likely") {
  Rng rng(7, 0, 0);
  const int n = 4, reps = 60000;
  std::map<Partition, long> pair_counts;
  long pair_total = 0;
  for (int i = 0; i < reps; ++i) {
    const Partition pi = sample_two_coin(0.4, n, rng);
    auto sizes = pi.block_sizes();
    std::sort(sizes.begin(), sizes.end());
    if (sizes == std::vector<int>{1, 1, 2}) {
      ++pair_counts[pi];
      ++pair_total;
    }
  }
  CHECK(pair_counts.size() == 6);  // all six pairs appear
  const double expect = double(pair_total) / 6.0;
  double chi2 = 0.0;
  for (const auto& [pi, c] : pair_counts)
    chi2 += (double(c) - expect) * (double(c) - expect) / expect;
  CHECK(chi2 < 20.5);  // chi-square_5 at the 0.1% level
}
