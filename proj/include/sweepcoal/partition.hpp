#pragma once
// Set partitions of {1..n} in canonical form.
//
// A partition is stored as its restricted-growth string: element i (1-based)
// carries the index of its block, blocks numbered 0,1,2,... in order of first
// appearance. That form is unique, totally ordered, and cheap to hash, and it
// makes "same partition" exactly "same vector".

#include <cstdint>
#include <string>
#include <vector>

namespace sweepcoal {

class Partition {
 public:
  Partition() = default;

  static Partition singletons(int n);
  static Partition single_block(int n);
  // Blocks may arrive in any order with elements in any order; they must
  // cover {1..n} exactly once. The result is canonicalized.
  static Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks);
  // Directly from a block-index-per-element vector (any labeling; canonicalized).
  static Partition from_labels(const std::vector<int>& labels);

  int size() const { return static_cast<int>(block_of_.size()); }
  int block_count() const { return num_blocks_; }
  // 1-based element -> 0-based canonical block index.
  int block_of(int element) const { return block_of_[element - 1]; }
  const std::vector<int>& labels() const { return block_of_; }

  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_sizes() const;

  bool is_singletons() const { return num_blocks_ == size(); }
  bool is_single_block() const { return num_blocks_ == 1; }

  // True if every block of *this is contained in a block of `coarser`.
  bool refines(const Partition& coarser) const;

  // Compact mixed-radix code; unique for n <= 12 (block indices fit 4 bits).
  std::uint64_t code() const;

  // "1,2|3" style: blocks ordered by least element, '|'-separated.
  std::string to_string() const;
  static Partition parse(const std::string& text);

  friend bool operator==(const Partition& a, const Partition& b) = default;
  friend bool operator<(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.block_of_ < b.block_of_;
  }

 private:
  std::vector<int> block_of_;
  int num_blocks_ = 0;
};

// Merge blocks of `pi` according to `grouping`: blocks of `pi` are labeled
// 1..m by least element, and blocks i,j of `pi` end up together whenever the
// elements i,j of `grouping` share a block. `grouping` must have at least m
// elements; only its restriction to {1..m} matters.
Partition coagulate(const Partition& pi, const Partition& grouping);

// Apply the relabeling sigma (element i -> sigma[i-1]) and recanonicalize.
Partition relabeled(const Partition& pi, const std::vector<int>& sigma);

// All partitions of {1..n} in canonical (restricted-growth) order.
// Guarded at n <= 12 (Bell numbers explode beyond desk scale).
std::vector<Partition> enumerate_partitions(int n);

// Bell number for small n (n <= 12), used by guards and tests.
std::uint64_t bell_number(int n);

}  // namespace sweepcoal
