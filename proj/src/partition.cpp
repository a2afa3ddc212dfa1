#include "sweepcoal/partition.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sweepcoal {

Partition Partition::singletons(int n) {
  if (n < 1) throw std::invalid_argument("partition size must be >= 1");
  Partition p;
  p.block_of_.resize(n);
  for (int i = 0; i < n; ++i) p.block_of_[i] = i;
  p.num_blocks_ = n;
  return p;
}

Partition Partition::single_block(int n) {
  if (n < 1) throw std::invalid_argument("partition size must be >= 1");
  Partition p;
  p.block_of_.assign(n, 0);
  p.num_blocks_ = 1;
  return p;
}

Partition Partition::from_labels(const std::vector<int>& labels) {
  if (labels.empty()) throw std::invalid_argument("partition size must be >= 1");
  Partition p;
  p.block_of_.resize(labels.size());
  std::vector<int> remap(labels.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int raw = labels[i];
    if (raw < 0 || raw >= static_cast<int>(labels.size()))
      throw std::invalid_argument("block label out of range");
    if (remap[raw] < 0) remap[raw] = next++;
    p.block_of_[i] = remap[raw];
  }
  p.num_blocks_ = next;
  return p;
}

Partition Partition::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  if (n < 1) throw std::invalid_argument("partition size must be >= 1");
  std::vector<int> raw(n, -1);
  int label = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("empty block");
    for (int e : block) {
      if (e < 1 || e > n) throw std::invalid_argument("element out of range");
      if (raw[e - 1] != -1) throw std::invalid_argument("element appears twice");
      raw[e - 1] = label;
    }
    ++label;
  }
  for (int i = 0; i < n; ++i)
    if (raw[i] == -1) throw std::invalid_argument("element missing from blocks");
  return from_labels(raw);
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(num_blocks_);
  for (int i = 0; i < size(); ++i) out[block_of_[i]].push_back(i + 1);
  return out;
}

std::vector<int> Partition::block_sizes() const {
  std::vector<int> out(num_blocks_, 0);
  for (int b : block_of_) ++out[b];
  return out;
}

bool Partition::refines(const Partition& coarser) const {
  if (size() != coarser.size()) return false;
  // Each of our blocks must map into a single block of `coarser`.
  std::vector<int> image(num_blocks_, -1);
  for (int i = 0; i < size(); ++i) {
    const int mine = block_of_[i];
    const int theirs = coarser.block_of_[i];
    if (image[mine] == -1) image[mine] = theirs;
    else if (image[mine] != theirs) return false;
  }
  return true;
}

std::uint64_t Partition::code() const {
  std::uint64_t c = 0;
  for (int i = size() - 1; i >= 0; --i) c = c * 13 + static_cast<std::uint64_t>(block_of_[i]);
  return c * 13 + static_cast<std::uint64_t>(size());
}

std::string Partition::to_string() const {
  const auto bs = blocks();
  std::ostringstream out;
  for (std::size_t b = 0; b < bs.size(); ++b) {
    if (b) out << '|';
    for (std::size_t j = 0; j < bs[b].size(); ++j) {
      if (j) out << ',';
      out << bs[b][j];
    }
  }
  return out.str();
}

Partition Partition::parse(const std::string& text) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> cur;
  int n = 0;
  std::string num;
  for (char ch : text + "|") {
    if (ch >= '0' && ch <= '9') {
      num += ch;
    } else if (ch == ',' || ch == '|') {
      if (num.empty()) throw std::invalid_argument("malformed partition string");
      const int e = std::stoi(num);
      cur.push_back(e);
      n = std::max(n, e);
      num.clear();
      if (ch == '|') {
        blocks.push_back(cur);
        cur.clear();
      }
    } else {
      throw std::invalid_argument("malformed partition string");
    }
  }
  return from_blocks(n, blocks);
}

Partition coagulate(const Partition& pi, const Partition& grouping) {
  const int m = pi.block_count();
  if (grouping.size() < m)
    throw std::invalid_argument("grouping partition smaller than block count");
  std::vector<int> raw(pi.size());
  for (int i = 1; i <= pi.size(); ++i)
    raw[i - 1] = grouping.block_of(pi.block_of(i) + 1);
  return Partition::from_labels(raw);
}

Partition relabeled(const Partition& pi, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != pi.size())
    throw std::invalid_argument("relabeling size mismatch");
  std::vector<int> raw(pi.size());
  for (int i = 1; i <= pi.size(); ++i) raw[sigma[i - 1] - 1] = pi.block_of(i);
  return Partition::from_labels(raw);
}

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 1 || n > 12)
    throw std::invalid_argument("partition enumeration supported for 1 <= n <= 12");
  std::vector<Partition> out;
  std::vector<int> labels(n, 0);
  // Depth-first over restricted-growth strings.
  auto rec = [&](auto&& self, int pos, int maxLabel) -> void {
    if (pos == n) {
      out.push_back(Partition::from_labels(labels));
      return;
    }
    for (int lab = 0; lab <= maxLabel + 1 && lab < n; ++lab) {
      labels[pos] = lab;
      self(self, pos + 1, std::max(maxLabel, lab));
    }
  };
  labels[0] = 0;
  rec(rec, 1, 0);
  return out;
}

std::uint64_t bell_number(int n) {
  if (n < 0 || n > 12) throw std::invalid_argument("bell_number supported for n <= 12");
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (std::uint64_t v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

}  // namespace sweepcoal
