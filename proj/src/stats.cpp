#include "sweepcoal/stats.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace sweepcoal {

namespace {

// Visits every (interval, block) piece of the path in order. The final
// interval runs to end_time, which is zero-length for an absorbed path and
// covers the clipped stretch of a truncated one.
template <typename Visit>
void for_each_segment(const GenealogyPath& path, Visit&& visit) {
  for (std::size_t i = 0; i < path.transitions.size(); ++i) {
    const double t0 = path.transitions[i].first;
    const double t1 = (i + 1 < path.transitions.size())
                          ? path.transitions[i + 1].first
                          : path.end_time;
    const double len = t1 - t0;
    if (len <= 0.0) continue;
    const Partition& state = path.transitions[i].second;
    if (state.is_single_block()) continue;  // root reached: nothing segregates
    for (int size : state.block_sizes()) visit(len, size);
  }
}

void require_complete(const GenealogyPath& path, bool allow_truncated,
                      const char* who) {
  if (!path.absorbed && !allow_truncated)
    throw std::invalid_argument(std::string(who) +
                                ": genealogy is incomplete (clipped before its "
                                "root); pass allow_truncated to accept it");
}

}  // namespace

MutatedGenealogy overlay_mutations(const GenealogyPath& path, double theta,
                                   Rng& rng, bool allow_truncated) {
  if (!(theta >= 0.0))
    throw std::invalid_argument("overlay_mutations: theta must be >= 0");
  require_complete(path, allow_truncated, "overlay_mutations");
  MutatedGenealogy out;
  out.n = path.n;
  out.theta = theta;
  out.truncated = !path.absorbed;
  for_each_segment(path, [&](double len, int size) {
    BranchSegment seg;
    seg.length = len;
    seg.block_size = size;
    const double mean = 0.5 * theta * len;
    if (mean > 0.0)
      seg.mutations = std::poisson_distribution<long>(mean)(rng);
    out.segments.push_back(seg);
  });
  return out;
}

BranchLengths path_branch_lengths(const GenealogyPath& path,
                                  bool allow_truncated) {
  require_complete(path, allow_truncated, "path_branch_lengths");
  BranchLengths out;
  for_each_segment(path, [&](double len, int size) {
    if (size == 1)
      out.external += len;
    else
      out.internal += len;
  });
  return out;
}

double element_singleton_duration(const GenealogyPath& path, int element) {
  if (element < 1 || element > path.n)
    throw std::invalid_argument("element_singleton_duration: element out of range");
  for (const auto& [time, state] : path.transitions)
    if (state.block_sizes()[state.block_of(element)] >= 2) return time;
  return path.end_time;  // still a singleton when the path ended
}

SampleStats sample_statistics(const MutatedGenealogy& genealogy) {
  SampleStats out;
  out.n = genealogy.n;
  out.theta = genealogy.theta;
  double pair_weighted = 0.0;
  for (const BranchSegment& seg : genealogy.segments) {
    out.s_n += seg.mutations;
    if (seg.block_size == 1) {
      out.eta_e += seg.mutations;
      out.external_length += seg.length;
    } else {
      out.eta_i += seg.mutations;
      out.internal_length += seg.length;
    }
    // a mutation on a branch subtending m leaves separates m*(n-m) pairs
    pair_weighted += double(seg.mutations) * double(seg.block_size) *
                     double(genealogy.n - seg.block_size);
  }
  if (genealogy.n >= 2)
    out.delta_n = pair_weighted / (0.5 * genealogy.n * (genealogy.n - 1));
  return out;
}

double harmonic(int m) {
  double h = 0.0;
  for (int i = m; i >= 1; --i) h += 1.0 / i;
  return h;
}

void tajima_constants(int n, double& e1, double& e2) {
  if (n < 4) throw std::invalid_argument("tajima_constants: n must be >= 4");
  double a1 = 0.0, a2 = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    a1 += 1.0 / i;
    a2 += 1.0 / (double(i) * i);
  }
  const double b1 = (n + 1.0) / (3.0 * (n - 1.0));
  const double b2 = 2.0 * (n * double(n) + n + 3.0) / (9.0 * n * (n - 1.0));
  const double c1 = b1 - 1.0 / a1;
  const double c2 = b2 - (n + 2.0) / (a1 * n) + a2 / (a1 * a1);
  e1 = c1 / a1;
  e2 = c2 / (a1 * a1 + a2);
}

void fu_li_constants(int n, double& u, double& v) {
  if (n < 4) throw std::invalid_argument("fu_li_constants: n must be >= 4");
  double a = 0.0, b = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    a += 1.0 / i;
    b += 1.0 / (double(i) * i);
  }
  const double c = 2.0 * (n * a - 2.0 * (n - 1.0)) / ((n - 1.0) * (n - 2.0));
  v = 1.0 + (a * a / (b + a * a)) * (c - (n + 1.0) / (n - 1.0));
  u = a - 1.0 - v;
}

DStatResult d_statistics(const SampleStats& stats, const DStatConfig& config) {
  if (stats.n < 2)
    throw std::invalid_argument("d_statistics: need a sample of size >= 2");
  if (config.normalize && stats.n < 4)
    throw std::invalid_argument(
        "d_statistics: normalized statistics need a sample of size >= 4");
  const double h = harmonic(stats.n - 1);
  DStatResult out;
  out.tajima_numerator = stats.delta_n - double(stats.s_n) / h;
  out.fu_li_numerator = double(stats.s_n) - h * double(stats.eta_e);
  if (!config.normalize || stats.s_n == 0) return out;  // D undefined at S == 0

  const double s = double(stats.s_n);
  double e1, e2;
  if (config.tajima_e1 && config.tajima_e2) {
    e1 = *config.tajima_e1;
    e2 = *config.tajima_e2;
  } else {
    tajima_constants(stats.n, e1, e2);
  }
  out.tajima_d = out.tajima_numerator / std::sqrt(e1 * s + e2 * s * (s - 1.0));

  double u, v;
  if (config.fu_li_u && config.fu_li_v) {
    u = *config.fu_li_u;
    v = *config.fu_li_v;
  } else {
    fu_li_constants(stats.n, u, v);
  }
  out.fu_li_d = out.fu_li_numerator / std::sqrt(u * s + v * s * s);
  return out;
}

}  // namespace sweepcoal
