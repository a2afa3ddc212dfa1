#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sweepcoal/genealogy.hpp"
#include "sweepcoal/rng.hpp"

namespace sweepcoal {

// One maximal piece of tree branch over which the carrying block is constant.
// A lineage of the tree is the disjoint union of such segments, so every
// additive branch functional (total length, external length, mutation count)
// is exact when accumulated segment by segment.
struct BranchSegment {
  double length = 0.0;   // duration of the inter-event interval
  int block_size = 0;    // leaves subtended by this branch piece
  long mutations = 0;    // Poisson marks dropped on this piece
};

struct MutatedGenealogy {
  int n = 0;
  double theta = 0.0;
  bool truncated = false;  // tree was clipped at a horizon before its root
  std::vector<BranchSegment> segments;
};

// Drops mutations on a genealogy at rate theta/2 per unit branch length.
// A path that never reached its root describes an incomplete tree; callers
// must opt in explicitly before statistics are computed from one.
MutatedGenealogy overlay_mutations(const GenealogyPath& path, double theta,
                                   Rng& rng, bool allow_truncated = false);

struct BranchLengths {
  double external = 0.0;  // total length carried by singleton blocks
  double internal = 0.0;  // total length carried by blocks of size >= 2
};

// Branch-length split of a path; mutation-free companion of overlay_mutations.
BranchLengths path_branch_lengths(const GenealogyPath& path,
                                  bool allow_truncated = false);

// Time for which `element` (1-based) remains in a singleton block.
double element_singleton_duration(const GenealogyPath& path, int element);

struct SampleStats {
  int n = 0;
  double theta = 0.0;
  long s_n = 0;            // segregating sites
  double delta_n = 0.0;    // mean pairwise differences over unordered pairs
  long eta_e = 0;          // mutations on external branches (singletons)
  long eta_i = 0;          // mutations on internal branches
  double external_length = 0.0;
  double internal_length = 0.0;
};

SampleStats sample_statistics(const MutatedGenealogy& genealogy);

// Normalization constants for the D statistics. The defaults reproduce the
// classical variance-based denominators (Tajima 1989; Fu & Li 1993 with
// outgroup, in the corrected form); alternative sets can be injected for
// models where those constants are known to be miscalibrated.
struct DStatConfig {
  bool normalize = true;  // false: report numerators only
  // Tajima denominator sqrt(e1*S + e2*S*(S-1)); computed from n when unset.
  std::optional<double> tajima_e1;
  std::optional<double> tajima_e2;
  // Fu-Li denominator sqrt(u*S + v*S^2); computed from n when unset.
  std::optional<double> fu_li_u;
  std::optional<double> fu_li_v;
};

struct DStatResult {
  double tajima_numerator = 0.0;      // Delta_n - S_n / h_{n-1}
  double fu_li_numerator = 0.0;       // S_n - h_{n-1} * eta_e
  std::optional<double> tajima_d;     // absent when S_n == 0
  std::optional<double> fu_li_d;      // absent when S_n == 0
};

// pre: stats.n >= 2 for the numerators, >= 4 for the normalized statistics.
DStatResult d_statistics(const SampleStats& stats, const DStatConfig& config = {});

// Harmonic number h_m = sum_{i=1}^m 1/i.
double harmonic(int m);

// Classical denominator constants, exposed so tests can pin them.
void tajima_constants(int n, double& e1, double& e2);
void fu_li_constants(int n, double& u, double& v);

}  // namespace sweepcoal
