#pragma once

#include <utility>
#include <vector>

#include "polyreach/geometry.hpp"
#include "polyreach/netmodel.hpp"

namespace polyreach {

enum class ReachMode { kPatterns, kNeuronwise };

struct LayerStats {
  std::size_t candidates = 0;  // kept + pruned
  std::size_t kept = 0;
  std::size_t pruned = 0;
  double seconds = 0.0;
};

struct ReachStats {
  std::vector<LayerStats> per_layer;
  double total_seconds = 0.0;
};

// Union over regions of { map x + offset | x in domain }. Domains live in the
// network's input space; maps accumulate the affine form of the network on
// one activation cell. No region has an empty domain.
struct ReachSet {
  std::vector<AffineRegion> regions;
  int layer_index = 0;
  Eigen::Index out_dim = 0;
};

struct ReachOptions {
  ReachMode mode = ReachMode::kNeuronwise;
  int jobs = 0;                // worker count; 0 = all cores, 1 = serial path
  int pattern_cap = kPatternCap;
  std::size_t region_cap = 0;  // abort past this many regions; 0 = unlimited
};

// Exact image of a union of polyhedra under elementwise ReLU, as an explicit
// union of polyhedra (one piece per feasible activation pattern).
UnionOfPolyhedra relu_function_reach(const UnionOfPolyhedra& x,
                                     int pattern_cap = kPatternCap);

// One ReLU layer by full activation-pattern enumeration: each incoming
// region fans out over all 2^n patterns, infeasible candidates are pruned.
// Serial reference implementation.
ReachSet relu_layer_reach_patterns(const Layer& layer, const ReachSet& x,
                                   int pattern_cap = kPatternCap,
                                   LayerStats* stats = nullptr);

// One ReLU layer by per-neuron sign splitting with eager pruning; emits the
// same regions as the patterns mode without materializing the full pattern
// space. Serial reference implementation.
ReachSet relu_layer_reach_neuronwise(const Layer& layer, const ReachSet& x,
                                     LayerStats* stats = nullptr);

// Linear layers only compose the affine maps; the region count is unchanged.
ReachSet linear_layer_reach(const Layer& layer, const ReachSet& x,
                            LayerStats* stats = nullptr);

// Whole-network propagation, seeded with identity regions over the input
// pieces. Regions are processed in parallel (OpenMP) when jobs != 1 and the
// per-layer result is merged in canonical order, so the output is identical
// for every worker count.
std::pair<ReachSet, ReachStats> network_reach(const Network& net,
                                              const UnionOfPolyhedra& x0,
                                              const ReachOptions& options = {});

// Explicit H-representations of every region (Fourier-Motzkin projection).
UnionOfPolyhedra export_hrep(const ReachSet& y, int row_cap = kEliminationRowCap);

// Counter-clockwise vertex lists for 2-D bounded outputs.
std::vector<std::vector<Eigen::Vector2d>> export_polygons_2d(const ReachSet& y);

// LP membership of an output point: some region has z in its domain with
// |map z + offset - y| <= tol componentwise.
bool reach_contains(const ReachSet& y, const Eigen::VectorXd& point,
                    double tol = 1e-6);

// Deterministic total order on regions (lexicographic over map, offset and
// domain rows). Used for the parallel merge.
void canonical_sort(std::vector<AffineRegion>& regions);

}  // namespace polyreach
