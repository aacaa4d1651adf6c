#pragma once

#include <variant>
#include <vector>

#include "polyreach/netmodel.hpp"
#include "polyreach/reach.hpp"

namespace polyreach {

// Grid with a fixed number of points per axis (endpoints included).
struct GridCountStrategy {
  Eigen::Index points_per_axis = 20;
};

// Grid walked by step size from the lower bound (endpoints included when hit).
struct GridStepStrategy {
  double step = 0.05;
};

struct UniformStrategy {
  std::size_t count = 1000;
  std::uint64_t seed = 0;
};

using SampleStrategy =
    std::variant<GridCountStrategy, GridStepStrategy, UniformStrategy>;

// Samples points from every piece of the input set. Grid strategies lay the
// grid over each piece's bounding box and keep the members; uniform sampling
// rejects from the union's bounding box. Throws Unbounded for grids over
// unbounded pieces.
std::vector<Eigen::VectorXd> sample_input_set(const UnionOfPolyhedra& x0,
                                              const SampleStrategy& strategy);

struct SoundnessFailure {
  Eigen::VectorXd input;
  Eigen::VectorXd output;
  double residual = 0.0;
};

struct SoundnessReport {
  std::size_t samples = 0;
  std::size_t failures = 0;
  double max_residual = 0.0;
  std::vector<SoundnessFailure> failure_details;  // capped at 16 entries
};

// Asserts forward(net, x) lies in the reach set for every sample. Failures
// are data, not errors; the report carries them.
SoundnessReport check_soundness(const Network& net, const UnionOfPolyhedra& x0,
                                const ReachSet& reach,
                                const std::vector<Eigen::VectorXd>& samples,
                                double tol = 1e-6);

// Dense forward images over a step grid; ground truth for equivalence tests.
std::vector<Eigen::VectorXd> brute_force_reach(const Network& net,
                                               const UnionOfPolyhedra& x0,
                                               double resolution);

}  // namespace polyreach
