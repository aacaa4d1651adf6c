#pragma once

#include <optional>

#include "polyreach/reach.hpp"

namespace polyreach {

enum class SafetyKind { kUnsafeGiven, kSafeGiven };

// Output-space safety specification. For kUnsafeGiven the pieces are the
// unsafe region itself; for kSafeGiven a single safe polyhedron is given and
// the checked region is its closed complement (one piece per row).
struct SafetySpec {
  SafetyKind kind = SafetyKind::kUnsafeGiven;
  UnionOfPolyhedra pieces;

  UnionOfPolyhedra unsafe_region() const;
};

struct Counterexample {
  Eigen::VectorXd input;
  Eigen::VectorXd output;
  std::size_t region_index = 0;
  std::size_t piece_index = 0;
};

struct Verdict {
  bool safe = true;
  std::optional<Counterexample> counterexample;  // present iff unsafe
  std::size_t checked_pairs = 0;  // canonical scan length up to the first hit
  ReachStats reach_stats;
};

// Computes the output reach set and intersects every region with every
// unsafe piece (region-major scan order). UNSAFE returns the first feasible
// pair in canonical order together with a concrete witness input.
Verdict verify_network(const Network& net, const UnionOfPolyhedra& x0,
                       const SafetySpec& spec, const ReachOptions& options = {});

// { y | max_i |y_i - center_i| <= radius } as a 2n-row polyhedron.
SafetySpec unsafe_from_infinity_ball(const Eigen::VectorXd& center, double radius);

// Closed complement of an inequality-only polyhedron: one piece per row.
// Boundary points belong to both the polyhedron and its complement.
UnionOfPolyhedra complement_of_polyhedron(const Polyhedron& p);

}  // namespace polyreach
