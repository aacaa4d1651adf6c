#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "polyreach/lp.hpp"

namespace polyreach {

// Bounding box added around the Chebyshev LP when the polyhedron may be
// unbounded, and the row-count cap for Fourier-Motzkin elimination.
inline constexpr double kChebyshevBoxBound = 1e6;
inline constexpr int kEliminationRowCap = 10000;

// H-representation polyhedron { x | A x <= b, E x = f }. Both constraint
// blocks may have zero rows; a zero-row polyhedron is the universe. Values
// are immutable after construction in all library code paths.
struct Polyhedron {
  Eigen::MatrixXd ineq_lhs;  // rows x dim
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_lhs;    // zero rows when no equalities
  Eigen::VectorXd eq_rhs;

  Polyhedron() = default;
  Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b);
  Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::MatrixXd E,
             Eigen::VectorXd f);

  static Polyhedron universe(Eigen::Index dim);
  static Polyhedron empty_set(Eigen::Index dim);
  static Polyhedron box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

  Eigen::Index dim() const { return ineq_lhs.cols(); }
  Eigen::Index num_inequalities() const { return ineq_lhs.rows(); }
  Eigen::Index num_equalities() const { return eq_lhs.rows(); }

  // x is a member iff every row holds within tol scaled by the row norm.
  bool contains(const Eigen::VectorXd& x, double tol = kTol) const;
  // Largest row-scaled constraint violation at x (<= 0 inside).
  double violation(const Eigen::VectorXd& x) const;
};

// Union of same-dimension polyhedra; an empty piece list denotes the empty set.
struct UnionOfPolyhedra {
  std::vector<Polyhedron> pieces;

  UnionOfPolyhedra() = default;
  explicit UnionOfPolyhedra(Eigen::Index dim) : dim_(dim) {}
  UnionOfPolyhedra(Eigen::Index dim, std::vector<Polyhedron> ps);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return pieces.size(); }
  bool contains(const Eigen::VectorXd& x, double tol = kTol) const;

 private:
  Eigen::Index dim_ = 0;
};

// The set { map x + offset | x in domain }: an affine image of a polyhedron
// kept unprojected (a star set). Empty iff the domain is empty.
struct AffineRegion {
  Eigen::MatrixXd map;     // out_dim x in_dim
  Eigen::VectorXd offset;  // out_dim
  Polyhedron domain;       // dim == in_dim

  AffineRegion() = default;
  AffineRegion(Eigen::MatrixXd m, Eigen::VectorXd c, Polyhedron d);

  static AffineRegion identity(Polyhedron d);

  Eigen::Index in_dim() const { return map.cols(); }
  Eigen::Index out_dim() const { return map.rows(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return map * x + offset; }

  // Post-composition with y -> m y + c; same domain.
  AffineRegion compose(const Eigen::MatrixXd& m, const Eigen::VectorXd& c) const;
};

struct LpOutcome {
  bool feasible = false;
  std::optional<Eigen::VectorXd> witness;
};

// Feasibility of { x | A x <= b, E x = f }. Row order does not matter.
LpOutcome lp_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                      const Eigen::MatrixXd& E, const Eigen::VectorXd& f);

bool is_empty(const Polyhedron& p);

struct InteriorPointResult {
  Eigen::VectorXd point;
  double radius = 0.0;      // inscribed-ball radius within the equality subspace
  bool box_clamped = false; // true when the +-kChebyshevBoxBound box was active
};

// Chebyshev center over the inequality rows, restricted to the equality
// subspace. Returns any feasible point for zero-volume polyhedra.
InteriorPointResult interior_point(const Polyhedron& p);

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q);

// Drops every inequality row implied by the others (one LP per row). The
// point set is preserved; `slack` shifts the redundancy threshold: rows are
// dropped when max over the remaining rows is <= rhs + slack. Negative slack
// keeps weakly redundant rows, which never enlarges the set.
Polyhedron remove_redundancy(const Polyhedron& p, double slack = kTol);

// { x | (M x + c) in p }, expressed directly over the x variables.
Polyhedron affine_preimage_constraints(const Polyhedron& p,
                                       const Eigen::MatrixXd& M,
                                       const Eigen::VectorXd& c);

// Explicit H-representation of the image set: introduces y = M x + c and
// eliminates x (equality pivots first, then Fourier-Motzkin with redundancy
// removal after each step). Throws EliminationBlowup past row_cap rows.
Polyhedron region_to_polyhedron(const AffineRegion& r,
                                int row_cap = kEliminationRowCap);

// Counter-clockwise vertex list of a bounded 2-D polyhedron, starting at the
// lexicographically smallest vertex. Degenerate sets give 1 or 2 points.
std::vector<Eigen::Vector2d> vertices_2d(const Polyhedron& p);

// max direction.x over p.
LpSolution maximize_over(const Polyhedron& p, const Eigen::VectorXd& direction);

// Componentwise [lo, hi] bounds; throws Unbounded / EmptyPolyhedron.
std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const Polyhedron& p);

}  // namespace polyreach
