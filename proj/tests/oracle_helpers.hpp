#pragma once

// Brute-force oracles used to cross-check the geometry kernel. Everything in
// here is deliberately independent of the simplex implementation: candidate
// vertices come from solving small dense linear systems and feasibility is
// decided by direct constraint evaluation.

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "polyreach/geometry.hpp"

namespace test_oracle {

inline bool satisfies_all(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                          const Eigen::VectorXd& x, double tol = 1e-7) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (A.row(i).dot(x) > b(i) + tol * (1.0 + A.row(i).norm())) return false;
  for (Eigen::Index i = 0; i < E.rows(); ++i)
    if (std::abs(E.row(i).dot(x) - f(i)) > tol * (1.0 + E.row(i).norm())) return false;
  return true;
}

// Exhaustive vertex-candidate feasibility for bounded systems: a bounded
// nonempty polyhedron has a vertex, and every vertex solves some dim-sized
// subset of active constraints (equalities always active).
inline bool vertex_enum_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 const Eigen::MatrixXd& E, const Eigen::VectorXd& f) {
  const Eigen::Index n = A.cols();
  const Eigen::Index me = E.rows();
  if (me >= n) {
    // Equalities alone pin the candidate (or the system is overdetermined).
    Eigen::VectorXd x = E.completeOrthogonalDecomposition().solve(f);
    return satisfies_all(A, b, E, f, x);
  }
  const Eigen::Index need = n - me;
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(need));
  // Enumerate all subsets of inequality rows of size `need`.
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < A.rows(); ++i) rows.push_back(i);
  if (static_cast<Eigen::Index>(rows.size()) < need) return false;

  std::vector<bool> mask(rows.size(), false);
  std::fill(mask.begin(), mask.begin() + need, true);
  do {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    Eigen::Index w = 0;
    for (Eigen::Index i = 0; i < me; ++i) {
      M.row(w) = E.row(i);
      rhs(w) = f(i);
      ++w;
    }
    for (std::size_t k = 0; k < mask.size(); ++k) {
      if (!mask[k]) continue;
      M.row(w) = A.row(rows[k]);
      rhs(w) = b(rows[k]);
      ++w;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.isInvertible()) {
      Eigen::VectorXd x = lu.solve(rhs);
      if (satisfies_all(A, b, E, f, x)) return true;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return false;
}

inline bool vertex_enum_feasible(const polyreach::Polyhedron& p) {
  return vertex_enum_feasible(p.ineq_lhs, p.ineq_rhs, p.eq_lhs, p.eq_rhs);
}

// Andrew monotone chain; returns the CCW hull without repeating the first
// point. Collinear input degenerates to its two extremes.
inline std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                          return (a - b).norm() < 1e-9;
                        }),
            pts.end());
  if (pts.size() <= 2) return pts;

  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                  const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Random bounded polyhedron: a box plus extra random cutting rows. Contains
// the origin-shifted anchor point, so it is never empty.
struct RandomPolyhedron {
  polyreach::Polyhedron poly{Eigen::MatrixXd(0, 1), Eigen::VectorXd(0)};
  Eigen::VectorXd anchor;  // a point guaranteed inside
};

inline RandomPolyhedron random_bounded_polyhedron(std::mt19937_64& rng, int dim,
                                                  int extra_rows,
                                                  bool with_equality = false) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd anchor(dim);
  for (int i = 0; i < dim; ++i) anchor(i) = 0.5 * unit(rng);

  const Eigen::Index m = 2 * dim + extra_rows;
  Eigen::MatrixXd A(m, dim);
  Eigen::VectorXd b(m);
  A.topRows(dim) = Eigen::MatrixXd::Identity(dim, dim);
  A.middleRows(dim, dim) = -Eigen::MatrixXd::Identity(dim, dim);
  for (int i = 0; i < 2 * dim; ++i) b(i) = 2.0;
  for (int r = 0; r < extra_rows; ++r) {
    Eigen::VectorXd row(dim);
    for (int i = 0; i < dim; ++i) row(i) = unit(rng);
    if (row.norm() < 1e-3) row(0) = 1.0;
    A.row(2 * dim + r) = row.transpose();
    // keep the anchor strictly feasible
    b(2 * dim + r) = row.dot(anchor) + 0.05 + 0.5 * std::abs(unit(rng));
  }

  Eigen::MatrixXd E(0, dim);
  Eigen::VectorXd f(0);
  if (with_equality) {
    E.resize(1, dim);
    for (int i = 0; i < dim; ++i) E(0, i) = unit(rng);
    if (E.row(0).norm() < 1e-3) E(0, 0) = 1.0;
    f.resize(1);
    f(0) = E.row(0).dot(anchor);
  }

  RandomPolyhedron out;
  out.poly = polyreach::Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
  out.anchor = anchor;
  return out;
}

// Uniform point in the axis box [-lo, hi]^dim.
inline Eigen::VectorXd random_point(std::mt19937_64& rng, int dim, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x(i) = u(rng);
  return x;
}

// inner is a subset of outer iff every outer constraint is satisfied by the
// whole of inner (one LP per row).
inline bool poly_subset(const polyreach::Polyhedron& inner,
                        const polyreach::Polyhedron& outer, double tol = 1e-7) {
  using polyreach::LpStatus;
  if (polyreach::is_empty(inner)) return true;
  for (Eigen::Index i = 0; i < outer.num_inequalities(); ++i) {
    auto sol = polyreach::maximize_over(inner, outer.ineq_lhs.row(i).transpose());
    if (sol.status != LpStatus::kOptimal) return false;  // unbounded above
    if (sol.objective > outer.ineq_rhs(i) + tol * (1.0 + outer.ineq_lhs.row(i).norm()))
      return false;
  }
  for (Eigen::Index i = 0; i < outer.num_equalities(); ++i) {
    const double slack = tol * (1.0 + outer.eq_lhs.row(i).norm());
    auto up = polyreach::maximize_over(inner, outer.eq_lhs.row(i).transpose());
    auto down = polyreach::maximize_over(inner, -outer.eq_lhs.row(i).transpose());
    if (up.status != LpStatus::kOptimal || down.status != LpStatus::kOptimal)
      return false;
    if (up.objective > outer.eq_rhs(i) + slack) return false;
    if (-down.objective < outer.eq_rhs(i) - slack) return false;
  }
  return true;
}

inline bool poly_set_equal(const polyreach::Polyhedron& a,
                           const polyreach::Polyhedron& b, double tol = 1e-7) {
  return poly_subset(a, b, tol) && poly_subset(b, a, tol);
}

}  // namespace test_oracle
