#pragma once

#include <Eigen/Dense>

namespace polyreach {

// Global numeric tolerance for LP pivoting and membership tests.
inline constexpr double kTol = 1e-9;

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd point;   // valid when status != kInfeasible
  double objective = 0.0;  // c.dot(point) when optimal
};

// Solves   max c.x   subject to   A x <= b,  E x = f,  x free.
//
// Dense two-phase tableau simplex over the split x = u - v. Pivoting uses
// Dantzig's rule and falls back to Bland's rule once degenerate pivots pile
// up, so degenerate bases cannot cycle. A and E may have zero rows.
LpSolution lp_maximize(const Eigen::VectorXd& objective,
                       const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       const Eigen::MatrixXd& E, const Eigen::VectorXd& f);

// Phase-1 only: find any point with A x <= b, E x = f, or report infeasible.
LpSolution lp_find_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            const Eigen::MatrixXd& E, const Eigen::VectorXd& f);

}  // namespace polyreach
