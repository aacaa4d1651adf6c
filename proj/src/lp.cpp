#include "polyreach/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "polyreach/errors.hpp"

namespace polyreach {
namespace {

// Tableau columns are laid out as [u (n) | v (n) | slacks (mi) | artificials]
// with the right-hand side kept in a separate vector. basis[i] is the column
// currently basic in row i.
struct Tableau {
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;
  std::vector<Eigen::Index> basis;
  Eigen::Index num_real_cols = 0;  // columns excluding artificials
};

constexpr int kDegeneratePivotLimit = 32;
constexpr int kIterationCap = 50000;

// Runs the simplex loop for  min cost.y  over the current tableau. Columns
// with cost = +inf are ineligible (used to lock out artificials in phase 2).
// Returns false when the problem is unbounded below.
bool run_simplex(Tableau& t, const Eigen::VectorXd& cost) {
  const Eigen::Index m = t.rows.rows();
  const Eigen::Index ncols = t.rows.cols();
  int degenerate_streak = 0;
  bool bland = false;

  for (int iter = 0; iter < kIterationCap; ++iter) {
    Eigen::VectorXd cost_basic(m);
    for (Eigen::Index i = 0; i < m; ++i) cost_basic(i) = cost(t.basis[i]);

    // reduced_j = cost_j - cost_B . column_j
    Eigen::VectorXd reduced = cost;
    if (m > 0) reduced -= t.rows.transpose() * cost_basic;

    Eigen::Index entering = -1;
    if (!bland) {
      double best = -kTol;
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (!std::isfinite(cost(j))) continue;
        if (reduced(j) < best) {
          best = reduced(j);
          entering = j;
        }
      }
    } else {
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (!std::isfinite(cost(j))) continue;
        if (reduced(j) < -kTol) {
          entering = j;
          break;
        }
      }
    }
    if (entering < 0) return true;  // optimal

    // Ratio test; ties broken by smallest basis index (Bland-compatible).
    Eigen::Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = t.rows(i, entering);
      if (a <= kTol) continue;
      const double ratio = t.rhs(i) / a;
      if (ratio < best_ratio - kTol ||
          (ratio < best_ratio + kTol && (leaving < 0 || t.basis[i] < t.basis[leaving]))) {
        best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving < 0) return false;  // unbounded

    if (best_ratio <= kTol) {
      if (++degenerate_streak >= kDegeneratePivotLimit) bland = true;
    } else {
      degenerate_streak = 0;
    }

    // Pivot on (leaving, entering).
    const double pivot = t.rows(leaving, entering);
    t.rows.row(leaving) /= pivot;
    t.rhs(leaving) /= pivot;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == leaving) continue;
      const double factor = t.rows(i, entering);
      if (factor == 0.0) continue;
      t.rows.row(i) -= factor * t.rows.row(leaving);
      t.rhs(i) -= factor * t.rhs(leaving);
    }
    t.rhs(leaving) = std::max(t.rhs(leaving), 0.0);  // clamp pivot noise
    t.basis[leaving] = entering;
  }
  throw Error("simplex iteration cap exceeded");
}

// Builds the phase-1 tableau for A x <= b, E x = f with rows scaled to unit
// inf-norm. Slack columns double as the initial basis where the row did not
// need a sign flip; all other rows get artificial columns.
Tableau build_tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                      const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                      Eigen::Index n) {
  const Eigen::Index mi = A.rows();
  const Eigen::Index me = E.rows();
  const Eigen::Index m = mi + me;

  Eigen::MatrixXd lhs(m, n);
  Eigen::VectorXd rhs(m);
  if (mi > 0) {
    lhs.topRows(mi) = A;
    rhs.head(mi) = b;
  }
  if (me > 0) {
    lhs.bottomRows(me) = E;
    rhs.tail(me) = f;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const double scale = std::max(lhs.row(i).cwiseAbs().maxCoeff(), std::abs(rhs(i)));
    if (scale > 1.0) {
      lhs.row(i) /= scale;
      rhs(i) /= scale;
    }
  }

  std::vector<bool> flipped(static_cast<std::size_t>(m), false);
  std::vector<Eigen::Index> needs_artificial;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) {
      lhs.row(i) = -lhs.row(i);
      rhs(i) = -rhs(i);
      flipped[static_cast<std::size_t>(i)] = true;
    }
    if (i >= mi || flipped[static_cast<std::size_t>(i)]) needs_artificial.push_back(i);
  }

  const Eigen::Index num_art = static_cast<Eigen::Index>(needs_artificial.size());
  Tableau t;
  t.num_real_cols = 2 * n + mi;
  t.rows = Eigen::MatrixXd::Zero(m, t.num_real_cols + num_art);
  t.rhs = rhs;
  t.basis.assign(static_cast<std::size_t>(m), -1);

  t.rows.leftCols(n) = lhs;
  t.rows.middleCols(n, n) = -lhs;
  for (Eigen::Index i = 0; i < mi; ++i) {
    const bool flip = flipped[static_cast<std::size_t>(i)];
    t.rows(i, 2 * n + i) = flip ? -1.0 : 1.0;
    if (!flip) t.basis[static_cast<std::size_t>(i)] = 2 * n + i;
  }
  for (Eigen::Index k = 0; k < num_art; ++k) {
    const Eigen::Index row = needs_artificial[static_cast<std::size_t>(k)];
    t.rows(row, t.num_real_cols + k) = 1.0;
    t.basis[static_cast<std::size_t>(row)] = t.num_real_cols + k;
  }
  return t;
}

// Phase 1. Returns false when the system is infeasible.
bool solve_phase1(Tableau& t) {
  const Eigen::Index ncols = t.rows.cols();
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols);
  for (Eigen::Index j = t.num_real_cols; j < ncols; ++j) cost(j) = 1.0;

  run_simplex(t, cost);  // bounded below by 0, cannot be unbounded

  double art_sum = 0.0;
  for (std::size_t i = 0; i < t.basis.size(); ++i)
    if (t.basis[i] >= t.num_real_cols) art_sum += t.rhs(static_cast<Eigen::Index>(i));
  if (art_sum > 1e-7) return false;

  // Drive leftover zero-level artificials out of the basis where possible.
  for (std::size_t i = 0; i < t.basis.size(); ++i) {
    if (t.basis[i] < t.num_real_cols) continue;
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < t.num_real_cols; ++j) {
      if (std::abs(t.rows(row, j)) > 1e-7) {
        const double pivot = t.rows(row, j);
        t.rows.row(row) /= pivot;
        t.rhs(row) /= pivot;
        for (Eigen::Index k = 0; k < t.rows.rows(); ++k) {
          if (k == row) continue;
          const double factor = t.rows(k, j);
          if (factor == 0.0) continue;
          t.rows.row(k) -= factor * t.rows.row(row);
          t.rhs(k) -= factor * t.rhs(row);
        }
        t.basis[i] = j;
        break;
      }
    }
  }

  // Rows whose artificial could not be pivoted out have no real-variable
  // support left: the original constraint was redundant. Drop them so phase 2
  // never sees a basic artificial.
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < t.basis.size(); ++i)
    if (t.basis[i] < t.num_real_cols) keep.push_back(static_cast<Eigen::Index>(i));
  if (keep.size() != t.basis.size()) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(keep.size()), t.rows.cols());
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(keep.size()));
    std::vector<Eigen::Index> basis;
    basis.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      rows.row(static_cast<Eigen::Index>(i)) = t.rows.row(keep[i]);
      rhs(static_cast<Eigen::Index>(i)) = t.rhs(keep[i]);
      basis.push_back(t.basis[static_cast<std::size_t>(keep[i])]);
    }
    t.rows = std::move(rows);
    t.rhs = std::move(rhs);
    t.basis = std::move(basis);
  }
  return true;
}

Eigen::VectorXd extract_point(const Tableau& t, Eigen::Index n) {
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(t.rows.cols());
  for (std::size_t i = 0; i < t.basis.size(); ++i)
    vals(t.basis[i]) = t.rhs(static_cast<Eigen::Index>(i));
  return vals.head(n) - vals.segment(n, n);
}

void check_shapes(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                  Eigen::Index n) {
  if (A.rows() != b.size() || E.rows() != f.size())
    throw DimensionMismatch("lp: constraint matrix/vector row mismatch");
  if ((A.rows() > 0 && A.cols() != n) || (E.rows() > 0 && E.cols() != n))
    throw DimensionMismatch("lp: constraint column count mismatch");
  if (!A.allFinite() || !b.allFinite() || !E.allFinite() || !f.allFinite())
    throw NonFiniteInput("lp: constraints contain NaN or infinity");
}

}  // namespace

LpSolution lp_find_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            const Eigen::MatrixXd& E, const Eigen::VectorXd& f) {
  const Eigen::Index n = A.rows() > 0 ? A.cols() : E.cols();
  check_shapes(A, b, E, f, n);

  LpSolution out;
  if (A.rows() == 0 && E.rows() == 0) {
    out.status = LpStatus::kOptimal;
    out.point = Eigen::VectorXd::Zero(n);
    return out;
  }

  Tableau t = build_tableau(A, b, E, f, n);
  if (!solve_phase1(t)) {
    out.status = LpStatus::kInfeasible;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.point = extract_point(t, n);
  return out;
}

LpSolution lp_maximize(const Eigen::VectorXd& objective,
                       const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       const Eigen::MatrixXd& E, const Eigen::VectorXd& f) {
  const Eigen::Index n = objective.size();
  check_shapes(A, b, E, f, n);
  if (!objective.allFinite())
    throw NonFiniteInput("lp: objective contains NaN or infinity");

  LpSolution out;
  if (A.rows() == 0 && E.rows() == 0) {
    if (objective.cwiseAbs().maxCoeff() > kTol) {
      out.status = LpStatus::kUnbounded;
      out.point = Eigen::VectorXd::Zero(n);
    } else {
      out.status = LpStatus::kOptimal;
      out.point = Eigen::VectorXd::Zero(n);
      out.objective = 0.0;
    }
    return out;
  }

  Tableau t = build_tableau(A, b, E, f, n);
  if (!solve_phase1(t)) {
    out.status = LpStatus::kInfeasible;
    return out;
  }

  // Phase 2: min (-c).(u - v); artificials locked out via +inf cost.
  const Eigen::Index ncols = t.rows.cols();
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols);
  const double scale = std::max(1.0, objective.cwiseAbs().maxCoeff());
  cost.head(n) = -objective / scale;
  cost.segment(n, n) = objective / scale;
  for (Eigen::Index j = t.num_real_cols; j < ncols; ++j)
    cost(j) = std::numeric_limits<double>::infinity();

  if (!run_simplex(t, cost)) {
    out.status = LpStatus::kUnbounded;
    out.point = extract_point(t, n);
    out.objective = std::numeric_limits<double>::infinity();
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.point = extract_point(t, n);
  out.objective = objective.dot(out.point);
  return out;
}

}  // namespace polyreach
