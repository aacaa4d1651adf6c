#include "polyreach/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyreach/errors.hpp"

namespace polyreach {
namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw NonFiniteInput(std::string(what) + " contains NaN or infinity");
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw NonFiniteInput(std::string(what) + " contains NaN or infinity");
}

}  // namespace

Polyhedron::Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b)
    : Polyhedron(std::move(A), std::move(b), Eigen::MatrixXd(), Eigen::VectorXd()) {}

Polyhedron::Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::MatrixXd E,
                       Eigen::VectorXd f)
    : ineq_lhs(std::move(A)),
      ineq_rhs(std::move(b)),
      eq_lhs(std::move(E)),
      eq_rhs(std::move(f)) {
  if (eq_lhs.size() == 0 && eq_lhs.cols() != ineq_lhs.cols())
    eq_lhs.resize(0, ineq_lhs.cols());
  if (ineq_lhs.rows() != ineq_rhs.size())
    throw DimensionMismatch("polyhedron: inequality row count mismatch");
  if (eq_lhs.rows() != eq_rhs.size())
    throw DimensionMismatch("polyhedron: equality row count mismatch");
  if (eq_lhs.rows() > 0 && eq_lhs.cols() != ineq_lhs.cols())
    throw DimensionMismatch("polyhedron: equality column count mismatch");
  require_finite(ineq_lhs, "polyhedron inequality lhs");
  require_finite(ineq_rhs, "polyhedron inequality rhs");
  require_finite(eq_lhs, "polyhedron equality lhs");
  require_finite(eq_rhs, "polyhedron equality rhs");
}

Polyhedron Polyhedron::universe(Eigen::Index dim) {
  return Polyhedron(Eigen::MatrixXd(0, dim), Eigen::VectorXd(0));
}

Polyhedron Polyhedron::empty_set(Eigen::Index dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, dim);
  Eigen::VectorXd b(1);
  b << -1.0;
  return Polyhedron(std::move(a), std::move(b));
}

Polyhedron Polyhedron::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box: lo/hi size mismatch");
  const Eigen::Index n = lo.size();
  Eigen::MatrixXd a(2 * n, n);
  Eigen::VectorXd b(2 * n);
  a.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  a.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
  b.head(n) = hi;
  b.tail(n) = -lo;
  return Polyhedron(std::move(a), std::move(b));
}

bool Polyhedron::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim()) throw DimensionMismatch("contains: point dimension mismatch");
  for (Eigen::Index i = 0; i < ineq_lhs.rows(); ++i) {
    const double slack = tol * ineq_lhs.row(i).norm();
    if (ineq_lhs.row(i).dot(x) > ineq_rhs(i) + slack) return false;
  }
  for (Eigen::Index i = 0; i < eq_lhs.rows(); ++i) {
    const double slack = tol * eq_lhs.row(i).norm();
    if (std::abs(eq_lhs.row(i).dot(x) - eq_rhs(i)) > slack) return false;
  }
  return true;
}

double Polyhedron::violation(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw DimensionMismatch("violation: point dimension mismatch");
  double worst = -std::numeric_limits<double>::infinity();
  if (ineq_lhs.rows() == 0 && eq_lhs.rows() == 0) return 0.0;
  for (Eigen::Index i = 0; i < ineq_lhs.rows(); ++i) {
    const double norm = std::max(ineq_lhs.row(i).norm(), 1e-300);
    worst = std::max(worst, (ineq_lhs.row(i).dot(x) - ineq_rhs(i)) / norm);
  }
  for (Eigen::Index i = 0; i < eq_lhs.rows(); ++i) {
    const double norm = std::max(eq_lhs.row(i).norm(), 1e-300);
    worst = std::max(worst, std::abs(eq_lhs.row(i).dot(x) - eq_rhs(i)) / norm);
  }
  return worst;
}

UnionOfPolyhedra::UnionOfPolyhedra(Eigen::Index dim, std::vector<Polyhedron> ps)
    : pieces(std::move(ps)), dim_(dim) {
  for (const Polyhedron& p : pieces)
    if (p.dim() != dim_)
      throw DimensionMismatch("union: piece dimension mismatch");
}

bool UnionOfPolyhedra::contains(const Eigen::VectorXd& x, double tol) const {
  for (const Polyhedron& p : pieces)
    if (p.contains(x, tol)) return true;
  return false;
}

AffineRegion::AffineRegion(Eigen::MatrixXd m, Eigen::VectorXd c, Polyhedron d)
    : map(std::move(m)), offset(std::move(c)), domain(std::move(d)) {
  if (offset.size() != map.rows())
    throw DimensionMismatch("region: offset length must match map rows");
  if (domain.dim() != map.cols())
    throw DimensionMismatch("region: domain dimension must match map columns");
  require_finite(map, "region map");
  require_finite(offset, "region offset");
}

AffineRegion AffineRegion::identity(Polyhedron d) {
  const Eigen::Index n = d.dim();
  return AffineRegion(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n),
                      std::move(d));
}

AffineRegion AffineRegion::compose(const Eigen::MatrixXd& m,
                                   const Eigen::VectorXd& c) const {
  if (m.cols() != map.rows())
    throw DimensionMismatch("compose: matrix columns must match region out_dim");
  return AffineRegion(m * map, m * offset + c, domain);
}

LpOutcome lp_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                      const Eigen::MatrixXd& E, const Eigen::VectorXd& f) {
  LpSolution sol = lp_find_feasible(A, b, E, f);
  LpOutcome out;
  out.feasible = sol.status == LpStatus::kOptimal;
  if (out.feasible) out.witness = sol.point;
  return out;
}

bool is_empty(const Polyhedron& p) {
  return !lp_feasible(p.ineq_lhs, p.ineq_rhs, p.eq_lhs, p.eq_rhs).feasible;
}

LpSolution maximize_over(const Polyhedron& p, const Eigen::VectorXd& direction) {
  if (direction.size() != p.dim())
    throw DimensionMismatch("maximize_over: direction dimension mismatch");
  return lp_maximize(direction, p.ineq_lhs, p.ineq_rhs, p.eq_lhs, p.eq_rhs);
}

namespace {

// Orthonormal basis of the null space of E (columns), or identity when E has
// no rows. Empty basis means the equalities pin a unique point.
Eigen::MatrixXd equality_kernel(const Eigen::MatrixXd& E, Eigen::Index dim) {
  if (E.rows() == 0) return Eigen::MatrixXd::Identity(dim, dim);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
  lu.setThreshold(1e-10);
  Eigen::MatrixXd kern = lu.kernel();
  if (lu.dimensionOfKernel() == 0) return Eigen::MatrixXd(dim, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(kern);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, kern.cols());
}

// Any solution of E x = f; throws EmptyPolyhedron when inconsistent.
Eigen::VectorXd equality_particular(const Eigen::MatrixXd& E,
                                    const Eigen::VectorXd& f, Eigen::Index dim) {
  if (E.rows() == 0) return Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd x0 = E.completeOrthogonalDecomposition().solve(f);
  const double residual = (E * x0 - f).cwiseAbs().maxCoeff();
  if (residual > 1e-7 * (1.0 + f.cwiseAbs().maxCoeff()))
    throw EmptyPolyhedron("inconsistent equality constraints");
  return x0;
}

}  // namespace

InteriorPointResult interior_point(const Polyhedron& p) {
  const Eigen::Index n = p.dim();
  const Eigen::VectorXd x0 = equality_particular(p.eq_lhs, p.eq_rhs, n);
  const Eigen::MatrixXd basis = equality_kernel(p.eq_lhs, n);
  const Eigen::Index k = basis.cols();

  if (k == 0) {
    // Equalities pin a unique point.
    if (!p.contains(x0, 1e-7)) throw EmptyPolyhedron("interior_point: empty polyhedron");
    return {x0, 0.0, false};
  }

  // Variables (t, r): maximize r subject to
  //   (A basis) t + |row| r <= b - A x0        for each inequality row
  //   +-t_j + r <= kChebyshevBoxBound          regularizing box
  const Eigen::Index mi = p.ineq_lhs.rows();
  Eigen::MatrixXd lp_A(mi + 2 * k, k + 1);
  Eigen::VectorXd lp_b(mi + 2 * k);
  if (mi > 0) {
    const Eigen::MatrixXd proj = p.ineq_lhs * basis;
    lp_A.topLeftCorner(mi, k) = proj;
    lp_A.col(k).head(mi) = proj.rowwise().norm();
    lp_b.head(mi) = p.ineq_rhs - p.ineq_lhs * x0;
  }
  lp_A.block(mi, 0, k, k) = Eigen::MatrixXd::Identity(k, k);
  lp_A.block(mi + k, 0, k, k) = -Eigen::MatrixXd::Identity(k, k);
  lp_A.col(k).tail(2 * k).setOnes();
  lp_b.tail(2 * k).setConstant(kChebyshevBoxBound);

  Eigen::VectorXd objective = Eigen::VectorXd::Zero(k + 1);
  objective(k) = 1.0;
  const LpSolution sol = lp_maximize(objective, lp_A, lp_b, Eigen::MatrixXd(0, k + 1),
                                     Eigen::VectorXd(0));
  if (sol.status == LpStatus::kInfeasible || sol.objective < -kTol) {
    // Either genuinely empty, or feasible only outside the regularizing box;
    // fall back to a plain feasibility witness to tell the two apart.
    const LpOutcome feas = lp_feasible(p.ineq_lhs, p.ineq_rhs, p.eq_lhs, p.eq_rhs);
    if (!feas.feasible) throw EmptyPolyhedron("interior_point: empty polyhedron");
    return {*feas.witness, 0.0, true};
  }

  InteriorPointResult out;
  const Eigen::VectorXd t = sol.point.head(k);
  out.point = x0 + basis * t;
  out.radius = std::max(sol.objective, 0.0);
  // Flag solutions pressed against the regularizing box.
  const double box_gap = (lp_b.tail(2 * k) -
                          lp_A.bottomRows(2 * k) * sol.point).minCoeff();
  out.box_clamped = box_gap < 1e-3;
  return out;
}

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("intersect: dimension mismatch");
  const Eigen::Index n = p.dim();
  Eigen::MatrixXd A(p.num_inequalities() + q.num_inequalities(), n);
  Eigen::VectorXd b(A.rows());
  A.topRows(p.num_inequalities()) = p.ineq_lhs;
  A.bottomRows(q.num_inequalities()) = q.ineq_lhs;
  b.head(p.num_inequalities()) = p.ineq_rhs;
  b.tail(q.num_inequalities()) = q.ineq_rhs;
  Eigen::MatrixXd E(p.num_equalities() + q.num_equalities(), n);
  Eigen::VectorXd f(E.rows());
  E.topRows(p.num_equalities()) = p.eq_lhs;
  E.bottomRows(q.num_equalities()) = q.eq_lhs;
  f.head(p.num_equalities()) = p.eq_rhs;
  f.tail(q.num_equalities()) = q.eq_rhs;
  return Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
}

Polyhedron remove_redundancy(const Polyhedron& p, double slack) {
  if (is_empty(p)) throw EmptyPolyhedron("remove_redundancy: empty polyhedron");

  const Eigen::Index n = p.dim();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < p.num_inequalities(); ++i) kept.push_back(i);

  // Zero rows with nonnegative rhs carry no information.
  kept.erase(std::remove_if(kept.begin(), kept.end(),
                            [&](Eigen::Index i) {
                              return p.ineq_lhs.row(i).cwiseAbs().maxCoeff() <= kTol &&
                                     p.ineq_rhs(i) >= -kTol;
                            }),
             kept.end());

  std::size_t idx = 0;
  while (idx < kept.size()) {
    const Eigen::Index row = kept[idx];
    Eigen::MatrixXd A(static_cast<Eigen::Index>(kept.size()), n);
    Eigen::VectorXd b(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
      A.row(static_cast<Eigen::Index>(j)) = p.ineq_lhs.row(kept[j]);
      b(static_cast<Eigen::Index>(j)) = p.ineq_rhs(kept[j]);
    }
    // Relax the row under test instead of deleting it; keeps the LP feasible.
    b(static_cast<Eigen::Index>(idx)) += 1.0 + std::abs(b(static_cast<Eigen::Index>(idx)));

    const LpSolution sol = lp_maximize(p.ineq_lhs.row(row).transpose(), A, b,
                                       p.eq_lhs, p.eq_rhs);
    const bool redundant = sol.status == LpStatus::kOptimal &&
                           sol.objective <= p.ineq_rhs(row) + slack;
    if (redundant) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(idx));
    } else {
      ++idx;
    }
  }

  Eigen::MatrixXd A(static_cast<Eigen::Index>(kept.size()), n);
  Eigen::VectorXd b(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) {
    A.row(static_cast<Eigen::Index>(j)) = p.ineq_lhs.row(kept[j]);
    b(static_cast<Eigen::Index>(j)) = p.ineq_rhs(kept[j]);
  }
  return Polyhedron(std::move(A), std::move(b), p.eq_lhs, p.eq_rhs);
}

Polyhedron affine_preimage_constraints(const Polyhedron& p, const Eigen::MatrixXd& M,
                                       const Eigen::VectorXd& c) {
  if (M.rows() != p.dim())
    throw DimensionMismatch("affine_preimage: map rows must match polyhedron dim");
  if (c.size() != M.rows())
    throw DimensionMismatch("affine_preimage: offset length must match map rows");
  require_finite(M, "affine_preimage map");
  require_finite(c, "affine_preimage offset");
  return Polyhedron(p.ineq_lhs * M, p.ineq_rhs - p.ineq_lhs * c, p.eq_lhs * M,
                    p.eq_rhs - p.eq_lhs * c);
}

namespace {

// Working system for variable elimination: rows over [y | x] with the x block
// to be eliminated. Inequalities and equalities are kept separately.
struct EliminationSystem {
  Eigen::MatrixXd ineq;   // rows x (dy + dx)
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq;
  Eigen::VectorXd eq_rhs;
  Eigen::Index dy = 0;
  std::vector<Eigen::Index> remaining;  // x-column indices still present

  void drop_eq_row(Eigen::Index r) {
    const Eigen::Index m = eq.rows();
    Eigen::MatrixXd ne(m - 1, eq.cols());
    Eigen::VectorXd nf(m - 1);
    Eigen::Index w = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == r) continue;
      ne.row(w) = eq.row(i);
      nf(w) = eq_rhs(i);
      ++w;
    }
    eq = std::move(ne);
    eq_rhs = std::move(nf);
  }
};

// Substitute one variable out using the equality row with the best pivot.
// Returns false when no equality row touches any remaining x variable.
bool gaussian_step(EliminationSystem& sys) {
  Eigen::Index best_row = -1, best_col = -1;
  double best = 1e-9;
  for (Eigen::Index r = 0; r < sys.eq.rows(); ++r) {
    for (Eigen::Index col : sys.remaining) {
      const double a = std::abs(sys.eq(r, col));
      if (a > best) {
        best = a;
        best_row = r;
        best_col = col;
      }
    }
  }
  if (best_row < 0) return false;

  const Eigen::VectorXd pivot_row = sys.eq.row(best_row) / sys.eq(best_row, best_col);
  const double pivot_rhs = sys.eq_rhs(best_row) / sys.eq(best_row, best_col);
  for (Eigen::Index i = 0; i < sys.ineq.rows(); ++i) {
    const double a = sys.ineq(i, best_col);
    if (a == 0.0) continue;
    sys.ineq.row(i) -= a * pivot_row.transpose();
    sys.ineq_rhs(i) -= a * pivot_rhs;
    sys.ineq(i, best_col) = 0.0;
  }
  for (Eigen::Index i = 0; i < sys.eq.rows(); ++i) {
    if (i == best_row) continue;
    const double a = sys.eq(i, best_col);
    if (a == 0.0) continue;
    sys.eq.row(i) -= a * pivot_row.transpose();
    sys.eq_rhs(i) -= a * pivot_rhs;
    sys.eq(i, best_col) = 0.0;
  }
  sys.drop_eq_row(best_row);
  sys.remaining.erase(std::find(sys.remaining.begin(), sys.remaining.end(), best_col));
  return true;
}

// One Fourier-Motzkin step on the cheapest remaining x variable.
void fourier_motzkin_step(EliminationSystem& sys, int row_cap) {
  // Pick the variable minimizing the pos*neg fan-out.
  Eigen::Index best_col = -1;
  long best_cost = std::numeric_limits<long>::max();
  for (Eigen::Index col : sys.remaining) {
    long pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < sys.ineq.rows(); ++i) {
      if (sys.ineq(i, col) > kTol) ++pos;
      else if (sys.ineq(i, col) < -kTol) ++neg;
    }
    const long cost = pos * neg - (pos + neg);
    if (cost < best_cost) {
      best_cost = cost;
      best_col = col;
    }
  }

  std::vector<Eigen::Index> pos, neg, zero;
  for (Eigen::Index i = 0; i < sys.ineq.rows(); ++i) {
    const double a = sys.ineq(i, best_col);
    if (a > kTol) pos.push_back(i);
    else if (a < -kTol) neg.push_back(i);
    else zero.push_back(i);
  }

  const long new_rows = static_cast<long>(zero.size()) +
                        static_cast<long>(pos.size()) * static_cast<long>(neg.size());
  if (new_rows > row_cap)
    throw EliminationBlowup("fourier-motzkin: projected row count " +
                            std::to_string(new_rows) + " exceeds cap " +
                            std::to_string(row_cap));

  Eigen::MatrixXd out(new_rows, sys.ineq.cols());
  Eigen::VectorXd out_rhs(new_rows);
  Eigen::Index w = 0;
  for (Eigen::Index i : zero) {
    out.row(w) = sys.ineq.row(i);
    out_rhs(w) = sys.ineq_rhs(i);
    ++w;
  }
  for (Eigen::Index ip : pos) {
    const double cp = sys.ineq(ip, best_col);
    for (Eigen::Index in : neg) {
      const double cn = -sys.ineq(in, best_col);
      Eigen::VectorXd row = sys.ineq.row(ip).transpose() / cp +
                            sys.ineq.row(in).transpose() / cn;
      double rhs = sys.ineq_rhs(ip) / cp + sys.ineq_rhs(in) / cn;
      row(best_col) = 0.0;
      const double scale = row.cwiseAbs().maxCoeff();
      if (scale > 1.0) {
        row /= scale;
        rhs /= scale;
      }
      out.row(w) = row.transpose();
      out_rhs(w) = rhs;
      ++w;
    }
  }
  sys.ineq = std::move(out);
  sys.ineq_rhs = std::move(out_rhs);
  sys.remaining.erase(std::find(sys.remaining.begin(), sys.remaining.end(), best_col));
}

// Drops inequality rows that reduce to 0 <= rhs. A strictly negative rhs on a
// zero row means the system is infeasible; callers guard with nonempty
// domains, so report it via EmptyPolyhedron if it ever happens.
void drop_trivial_rows(EliminationSystem& sys) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < sys.ineq.rows(); ++i) {
    if (sys.ineq.row(i).cwiseAbs().maxCoeff() > kTol) {
      keep.push_back(i);
    } else if (sys.ineq_rhs(i) < -1e-7) {
      throw EmptyPolyhedron("elimination produced an infeasible system");
    }
  }
  if (static_cast<Eigen::Index>(keep.size()) == sys.ineq.rows()) return;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(keep.size()), sys.ineq.cols());
  Eigen::VectorXd b(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    a.row(static_cast<Eigen::Index>(j)) = sys.ineq.row(keep[j]);
    b(static_cast<Eigen::Index>(j)) = sys.ineq_rhs(keep[j]);
  }
  sys.ineq = std::move(a);
  sys.ineq_rhs = std::move(b);
}

}  // namespace

Polyhedron region_to_polyhedron(const AffineRegion& r, int row_cap) {
  const Eigen::Index dy = r.out_dim();
  const Eigen::Index dx = r.in_dim();
  const Polyhedron& d = r.domain;

  EliminationSystem sys;
  sys.dy = dy;
  sys.ineq.resize(d.num_inequalities(), dy + dx);
  sys.ineq.setZero();
  sys.ineq.rightCols(dx) = d.ineq_lhs;
  sys.ineq_rhs = d.ineq_rhs;

  sys.eq.resize(d.num_equalities() + dy, dy + dx);
  sys.eq.setZero();
  sys.eq.topRightCorner(d.num_equalities(), dx) = d.eq_lhs;
  sys.eq.bottomLeftCorner(dy, dy) = Eigen::MatrixXd::Identity(dy, dy);
  sys.eq.bottomRightCorner(dy, dx) = -r.map;
  sys.eq_rhs.resize(d.num_equalities() + dy);
  sys.eq_rhs.head(d.num_equalities()) = d.eq_rhs;
  sys.eq_rhs.tail(dy) = r.offset;

  for (Eigen::Index j = 0; j < dx; ++j) sys.remaining.push_back(dy + j);

  while (!sys.remaining.empty()) {
    if (gaussian_step(sys)) continue;
    fourier_motzkin_step(sys, row_cap);
    drop_trivial_rows(sys);
    // Prune combinatorial debris before the next step.
    if (sys.ineq.rows() > 1) {
      Polyhedron interim(sys.ineq, sys.ineq_rhs);
      interim = remove_redundancy(interim, kTol);
      sys.ineq = interim.ineq_lhs;
      sys.ineq_rhs = interim.ineq_rhs;
    }
  }
  drop_trivial_rows(sys);

  Eigen::MatrixXd A = sys.ineq.leftCols(dy);
  Eigen::MatrixXd E = sys.eq.leftCols(dy);
  Polyhedron out(std::move(A), sys.ineq_rhs, std::move(E), sys.eq_rhs);
  if (out.num_inequalities() > 1) out = remove_redundancy(out, kTol);
  return out;
}

namespace {

// Deduplicate candidate vertices within a scale-aware radius.
std::vector<Eigen::Vector2d> dedupe_points(std::vector<Eigen::Vector2d> pts,
                                           double scale) {
  const double radius = 1e-7 * std::max(scale, 1.0);
  std::vector<Eigen::Vector2d> out;
  for (const Eigen::Vector2d& p : pts) {
    bool dup = false;
    for (const Eigen::Vector2d& q : out)
      if ((p - q).norm() <= radius) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

bool lex_less(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  return a.y() < b.y();
}

std::vector<Eigen::Vector2d> segment_vertices(const Polyhedron& p,
                                              const Eigen::Vector2d& point,
                                              const Eigen::Vector2d& dir) {
  // 1-D slice x = point + t dir; bound t by each inequality row.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p.ineq_lhs.rows(); ++i) {
    const double a = p.ineq_lhs.row(i).dot(dir);
    const double c = p.ineq_rhs(i) - p.ineq_lhs.row(i).dot(point);
    const double norm = p.ineq_lhs.row(i).norm();
    if (std::abs(a) <= kTol * std::max(norm, 1.0)) {
      if (c < -kTol * std::max(norm, 1.0))
        throw EmptyPolyhedron("vertices_2d: empty polyhedron");
      continue;
    }
    if (a > 0) hi = std::min(hi, c / a);
    else lo = std::max(lo, c / a);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Unbounded("vertices_2d: unbounded polyhedron");
  if (lo > hi + 1e-9) throw EmptyPolyhedron("vertices_2d: empty polyhedron");

  Eigen::Vector2d a = point + lo * dir;
  Eigen::Vector2d b = point + hi * dir;
  if ((a - b).norm() <= 1e-9 * (1.0 + a.norm())) return {a};
  if (!lex_less(a, b)) std::swap(a, b);
  return {a, b};
}

}  // namespace

std::vector<Eigen::Vector2d> vertices_2d(const Polyhedron& p) {
  if (p.dim() != 2) throw DimensionMismatch("vertices_2d: dimension must be 2");

  if (p.num_equalities() > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(p.eq_lhs);
    lu.setThreshold(1e-10);
    const Eigen::Index rank = lu.rank();
    if (rank >= 2) {
      const Eigen::VectorXd x0 = equality_particular(p.eq_lhs, p.eq_rhs, 2);
      if (!p.contains(x0, 1e-7)) throw EmptyPolyhedron("vertices_2d: empty polyhedron");
      return {Eigen::Vector2d(x0(0), x0(1))};
    }
    if (rank == 1) {
      const Eigen::VectorXd x0 = equality_particular(p.eq_lhs, p.eq_rhs, 2);
      Eigen::MatrixXd kern = equality_kernel(p.eq_lhs, 2);
      Eigen::Vector2d dir = kern.col(0);
      // Deterministic orientation: first nonzero component positive.
      if (dir.x() < -kTol || (std::abs(dir.x()) <= kTol && dir.y() < 0)) dir = -dir;
      return segment_vertices(p, x0.head<2>(), dir);
    }
    // rank 0: equality rows are all-zero; inconsistent rhs means empty.
    for (Eigen::Index i = 0; i < p.eq_rhs.size(); ++i)
      if (std::abs(p.eq_rhs(i)) > kTol)
        throw EmptyPolyhedron("vertices_2d: empty polyhedron");
  }

  // Boundedness probe; also detects emptiness.
  Eigen::Vector2d lo, hi;
  for (int axis = 0; axis < 2; ++axis) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(2);
    dir(axis) = 1.0;
    LpSolution up = maximize_over(p, dir);
    LpSolution down = maximize_over(p, -dir);
    if (up.status == LpStatus::kInfeasible || down.status == LpStatus::kInfeasible)
      throw EmptyPolyhedron("vertices_2d: empty polyhedron");
    if (up.status == LpStatus::kUnbounded || down.status == LpStatus::kUnbounded)
      throw Unbounded("vertices_2d: unbounded polyhedron");
    hi(axis) = up.objective;
    lo(axis) = -down.objective;
  }
  const double scale = std::max((hi - lo).norm(), 1.0);

  std::vector<Eigen::Vector2d> candidates;
  const Eigen::Index m = p.num_inequalities();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      Eigen::Matrix2d mat;
      mat.row(0) = p.ineq_lhs.row(i);
      mat.row(1) = p.ineq_lhs.row(j);
      const double det = mat.determinant();
      const double det_scale = p.ineq_lhs.row(i).norm() * p.ineq_lhs.row(j).norm();
      if (std::abs(det) <= 1e-10 * std::max(det_scale, 1e-300)) continue;
      Eigen::Vector2d rhs(p.ineq_rhs(i), p.ineq_rhs(j));
      Eigen::Vector2d v = mat.inverse() * rhs;
      if (p.contains(v, 1e-7)) candidates.push_back(v);
    }
  }
  candidates = dedupe_points(std::move(candidates), scale);
  if (candidates.empty()) throw EmptyPolyhedron("vertices_2d: no vertices found");
  if (candidates.size() == 1) return candidates;

  // Collinearity check against the segment between lexicographic extremes.
  auto lex_min = *std::min_element(candidates.begin(), candidates.end(), lex_less);
  auto lex_max = *std::max_element(candidates.begin(), candidates.end(), lex_less);
  const Eigen::Vector2d span = lex_max - lex_min;
  bool collinear = true;
  for (const Eigen::Vector2d& v : candidates) {
    const Eigen::Vector2d rel = v - lex_min;
    if (std::abs(span.x() * rel.y() - span.y() * rel.x()) > 1e-7 * scale * scale) {
      collinear = false;
      break;
    }
  }
  if (collinear) return {lex_min, lex_max};

  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const Eigen::Vector2d& v : candidates) centroid += v;
  centroid /= static_cast<double>(candidates.size());
  std::sort(candidates.begin(), candidates.end(),
            [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return std::atan2(a.y() - centroid.y(), a.x() - centroid.x()) <
                     std::atan2(b.y() - centroid.y(), b.x() - centroid.x());
            });
  auto first = std::min_element(candidates.begin(), candidates.end(), lex_less);
  std::rotate(candidates.begin(), first, candidates.end());
  return candidates;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const Polyhedron& p) {
  const Eigen::Index n = p.dim();
  Eigen::VectorXd lo(n), hi(n);
  for (Eigen::Index axis = 0; axis < n; ++axis) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    dir(axis) = 1.0;
    LpSolution up = maximize_over(p, dir);
    LpSolution down = maximize_over(p, -dir);
    if (up.status == LpStatus::kInfeasible || down.status == LpStatus::kInfeasible)
      throw EmptyPolyhedron("bounding_box: empty polyhedron");
    if (up.status == LpStatus::kUnbounded || down.status == LpStatus::kUnbounded)
      throw Unbounded("bounding_box: unbounded polyhedron");
    hi(axis) = up.objective;
    lo(axis) = -down.objective;
  }
  return {lo, hi};
}

}  // namespace polyreach
