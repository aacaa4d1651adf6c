#include "polyreach/verify.hpp"

#include <algorithm>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polyreach/errors.hpp"

namespace polyreach {

UnionOfPolyhedra SafetySpec::unsafe_region() const {
  if (kind == SafetyKind::kUnsafeGiven) return pieces;
  if (pieces.size() != 1)
    throw ShapeError("safety spec: a safe region must be a single polyhedron");
  return complement_of_polyhedron(pieces.pieces.front());
}

UnionOfPolyhedra complement_of_polyhedron(const Polyhedron& p) {
  if (p.num_equalities() > 0)
    throw EqualityNotComplementable(
        "complement: polyhedron with equality rows has no closed "
        "finite-union complement");
  const Eigen::Index n = p.dim();
  std::vector<Polyhedron> pieces;
  for (Eigen::Index i = 0; i < p.num_inequalities(); ++i) {
    if (p.ineq_lhs.row(i).cwiseAbs().maxCoeff() <= kTol) {
      if (p.ineq_rhs(i) < -kTol) return UnionOfPolyhedra(n, {Polyhedron::universe(n)});
      continue;  // vacuous row, complement piece would be the whole space
    }
    Eigen::MatrixXd a = -p.ineq_lhs.row(i);
    Eigen::VectorXd b(1);
    b << -p.ineq_rhs(i);
    pieces.emplace_back(std::move(a), std::move(b));
  }
  return UnionOfPolyhedra(n, std::move(pieces));
}

SafetySpec unsafe_from_infinity_ball(const Eigen::VectorXd& center, double radius) {
  if (radius <= 0.0) throw ShapeError("unsafe ball: radius must be positive");
  if (!center.allFinite()) throw NonFiniteInput("unsafe ball: center not finite");
  const Eigen::Index n = center.size();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * n, n);
  Eigen::VectorXd d(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    C(2 * i, i) = 1.0;
    d(2 * i) = center(i) + radius;
    C(2 * i + 1, i) = -1.0;
    d(2 * i + 1) = radius - center(i);
  }
  SafetySpec spec;
  spec.kind = SafetyKind::kUnsafeGiven;
  spec.pieces = UnionOfPolyhedra(n, {Polyhedron(std::move(C), std::move(d))});
  return spec;
}

namespace {

// Intersection of a region's image with an unsafe piece, expressed over the
// region's domain variables: z in D and C (M z + c) <= d.
Polyhedron pair_system(const AffineRegion& region, const Polyhedron& piece) {
  const Polyhedron& d = region.domain;
  Eigen::MatrixXd A(d.num_inequalities() + piece.num_inequalities(), d.dim());
  Eigen::VectorXd b(A.rows());
  A.topRows(d.num_inequalities()) = d.ineq_lhs;
  b.head(d.num_inequalities()) = d.ineq_rhs;
  A.bottomRows(piece.num_inequalities()) = piece.ineq_lhs * region.map;
  b.tail(piece.num_inequalities()) =
      piece.ineq_rhs - piece.ineq_lhs * region.offset;

  Eigen::MatrixXd E(d.num_equalities() + piece.num_equalities(), d.dim());
  Eigen::VectorXd f(E.rows());
  E.topRows(d.num_equalities()) = d.eq_lhs;
  f.head(d.num_equalities()) = d.eq_rhs;
  E.bottomRows(piece.num_equalities()) = piece.eq_lhs * region.map;
  f.tail(piece.num_equalities()) = piece.eq_rhs - piece.eq_lhs * region.offset;
  return Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
}

}  // namespace

Verdict verify_network(const Network& net, const UnionOfPolyhedra& x0,
                       const SafetySpec& spec, const ReachOptions& options) {
  const UnionOfPolyhedra unsafe = spec.unsafe_region();
  if (unsafe.dim() != net.output_dim())
    throw DimensionMismatch("verify: spec dim " + std::to_string(unsafe.dim()) +
                            " vs network output dim " +
                            std::to_string(net.output_dim()));

  auto [reach, stats] = network_reach(net, x0, options);

  Verdict verdict;
  verdict.reach_stats = std::move(stats);

  const std::size_t num_pieces = unsafe.size();
  const std::size_t total = reach.regions.size() * num_pieces;

  int jobs = options.jobs;
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#else
  jobs = 1;
#endif

  // Region-major scan in fixed-size blocks; the first feasible pair in
  // canonical order wins regardless of scheduling.
  constexpr std::size_t kBlock = 256;
  std::size_t hit = total;
  for (std::size_t block_start = 0; block_start < total && hit == total;
       block_start += kBlock) {
    const std::size_t block_end = std::min(block_start + kBlock, total);
    std::vector<unsigned char> feasible(block_end - block_start, 0);
    std::exception_ptr failure;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
#endif
    for (std::size_t idx = block_start; idx < block_end; ++idx) {
      try {
        const AffineRegion& region = reach.regions[idx / num_pieces];
        const Polyhedron& piece = unsafe.pieces[idx % num_pieces];
        const Polyhedron sys = pair_system(region, piece);
        if (lp_feasible(sys.ineq_lhs, sys.ineq_rhs, sys.eq_lhs, sys.eq_rhs).feasible)
          feasible[idx - block_start] = 1;
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t idx = block_start; idx < block_end; ++idx) {
      if (feasible[idx - block_start]) {
        hit = idx;
        break;
      }
    }
  }

  if (hit == total) {
    verdict.safe = true;
    verdict.checked_pairs = total;
    return verdict;
  }

  verdict.safe = false;
  verdict.checked_pairs = hit + 1;

  const std::size_t region_index = hit / num_pieces;
  const std::size_t piece_index = hit % num_pieces;
  const AffineRegion& region = reach.regions[region_index];
  const Polyhedron sys = pair_system(region, unsafe.pieces[piece_index]);

  // Prefer a deep witness: the Chebyshev center of the feasible pair system
  // re-verifies much more robustly than a boundary LP vertex.
  Counterexample ce;
  ce.input = interior_point(sys).point;
  ce.output = forward(net, ce.input);
  ce.region_index = region_index;
  ce.piece_index = piece_index;
  verdict.counterexample = std::move(ce);
  return verdict;
}

}  // namespace polyreach
