#include "polyreach/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {
namespace {

std::vector<double> axis_values_count(double lo, double hi, Eigen::Index count) {
  std::vector<double> values;
  if (count <= 1) {
    values.push_back(0.5 * (lo + hi));
    return values;
  }
  for (Eigen::Index i = 0; i < count; ++i)
    values.push_back(lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(count - 1));
  return values;
}

std::vector<double> axis_values_step(double lo, double hi, double step) {
  std::vector<double> values;
  for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi)); v += step)
    values.push_back(std::min(v, hi));
  return values;
}

void grid_over_piece(const Polyhedron& piece,
                     const std::vector<std::vector<double>>& axes,
                     std::vector<Eigen::VectorXd>& out) {
  const Eigen::Index n = piece.dim();
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd point(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i)
      point(i) = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    if (piece.contains(point, 1e-9)) out.push_back(point);

    Eigen::Index axis = n - 1;
    while (axis >= 0) {
      if (++idx[static_cast<std::size_t>(axis)] <
          axes[static_cast<std::size_t>(axis)].size())
        break;
      idx[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
}

}  // namespace

std::vector<Eigen::VectorXd> sample_input_set(const UnionOfPolyhedra& x0,
                                              const SampleStrategy& strategy) {
  std::vector<Eigen::VectorXd> out;

  if (const auto* uniform = std::get_if<UniformStrategy>(&strategy)) {
    if (x0.pieces.empty()) return out;
    const Eigen::Index n = x0.dim();
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, 1e300);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, -1e300);
    for (const Polyhedron& piece : x0.pieces) {
      auto [plo, phi] = bounding_box(piece);
      lo = lo.cwiseMin(plo);
      hi = hi.cwiseMax(phi);
    }
    SplitMix64 rng(uniform->seed);
    const std::size_t max_attempts = 10000 * std::max<std::size_t>(uniform->count, 1);
    std::size_t attempts = 0;
    Eigen::VectorXd point(n);
    while (out.size() < uniform->count) {
      if (++attempts > max_attempts)
        throw Error("uniform sampling: rejection failed after " +
                    std::to_string(max_attempts) +
                    " attempts (input set may have zero volume)");
      for (Eigen::Index i = 0; i < n; ++i)
        point(i) = lo(i) + (hi(i) - lo(i)) * rng.uniform01();
      if (x0.contains(point, 1e-9)) out.push_back(point);
    }
    return out;
  }

  for (const Polyhedron& piece : x0.pieces) {
    auto [lo, hi] = bounding_box(piece);
    std::vector<std::vector<double>> axes;
    for (Eigen::Index i = 0; i < piece.dim(); ++i) {
      if (const auto* grid = std::get_if<GridCountStrategy>(&strategy)) {
        axes.push_back(axis_values_count(lo(i), hi(i), grid->points_per_axis));
      } else {
        const auto& step = std::get<GridStepStrategy>(strategy);
        if (step.step <= 0.0) throw Error("grid sampling: step must be positive");
        axes.push_back(axis_values_step(lo(i), hi(i), step.step));
      }
    }
    grid_over_piece(piece, axes, out);
  }
  return out;
}

namespace {

// Membership residual of output y against one region, certified by the
// witness z: the larger of the domain violation at z and the output gap.
double witness_residual(const AffineRegion& region, const Eigen::VectorXd& z,
                        const Eigen::VectorXd& y) {
  const double domain_violation = std::max(region.domain.violation(z), 0.0);
  const double output_gap = (region.apply(z) - y).cwiseAbs().maxCoeff();
  return std::max(domain_violation, output_gap);
}

// LP membership with witness extraction: feasibility of z in the domain with
// |map z + offset - y| <= tol, returning the witness residual when feasible.
double lp_membership_residual(const AffineRegion& region, const Eigen::VectorXd& y,
                              double tol) {
  const Polyhedron& d = region.domain;
  const Eigen::Index m = d.num_inequalities();
  const Eigen::Index k = region.out_dim();
  Eigen::MatrixXd A(m + 2 * k, d.dim());
  Eigen::VectorXd b(A.rows());
  A.topRows(m) = d.ineq_lhs;
  b.head(m) = d.ineq_rhs;
  A.middleRows(m, k) = region.map;
  b.segment(m, k) = y - region.offset + Eigen::VectorXd::Constant(k, tol);
  A.bottomRows(k) = -region.map;
  b.tail(k) = region.offset - y + Eigen::VectorXd::Constant(k, tol);
  const LpOutcome outcome = lp_feasible(A, b, d.eq_lhs, d.eq_rhs);
  if (!outcome.feasible) return std::numeric_limits<double>::infinity();
  return witness_residual(region, *outcome.witness, y);
}

}  // namespace

SoundnessReport check_soundness(const Network& net, const UnionOfPolyhedra& x0,
                                const ReachSet& reach,
                                const std::vector<Eigen::VectorXd>& samples,
                                double tol) {
  (void)x0;  // samples are assumed drawn from x0; kept for interface symmetry
  SoundnessReport report;
  report.samples = samples.size();

  for (const Eigen::VectorXd& x : samples) {
    const Eigen::VectorXd y = forward(net, x);

    // Fast certificate: the sample itself witnesses membership in the region
    // carrying its own activation cell.
    double best = std::numeric_limits<double>::infinity();
    for (const AffineRegion& region : reach.regions) {
      if (!region.domain.contains(x, tol)) continue;
      best = std::min(best, witness_residual(region, x, y));
      if (best <= tol) break;
    }
    // Fall back to LP membership (y may be produced by another region).
    if (best > tol) {
      for (const AffineRegion& region : reach.regions) {
        best = std::min(best, lp_membership_residual(region, y, tol));
        if (best <= tol) break;
      }
    }

    if (best > tol) {
      ++report.failures;
      if (report.failure_details.size() < 16)
        report.failure_details.push_back({x, y, best});
    } else {
      report.max_residual = std::max(report.max_residual, best);
    }
  }
  return report;
}

std::vector<Eigen::VectorXd> brute_force_reach(const Network& net,
                                               const UnionOfPolyhedra& x0,
                                               double resolution) {
  std::vector<Eigen::VectorXd> outputs;
  for (const Eigen::VectorXd& x :
       sample_input_set(x0, GridStepStrategy{resolution}))
    outputs.push_back(forward(net, x));
  return outputs;
}

}  // namespace polyreach
