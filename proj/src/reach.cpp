#include "polyreach/reach.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polyreach/errors.hpp"
#include "polyreach/log.hpp"

namespace polyreach {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Domains accumulate one inequality row per neuron per ReLU layer; keep them
// tidy once they pass 4x the ambient dimension. The negative slack only drops
// rows that are implied with margin, so the point set is preserved exactly.
Polyhedron tidy_domain(Polyhedron domain) {
  if (domain.num_inequalities() > 4 * domain.dim())
    return remove_redundancy(domain, -kTol);
  return domain;
}

// Candidate domain for one activation pattern: the incoming domain plus one
// row per neuron constraining the sign of the pre-activation g(x) = G x + g0.
// bit = 1 rows read -(G_i x) <= g0_i (active), bit = 0 rows G_i x <= -g0_i.
Polyhedron pattern_domain(const Polyhedron& base, const Eigen::MatrixXd& pre_map,
                          const Eigen::VectorXd& pre_offset,
                          const ActivationPattern& pattern) {
  const Eigen::Index n = pre_map.rows();
  const Eigen::Index d = base.dim();
  Eigen::MatrixXd A(base.num_inequalities() + n, d);
  Eigen::VectorXd b(A.rows());
  A.topRows(base.num_inequalities()) = base.ineq_lhs;
  b.head(base.num_inequalities()) = base.ineq_rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index row = base.num_inequalities() + i;
    if (pattern.bit(static_cast<int>(i)) == 1) {
      A.row(row) = -pre_map.row(i);
      b(row) = pre_offset(i);
    } else {
      A.row(row) = pre_map.row(i);
      b(row) = -pre_offset(i);
    }
  }
  return Polyhedron(std::move(A), std::move(b), base.eq_lhs, base.eq_rhs);
}

AffineRegion pattern_region(const Eigen::MatrixXd& pre_map,
                            const Eigen::VectorXd& pre_offset,
                            const ActivationPattern& pattern, Polyhedron domain) {
  Eigen::MatrixXd map = pre_map;
  Eigen::VectorXd offset = pre_offset;
  for (Eigen::Index i = 0; i < map.rows(); ++i) {
    if (pattern.bit(static_cast<int>(i)) == 0) {
      map.row(i).setZero();
      offset(i) = 0.0;
    }
  }
  return AffineRegion(std::move(map), std::move(offset), std::move(domain));
}

// Splits one region across all feasible activation patterns of a ReLU layer.
// Emits regions in ascending pattern-index order.
std::vector<AffineRegion> split_region_patterns(const Layer& layer,
                                                const AffineRegion& region,
                                                int pattern_cap,
                                                std::size_t& pruned) {
  const Eigen::MatrixXd pre_map = layer.weights * region.map;
  const Eigen::VectorXd pre_offset = layer.weights * region.offset + layer.bias;
  const int n = static_cast<int>(layer.out_dim());

  std::vector<AffineRegion> out;
  for (const ActivationPattern& pattern : enumerate_patterns(n, pattern_cap)) {
    Polyhedron candidate = pattern_domain(region.domain, pre_map, pre_offset, pattern);
    if (!lp_feasible(candidate.ineq_lhs, candidate.ineq_rhs, candidate.eq_lhs,
                     candidate.eq_rhs)
             .feasible) {
      ++pruned;
      continue;
    }
    out.push_back(pattern_region(pre_map, pre_offset, pattern, tidy_domain(std::move(candidate))));
  }
  return out;
}

// Neuron-by-neuron sign splitting. Explores the sign tree depth-first with
// the inactive branch first, so leaves appear in the same ascending pattern
// order as the enumeration above and the emitted regions are identical.
std::vector<AffineRegion> split_region_neuronwise(const Layer& layer,
                                                  const AffineRegion& region,
                                                  std::size_t& pruned) {
  const Eigen::MatrixXd pre_map = layer.weights * region.map;
  const Eigen::VectorXd pre_offset = layer.weights * region.offset + layer.bias;
  const int n = static_cast<int>(layer.out_dim());
  const Eigen::Index base_rows = region.domain.num_inequalities();
  const Eigen::Index d = region.domain.dim();

  std::vector<AffineRegion> out;

  struct Node {
    Eigen::MatrixXd rows;    // accumulated sign rows, one per decided neuron
    Eigen::VectorXd rhs;
    std::uint64_t bits = 0;  // decided prefix, neuron 0 at the MSB end
    int depth = 0;
  };

  auto feasible = [&](const Node& node) {
    Eigen::MatrixXd A(base_rows + node.depth, d);
    Eigen::VectorXd b(A.rows());
    A.topRows(base_rows) = region.domain.ineq_lhs;
    b.head(base_rows) = region.domain.ineq_rhs;
    if (node.depth > 0) {
      A.bottomRows(node.depth) = node.rows.topRows(node.depth);
      b.tail(node.depth) = node.rhs.head(node.depth);
    }
    return lp_feasible(A, b, region.domain.eq_lhs, region.domain.eq_rhs).feasible;
  };

  auto build_leaf = [&](const Node& node) {
    ActivationPattern pattern{node.bits, n};
    Polyhedron domain = pattern_domain(region.domain, pre_map, pre_offset, pattern);
    out.push_back(pattern_region(pre_map, pre_offset, pattern, tidy_domain(std::move(domain))));
  };

  // Recursive descent kept explicit to bound stack usage on wide layers.
  std::vector<Node> stack;
  Node root;
  root.rows = Eigen::MatrixXd(n, d);
  root.rhs = Eigen::VectorXd(n);
  stack.push_back(std::move(root));

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();

    if (node.depth == n) {
      build_leaf(node);
      continue;
    }

    const Eigen::Index i = node.depth;
    // Inactive branch (bit 0): g_i(x) <= 0, row i of the map gets zeroed at
    // the leaf. Active branch (bit 1): g_i(x) >= 0.
    Node active = node;
    active.rows.row(i) = -pre_map.row(i);
    active.rhs(i) = pre_offset(i);
    active.bits = (node.bits << 1) | 1u;
    active.depth = node.depth + 1;

    Node inactive = std::move(node);
    inactive.rows.row(i) = pre_map.row(i);
    inactive.rhs(i) = -pre_offset(i);
    inactive.bits = inactive.bits << 1;
    inactive.depth = i + 1;

    // Push active first; the LIFO stack then explores the inactive branch
    // first, which emits leaves in ascending pattern order.
    if (feasible(active)) {
      stack.push_back(std::move(active));
    } else {
      pruned += 1;
    }
    if (feasible(inactive)) {
      stack.push_back(std::move(inactive));
    } else {
      pruned += 1;
    }
  }

  return out;
}

std::vector<AffineRegion> split_region(const Layer& layer, const AffineRegion& region,
                                       ReachMode mode, int pattern_cap,
                                       std::size_t& pruned) {
  if (mode == ReachMode::kPatterns)
    return split_region_patterns(layer, region, pattern_cap, pruned);
  return split_region_neuronwise(layer, region, pruned);
}

void check_relu_inputs(const Layer& layer, const ReachSet& x) {
  if (layer.activation != Activation::kRelu)
    throw ShapeError("relu layer reach: layer is not a ReLU layer");
  if (x.out_dim != layer.in_dim())
    throw DimensionMismatch("relu layer reach: reach set dim " +
                            std::to_string(x.out_dim) + " vs layer input dim " +
                            std::to_string(layer.in_dim()));
}

ReachSet collect(const ReachSet& x, const Layer& layer,
                 std::vector<AffineRegion> regions, std::size_t pruned,
                 LayerStats* stats) {
  ReachSet out;
  out.layer_index = x.layer_index + 1;
  out.out_dim = layer.out_dim();
  out.regions = std::move(regions);
  if (stats != nullptr) {
    stats->kept = out.regions.size();
    stats->pruned = pruned;
    stats->candidates = stats->kept + stats->pruned;
  }
  return out;
}

}  // namespace

ReachSet relu_layer_reach_patterns(const Layer& layer, const ReachSet& x,
                                   int pattern_cap, LayerStats* stats) {
  check_relu_inputs(layer, x);
  std::size_t pruned = 0;
  std::vector<AffineRegion> regions;
  for (const AffineRegion& region : x.regions) {
    std::vector<AffineRegion> split =
        split_region_patterns(layer, region, pattern_cap, pruned);
    regions.insert(regions.end(), std::make_move_iterator(split.begin()),
                   std::make_move_iterator(split.end()));
  }
  return collect(x, layer, std::move(regions), pruned, stats);
}

ReachSet relu_layer_reach_neuronwise(const Layer& layer, const ReachSet& x,
                                     LayerStats* stats) {
  check_relu_inputs(layer, x);
  std::size_t pruned = 0;
  std::vector<AffineRegion> regions;
  for (const AffineRegion& region : x.regions) {
    std::vector<AffineRegion> split = split_region_neuronwise(layer, region, pruned);
    regions.insert(regions.end(), std::make_move_iterator(split.begin()),
                   std::make_move_iterator(split.end()));
  }
  return collect(x, layer, std::move(regions), pruned, stats);
}

ReachSet linear_layer_reach(const Layer& layer, const ReachSet& x, LayerStats* stats) {
  if (layer.activation != Activation::kLinear)
    throw ShapeError("linear layer reach: layer is not a linear layer");
  if (x.out_dim != layer.in_dim())
    throw DimensionMismatch("linear layer reach: reach set dim mismatch");
  ReachSet out;
  out.layer_index = x.layer_index + 1;
  out.out_dim = layer.out_dim();
  out.regions.reserve(x.regions.size());
  for (const AffineRegion& region : x.regions)
    out.regions.push_back(region.compose(layer.weights, layer.bias));
  if (stats != nullptr) {
    stats->kept = out.regions.size();
    stats->pruned = 0;
    stats->candidates = out.regions.size();
  }
  return out;
}

namespace {

int compare_matrices(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows() ? -1 : 1;
  if (a.cols() != b.cols()) return a.cols() < b.cols() ? -1 : 1;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) < b(i, j)) return -1;
      if (a(i, j) > b(i, j)) return 1;
    }
  return 0;
}

int compare_vectors(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return -1;
    if (a(i) > b(i)) return 1;
  }
  return 0;
}

bool region_less(const AffineRegion& a, const AffineRegion& b) {
  if (int c = compare_vectors(a.offset, b.offset)) return c < 0;
  if (int c = compare_matrices(a.map, b.map)) return c < 0;
  if (int c = compare_vectors(a.domain.ineq_rhs, b.domain.ineq_rhs)) return c < 0;
  if (int c = compare_matrices(a.domain.ineq_lhs, b.domain.ineq_lhs)) return c < 0;
  if (int c = compare_vectors(a.domain.eq_rhs, b.domain.eq_rhs)) return c < 0;
  return compare_matrices(a.domain.eq_lhs, b.domain.eq_lhs) < 0;
}

}  // namespace

void canonical_sort(std::vector<AffineRegion>& regions) {
  std::stable_sort(regions.begin(), regions.end(), region_less);
}

std::pair<ReachSet, ReachStats> network_reach(const Network& net,
                                              const UnionOfPolyhedra& x0,
                                              const ReachOptions& options) {
  if (x0.dim() != net.input_dim)
    throw DimensionMismatch("network_reach: input set dim " +
                            std::to_string(x0.dim()) + " vs network input dim " +
                            std::to_string(net.input_dim));

  const auto total_start = Clock::now();

  ReachSet current;
  current.layer_index = 0;
  current.out_dim = net.input_dim;
  for (std::size_t s = 0; s < x0.pieces.size(); ++s) {
    if (is_empty(x0.pieces[s])) {
      log_warn("network_reach: dropping empty input piece " + std::to_string(s));
      continue;
    }
    current.regions.push_back(AffineRegion::identity(x0.pieces[s]));
  }

  int jobs = options.jobs;
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#else
  jobs = 1;
#endif

  ReachStats stats;
  stats.per_layer.reserve(net.layers.size());

  for (const Layer& layer : net.layers) {
    const auto layer_start = Clock::now();
    LayerStats layer_stats;

    if (layer.activation == Activation::kLinear) {
      current = linear_layer_reach(layer, current, &layer_stats);
    } else {
      check_relu_inputs(layer, current);
      const std::size_t count = current.regions.size();
      std::vector<std::vector<AffineRegion>> buckets(count);
      std::vector<std::size_t> pruned(count, 0);
      std::exception_ptr failure;

      if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i)
          buckets[i] = split_region(layer, current.regions[i], options.mode,
                                    options.pattern_cap, pruned[i]);
      } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (std::size_t i = 0; i < count; ++i) {
          try {
            buckets[i] = split_region(layer, current.regions[i], options.mode,
                                      options.pattern_cap, pruned[i]);
          } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
          }
        }
#else
        for (std::size_t i = 0; i < count; ++i)
          buckets[i] = split_region(layer, current.regions[i], options.mode,
                                    options.pattern_cap, pruned[i]);
#endif
      }
      if (failure) std::rethrow_exception(failure);

      ReachSet next;
      next.layer_index = current.layer_index + 1;
      next.out_dim = layer.out_dim();
      for (std::size_t i = 0; i < count; ++i) {
        next.regions.insert(next.regions.end(),
                            std::make_move_iterator(buckets[i].begin()),
                            std::make_move_iterator(buckets[i].end()));
        layer_stats.pruned += pruned[i];
      }
      layer_stats.kept = next.regions.size();
      layer_stats.candidates = layer_stats.kept + layer_stats.pruned;
      current = std::move(next);
    }

    canonical_sort(current.regions);
    layer_stats.seconds = seconds_since(layer_start);
    stats.per_layer.push_back(layer_stats);

    if (options.region_cap > 0 && current.regions.size() > options.region_cap)
      throw RegionCapExceeded("network_reach: " +
                              std::to_string(current.regions.size()) +
                              " regions exceed the cap of " +
                              std::to_string(options.region_cap) + " after layer " +
                              std::to_string(current.layer_index));
  }

  stats.total_seconds = seconds_since(total_start);
  return {std::move(current), std::move(stats)};
}

UnionOfPolyhedra relu_function_reach(const UnionOfPolyhedra& x, int pattern_cap) {
  // ReLU as a width-n identity layer; image H-reps come from projection.
  Layer layer(Eigen::MatrixXd::Identity(x.dim(), x.dim()),
              Eigen::VectorXd::Zero(x.dim()), Activation::kRelu);

  ReachSet seed;
  seed.layer_index = 0;
  seed.out_dim = x.dim();
  for (const Polyhedron& piece : x.pieces) {
    if (is_empty(piece)) continue;
    seed.regions.push_back(AffineRegion::identity(piece));
  }

  ReachSet image = relu_layer_reach_patterns(layer, seed, pattern_cap);
  std::vector<Polyhedron> pieces;
  pieces.reserve(image.regions.size());
  for (const AffineRegion& region : image.regions)
    pieces.push_back(region_to_polyhedron(region));
  return UnionOfPolyhedra(x.dim(), std::move(pieces));
}

UnionOfPolyhedra export_hrep(const ReachSet& y, int row_cap) {
  std::vector<Polyhedron> pieces;
  pieces.reserve(y.regions.size());
  for (const AffineRegion& region : y.regions)
    pieces.push_back(region_to_polyhedron(region, row_cap));
  return UnionOfPolyhedra(y.out_dim, std::move(pieces));
}

std::vector<std::vector<Eigen::Vector2d>> export_polygons_2d(const ReachSet& y) {
  if (y.out_dim != 2)
    throw DimensionMismatch("export_polygons_2d: output dimension must be 2");
  std::vector<std::vector<Eigen::Vector2d>> polygons;
  polygons.reserve(y.regions.size());
  for (const AffineRegion& region : y.regions)
    polygons.push_back(vertices_2d(region_to_polyhedron(region)));
  return polygons;
}

bool reach_contains(const ReachSet& y, const Eigen::VectorXd& point, double tol) {
  if (point.size() != y.out_dim)
    throw DimensionMismatch("reach_contains: point dimension mismatch");
  for (const AffineRegion& region : y.regions) {
    // Feasibility of z in domain with |map z + offset - point| <= tol.
    const Polyhedron& d = region.domain;
    const Eigen::Index m = d.num_inequalities();
    const Eigen::Index k = region.out_dim();
    Eigen::MatrixXd A(m + 2 * k, d.dim());
    Eigen::VectorXd b(A.rows());
    A.topRows(m) = d.ineq_lhs;
    b.head(m) = d.ineq_rhs;
    A.middleRows(m, k) = region.map;
    b.segment(m, k) = point - region.offset + Eigen::VectorXd::Constant(k, tol);
    A.bottomRows(k) = -region.map;
    b.tail(k) = region.offset - point + Eigen::VectorXd::Constant(k, tol);
    if (lp_feasible(A, b, d.eq_lhs, d.eq_rhs).feasible) return true;
  }
  return false;
}

}  // namespace polyreach
