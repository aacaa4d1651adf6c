#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyreach/errors.hpp"
#include "polyreach/oracle.hpp"
#include "polyreach/reach.hpp"

using namespace polyreach;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

UnionOfPolyhedra box_union(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return UnionOfPolyhedra(lo.size(), {Polyhedron::box(lo, hi)});
}

}  // namespace

TEST_CASE("three-point grid on an interval") {
  auto pts = sample_input_set(box_union(vec({-1}), vec({1})), GridCountStrategy{3});
  REQUIRE(pts.size() == 3);
  CHECK(pts[0](0) == doctest::Approx(-1.0));
  CHECK(pts[1](0) == doctest::Approx(0.0));
  CHECK(pts[2](0) == doctest::Approx(1.0));
}

TEST_CASE("twenty points per axis on the unit cube gives 8000 samples") {
  auto pts = sample_input_set(box_union(vec({-1, -1, -1}), vec({1, 1, 1})),
                              GridCountStrategy{20});
  CHECK(pts.size() == 8000);
}

TEST_CASE("step grid walks in fixed increments") {
  auto pts = sample_input_set(box_union(vec({-1}), vec({1})), GridStepStrategy{0.05});
  CHECK(pts.size() == 41);
}

TEST_CASE("grid over a non-box piece keeps members only") {
  // triangle x1, x2 >= 0, x1 + x2 <= 1
  UnionOfPolyhedra tri(2, {Polyhedron(mat({{-1, 0}, {0, -1}, {1, 1}}), vec({0, 0, 1}))});
  auto pts = sample_input_set(tri, GridCountStrategy{11});
  CHECK(!pts.empty());
  CHECK(pts.size() < 121);  // the grid covers the bounding box, members survive
  for (const auto& p : pts) CHECK(tri.contains(p, 1e-7));
}

TEST_CASE("uniform samples are members") {
  UnionOfPolyhedra tri(2, {Polyhedron(mat({{-1, 0}, {0, -1}, {1, 1}}), vec({0, 0, 1}))});
  auto pts = sample_input_set(tri, UniformStrategy{100, 7});
  REQUIRE(pts.size() == 100);
  for (const auto& p : pts) CHECK(tri.contains(p, 1e-7));
  // deterministic for a fixed seed
  auto again = sample_input_set(tri, UniformStrategy{100, 7});
  CHECK(pts[0] == again[0]);
  CHECK(pts[99] == again[99]);
}

TEST_CASE("grid on an unbounded piece fails loudly") {
  UnionOfPolyhedra half(1, {Polyhedron(mat({{-1}}), vec({0}))});
  CHECK_THROWS_AS(sample_input_set(half, GridCountStrategy{5}), Unbounded);
}

TEST_CASE("soundness report on a consistent pair is clean") {
  Network net(2, {Layer(Eigen::MatrixXd::Identity(2, 2), vec({0, 0}), Activation::kRelu)});
  UnionOfPolyhedra x0 = box_union(vec({-1, -1}), vec({1, 1}));
  auto [reach, stats] = network_reach(net, x0);
  auto samples = sample_input_set(x0, GridCountStrategy{15});
  SoundnessReport report = check_soundness(net, x0, reach, samples);
  CHECK(report.samples == 225);
  CHECK(report.failures == 0);
  CHECK(report.max_residual <= 1e-6);
}

TEST_CASE("a corrupted reach set is caught") {
  Network net(2, {Layer(Eigen::MatrixXd::Identity(2, 2), vec({0, 0}), Activation::kRelu)});
  UnionOfPolyhedra x0 = box_union(vec({-1, -1}), vec({1, 1}));
  auto [reach, stats] = network_reach(net, x0);
  REQUIRE(reach.regions.size() == 4);
  // drop the full-box region; interior samples now have nowhere to go
  ReachSet corrupted = reach;
  corrupted.regions.erase(
      std::remove_if(corrupted.regions.begin(), corrupted.regions.end(),
                     [](const AffineRegion& r) {
                       return r.map.cwiseAbs().sum() > 1.5;  // the identity piece
                     }),
      corrupted.regions.end());
  REQUIRE(corrupted.regions.size() < reach.regions.size());

  auto samples = sample_input_set(x0, GridCountStrategy{9});
  SoundnessReport report = check_soundness(net, x0, corrupted, samples);
  CHECK(report.failures >= 1);
  CHECK(!report.failure_details.empty());
}

TEST_CASE("brute force reach spans the relu image") {
  Network net(1, {Layer(mat({{1}}), vec({0}), Activation::kRelu)});
  UnionOfPolyhedra x0 = box_union(vec({-1}), vec({2}));
  auto cloud = brute_force_reach(net, x0, 0.01);
  REQUIRE(cloud.size() == 301);
  double lo = 1e9, hi = -1e9;
  for (const auto& y : cloud) {
    lo = std::min(lo, y(0));
    hi = std::max(hi, y(0));
  }
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE("oracle cloud is contained in the exported union") {
  NetworkSpec arch;
  arch.sizes = {2, 3, 2};
  Network net = random_network(arch, 19);
  UnionOfPolyhedra x0 = box_union(vec({-1, -1}), vec({1, 1}));
  auto [reach, stats] = network_reach(net, x0);
  UnionOfPolyhedra hrep = export_hrep(reach);
  for (const auto& y : brute_force_reach(net, x0, 0.2))
    CHECK(hrep.contains(y, 1e-6));
}

TEST_CASE("every region contains at least one oracle point or witness") {
  NetworkSpec arch;
  arch.sizes = {2, 3, 3, 2};
  Network net = random_network(arch, 23);
  UnionOfPolyhedra x0 = box_union(vec({-1, -1}), vec({1, 1}));
  auto [reach, stats] = network_reach(net, x0);
  for (const AffineRegion& region : reach.regions) {
    // the Chebyshev witness of the domain maps into the region's image
    const Eigen::VectorXd z = interior_point(region.domain).point;
    const Eigen::VectorXd y = forward(net, z);
    CHECK((region.apply(z) - y).cwiseAbs().maxCoeff() <= 1e-9);
  }
}
