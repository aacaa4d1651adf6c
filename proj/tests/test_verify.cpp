#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle_helpers.hpp"
#include "polyreach/errors.hpp"
#include "polyreach/verify.hpp"

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

Network identity_linear_2d() {
  return Network(2, {Layer(Eigen::MatrixXd::Identity(2, 2), vec({0, 0}),
                           Activation::kLinear)});
}

UnionOfPolyhedra unit_box_2d() {
  return UnionOfPolyhedra(2, {Polyhedron::box(vec({-1, -1}), vec({1, 1}))});
}

SafetySpec halfspace_unsafe(std::initializer_list<double> row, double rhs) {
  SafetySpec spec;
  spec.kind = SafetyKind::kUnsafeGiven;
  Eigen::MatrixXd C(1, static_cast<Eigen::Index>(row.size()));
  Eigen::Index j = 0;
  for (double v : row) C(0, j++) = v;
  Eigen::VectorXd d(1);
  d << rhs;
  spec.pieces = UnionOfPolyhedra(C.cols(), {Polyhedron(C, d)});
  return spec;
}

}  // namespace

TEST_CASE("identity network against a far halfspace is safe") {
  // unsafe: y1 >= 2, i.e. -y1 <= -2
  Verdict v = verify_network(identity_linear_2d(), unit_box_2d(),
                             halfspace_unsafe({-1, 0}, -2));
  CHECK(v.safe);
  CHECK_FALSE(v.counterexample.has_value());
  CHECK(v.checked_pairs == 1);
}

TEST_CASE("identity network against a touching halfspace is unsafe") {
  // unsafe: y1 >= 0.5
  Verdict v = verify_network(identity_linear_2d(), unit_box_2d(),
                             halfspace_unsafe({-1, 0}, -0.5));
  REQUIRE_FALSE(v.safe);
  REQUIRE(v.counterexample.has_value());
  const Counterexample& ce = *v.counterexample;
  CHECK(ce.input(0) >= 0.5 - 1e-7);
  CHECK((forward(identity_linear_2d(), ce.input) - ce.output).cwiseAbs().maxCoeff() <=
        1e-6);
  // output really is in the named unsafe piece
  CHECK(ce.output(0) >= 0.5 - 1e-6);
}

TEST_CASE("infinity ball specs") {
  SafetySpec origin_ball = unsafe_from_infinity_ball(vec({0, 0}), 1.0);
  REQUIRE(origin_ball.pieces.size() == 1);
  const Polyhedron& p = origin_ball.pieces.pieces[0];
  CHECK(p.num_inequalities() == 4);
  CHECK(test_oracle::poly_set_equal(p, Polyhedron::box(vec({-1, -1}), vec({1, 1}))));

  SafetySpec shifted = unsafe_from_infinity_ball(vec({0, 5}), 1.0);
  CHECK(test_oracle::poly_set_equal(shifted.pieces.pieces[0],
                                    Polyhedron::box(vec({-1, 4}), vec({1, 6}))));
  // the center is always a member
  CHECK(shifted.pieces.pieces[0].contains(vec({0, 5})));

  CHECK_THROWS_AS(unsafe_from_infinity_ball(vec({0}), 0.0), ShapeError);
}

TEST_CASE("complement of a polyhedron") {
  // 1-D: complement of y <= 1 is y >= 1
  UnionOfPolyhedra c1 = complement_of_polyhedron(Polyhedron(mat({{1}}), vec({1})));
  REQUIRE(c1.size() == 1);
  CHECK(c1.contains(vec({1.0})));
  CHECK(c1.contains(vec({5.0})));
  CHECK_FALSE(c1.contains(vec({0.5})));

  // box complement: 4 halfplane pieces; boundary belongs to both sides
  UnionOfPolyhedra c2 =
      complement_of_polyhedron(Polyhedron::box(vec({-1, -1}), vec({1, 1})));
  REQUIRE(c2.size() == 4);
  CHECK(c2.contains(vec({2, 0})));
  CHECK(c2.contains(vec({1, 0})));  // boundary
  CHECK_FALSE(c2.contains(vec({0, 0})));

  CHECK_THROWS_AS(
      complement_of_polyhedron(Polyhedron(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0),
                                          mat({{1}}), vec({0}))),
      EqualityNotComplementable);
}

TEST_CASE("safe-region specs verify through the complement") {
  // reach set [-1,1]^2 strictly inside the safe box [-2,2]^2 -> SAFE
  SafetySpec wide;
  wide.kind = SafetyKind::kSafeGiven;
  wide.pieces = UnionOfPolyhedra(2, {Polyhedron::box(vec({-2, -2}), vec({2, 2}))});
  CHECK(verify_network(identity_linear_2d(), unit_box_2d(), wide).safe);

  // safe box smaller than the reach set -> complement is reachable -> UNSAFE
  SafetySpec narrow;
  narrow.kind = SafetyKind::kSafeGiven;
  narrow.pieces =
      UnionOfPolyhedra(2, {Polyhedron::box(vec({-0.5, -0.5}), vec({0.5, 0.5}))});
  Verdict v = verify_network(identity_linear_2d(), unit_box_2d(), narrow);
  REQUIRE_FALSE(v.safe);
  REQUIRE(v.counterexample.has_value());
  CHECK(v.counterexample->output.cwiseAbs().maxCoeff() >= 0.5 - 1e-6);
}

TEST_CASE("verdicts agree with Monte-Carlo falsification") {
  NetworkSpec arch;
  arch.sizes = {2, 4, 4, 2};
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Network net = random_network(arch, seed);
    UnionOfPolyhedra x0 = unit_box_2d();

    // center the ball at a forwarded sample half the time, far away otherwise
    Eigen::VectorXd center;
    if (seed % 2 == 0) {
      center = forward(net, vec({0.25, -0.5}));
    } else {
      center = vec({50, 50});
    }
    SafetySpec spec = unsafe_from_infinity_ball(center, 0.5);
    Verdict v = verify_network(net, x0, spec);

    bool mc_hit = false;
    for (int s = 0; s < 100000 && !mc_hit; ++s) {
      Eigen::VectorXd x(2);
      x << unit(rng), unit(rng);
      Eigen::VectorXd y = forward(net, x);
      if ((y - center).cwiseAbs().maxCoeff() <= 0.5) mc_hit = true;
    }
    INFO("seed ", seed);
    if (mc_hit) CHECK_FALSE(v.safe);
    if (v.safe) CHECK_FALSE(mc_hit);
    if (!v.safe) {
      REQUIRE(v.counterexample.has_value());
      const Counterexample& ce = *v.counterexample;
      CHECK((forward(net, ce.input) - ce.output).cwiseAbs().maxCoeff() <= 1e-6);
      CHECK((ce.output - center).cwiseAbs().maxCoeff() <= 0.5 + 1e-6);
      CHECK(x0.contains(ce.input, 1e-7));
    }
  }
}

TEST_CASE("verdict invariant to mode and worker count") {
  NetworkSpec arch;
  arch.sizes = {2, 3, 3, 2};
  Network net = random_network(arch, 31);
  SafetySpec spec = unsafe_from_infinity_ball(forward(net, vec({0.1, 0.1})), 0.25);

  ReachOptions a;
  a.mode = ReachMode::kNeuronwise;
  a.jobs = 1;
  ReachOptions b;
  b.mode = ReachMode::kPatterns;
  b.jobs = 4;

  Verdict va = verify_network(net, unit_box_2d(), spec, a);
  Verdict vb = verify_network(net, unit_box_2d(), spec, b);
  CHECK(va.safe == vb.safe);
  REQUIRE(va.counterexample.has_value());
  REQUIRE(vb.counterexample.has_value());
  CHECK(va.counterexample->region_index == vb.counterexample->region_index);
  CHECK(va.counterexample->piece_index == vb.counterexample->piece_index);
  CHECK(va.counterexample->input == vb.counterexample->input);
  CHECK(va.checked_pairs == vb.checked_pairs);
}

TEST_CASE("spec dimension mismatch is rejected") {
  CHECK_THROWS_AS(
      verify_network(identity_linear_2d(), unit_box_2d(), halfspace_unsafe({1}, 0)),
      DimensionMismatch);
}
