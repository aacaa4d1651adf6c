#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyreach/errors.hpp"
#include "polyreach/io.hpp"

using namespace polyreach;

TEST_CASE("network json round-trips byte-exactly") {
  NetworkSpec spec;
  spec.sizes = {3, 5, 2};
  Network net = random_network(spec, 123);
  const std::string once = network_to_json(net);
  const std::string twice = network_to_json(parse_network(once));
  CHECK(once == twice);

  // forward outputs preserved exactly
  Network loaded = parse_network(once);
  Eigen::VectorXd x(3);
  x << 0.25, -0.5, 0.75;
  CHECK(forward(net, x) == forward(loaded, x));
}

TEST_CASE("minimal one-layer network file") {
  Network net = parse_network(
      R"({"input_dim":2,"layers":[{"activation":"linear","W":[[1,0],[0,1]],"b":[0,0]}]})");
  CHECK(net.depth() == 1);
  CHECK(net.output_dim() == 2);
}

TEST_CASE("shape errors carry the layer index") {
  try {
    parse_network(
        R"({"input_dim":2,"layers":[{"activation":"relu","W":[[1,0],[0,1]],"b":[0,0,0]}]})");
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("layer 0") != std::string::npos);
  }
}

TEST_CASE("parse errors name the field") {
  CHECK_THROWS_AS(parse_network("{"), ParseError);
  try {
    parse_network(R"({"layers":[]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("input_dim") != std::string::npos);
  }
  try {
    parse_network(R"({"input_dim":2,"layers":[{"activation":"tanh","W":[[1,1]],"b":[0]}]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("activation") != std::string::npos);
  }
}

TEST_CASE("union json round-trip with and without equalities") {
  const std::string text =
      R"({"pieces":[{"A":[[1,0],[-1,0],[0,1],[0,-1]],"b":[1,1,1,1]},)"
      R"({"A":[[1,1]],"b":[0],"E":[[1,-1]],"f":[0]}]})";
  UnionOfPolyhedra u = parse_union(text);
  REQUIRE(u.size() == 2);
  CHECK(u.pieces[0].num_equalities() == 0);
  CHECK(u.pieces[1].num_equalities() == 1);
  CHECK(union_to_json(parse_union(union_to_json(u))) == union_to_json(u));
}

TEST_CASE("union rejects mismatched dimensions") {
  CHECK_THROWS_AS(
      parse_union(R"({"pieces":[{"A":[[1]],"b":[1]},{"A":[[1,0]],"b":[1]}]})"),
      ShapeError);
  CHECK_THROWS_AS(parse_union(R"({"pieces":[]})"), ParseError);
}

TEST_CASE("safety spec kinds") {
  SafetySpec ball = parse_safety_spec(
      R"({"kind":"unsafe_ball_inf","center":[0,5],"radius":1})");
  CHECK(ball.kind == SafetyKind::kUnsafeGiven);
  REQUIRE(ball.pieces.size() == 1);
  Eigen::VectorXd y(2);
  y << 0, 5;
  CHECK(ball.pieces.pieces[0].contains(y));
  y << 0, 3.5;
  CHECK_FALSE(ball.pieces.pieces[0].contains(y));

  SafetySpec unsafe = parse_safety_spec(
      R"({"kind":"unsafe","pieces":[{"C":[[1,0]],"d":[-2]}]})");
  CHECK(unsafe.kind == SafetyKind::kUnsafeGiven);

  SafetySpec safe = parse_safety_spec(
      R"({"kind":"safe","pieces":[{"C":[[1,0],[-1,0]],"d":[1,1]}]})");
  CHECK(safe.kind == SafetyKind::kSafeGiven);
  CHECK(safe.unsafe_region().size() == 2);

  CHECK_THROWS_AS(parse_safety_spec(R"({"kind":"maybe","pieces":[]})"), ParseError);
  CHECK_THROWS_AS(
      parse_safety_spec(
          R"({"kind":"safe","pieces":[{"C":[[1]],"d":[1]},{"C":[[1]],"d":[2]}]})"),
      ParseError);
}

TEST_CASE("reach json round-trip") {
  ReachSet reach;
  reach.layer_index = 2;
  reach.out_dim = 1;
  Eigen::MatrixXd m(1, 2);
  m << 0.5, -0.25;
  Eigen::VectorXd c(1);
  c << 0.125;
  reach.regions.emplace_back(m, c, Polyhedron::box(Eigen::Vector2d(-1, -1),
                                                   Eigen::Vector2d(1, 1)));
  ReachStats stats;
  stats.per_layer.push_back({10, 7, 3, 0.5});

  const std::string text = reach_to_json(reach, stats);
  auto [loaded, loaded_stats] = parse_reach(text);
  CHECK(loaded.layer_index == 2);
  REQUIRE(loaded.regions.size() == 1);
  CHECK(loaded.regions[0].map == reach.regions[0].map);
  CHECK(loaded.regions[0].offset == reach.regions[0].offset);
  REQUIRE(loaded_stats.per_layer.size() == 1);
  CHECK(loaded_stats.per_layer[0].kept == 7);
  CHECK(reach_to_json(loaded, loaded_stats) == text);
}

TEST_CASE("doubles survive a round-trip at 17 significant digits") {
  Eigen::MatrixXd m(1, 3);
  m << 0.1, -1.0 / 3.0, 1e-17;
  Eigen::VectorXd c(1);
  c << 2.5e300;
  ReachSet reach;
  reach.layer_index = 0;
  reach.out_dim = 1;
  reach.regions.emplace_back(m, c, Polyhedron::universe(3));
  ReachStats stats;
  auto [loaded, s2] = parse_reach(reach_to_json(reach, stats));
  CHECK(loaded.regions[0].map == m);
  CHECK(loaded.regions[0].offset == c);
}
