#include "polyreach/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polyreach/errors.hpp"

namespace polyreach {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------- writers

void w_double(std::string& s, double v) {
  if (v == 0.0) {  // normalize -0
    s += '0';
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  s += buf;
}

void w_size(std::string& s, std::size_t v) { s += std::to_string(v); }

void w_vector(std::string& s, const Eigen::VectorXd& v) {
  s += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    w_double(s, v(i));
  }
  s += ']';
}

void w_matrix(std::string& s, const Eigen::MatrixXd& m) {
  s += '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) s += ',';
    s += '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) s += ',';
      w_double(s, m(i, j));
    }
    s += ']';
  }
  s += ']';
}

void w_polyhedron_fields(std::string& s, const Polyhedron& p) {
  s += "\"A\":";
  w_matrix(s, p.ineq_lhs);
  s += ",\"b\":";
  w_vector(s, p.ineq_rhs);
  if (p.num_equalities() > 0) {
    s += ",\"E\":";
    w_matrix(s, p.eq_lhs);
    s += ",\"f\":";
    w_vector(s, p.eq_rhs);
  }
}

void w_counts(std::string& s, const ReachStats& stats) {
  s += "{\"per_layer\":[";
  for (std::size_t i = 0; i < stats.per_layer.size(); ++i) {
    if (i > 0) s += ',';
    const LayerStats& ls = stats.per_layer[i];
    s += "{\"candidates\":";
    w_size(s, ls.candidates);
    s += ",\"kept\":";
    w_size(s, ls.kept);
    s += ",\"pruned\":";
    w_size(s, ls.pruned);
    s += '}';
  }
  s += "]}";
}

// ---------------------------------------------------------------- parsers

const json& field(const json& j, const char* name, const std::string& ctx) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(ctx + ": missing field \"" + name + "\"");
  return *it;
}

double number(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw ParseError(ctx + ": expected a number");
  return j.get<double>();
}

Eigen::VectorXd vector_of(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = number(j[i], ctx + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd matrix_of(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::VectorXd row = vector_of(j[static_cast<std::size_t>(i)],
                                    ctx + "[" + std::to_string(i) + "]");
    if (cols < 0) {
      cols = row.size();
      m.resize(rows, cols);
    }
    if (row.size() != cols)
      throw ParseError(ctx + ": ragged matrix at row " + std::to_string(i));
    m.row(i) = row.transpose();
  }
  if (rows == 0) m.resize(0, 0);
  return m;
}

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Polyhedron polyhedron_of(const json& j, const std::string& ctx,
                         Eigen::Index expect_dim = -1) {
  Eigen::MatrixXd A = matrix_of(field(j, "A", ctx), ctx + ".A");
  Eigen::VectorXd b = vector_of(field(j, "b", ctx), ctx + ".b");
  Eigen::MatrixXd E(0, A.cols());
  Eigen::VectorXd f(0);
  if (j.contains("E") || j.contains("f")) {
    E = matrix_of(field(j, "E", ctx), ctx + ".E");
    f = vector_of(field(j, "f", ctx), ctx + ".f");
  }
  if (A.rows() == 0) {
    if (E.rows() > 0) A.resize(0, E.cols());
    else if (expect_dim >= 0) A.resize(0, expect_dim);
  }
  if (E.rows() == 0) E.resize(0, A.cols());
  try {
    return Polyhedron(std::move(A), std::move(b), std::move(E), std::move(f));
  } catch (const Error& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

}  // namespace

// ------------------------------------------------------------------ files

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << contents;
  if (!out) throw Error("write failed: " + path);
}

// ---------------------------------------------------------------- network

Network parse_network(const std::string& text) {
  const json j = parse_text(text, "network");
  const double in_dim = number(field(j, "input_dim", "network"), "network.input_dim");
  const json& layers_json = field(j, "layers", "network");
  if (!layers_json.is_array() || layers_json.empty())
    throw ParseError("network.layers: expected a nonempty array");

  std::vector<Layer> layers;
  for (std::size_t i = 0; i < layers_json.size(); ++i) {
    const std::string ctx = "network.layers[" + std::to_string(i) + "]";
    const json& lj = layers_json[i];
    const json& act = field(lj, "activation", ctx);
    if (!act.is_string()) throw ParseError(ctx + ".activation: expected a string");
    Activation activation;
    if (act == "relu") activation = Activation::kRelu;
    else if (act == "linear") activation = Activation::kLinear;
    else throw ParseError(ctx + ".activation: expected \"relu\" or \"linear\"");

    Eigen::MatrixXd w = matrix_of(field(lj, "W", ctx), ctx + ".W");
    Eigen::VectorXd b = vector_of(field(lj, "b", ctx), ctx + ".b");
    try {
      layers.emplace_back(std::move(w), std::move(b), activation);
    } catch (const Error& e) {
      throw ShapeError("layer " + std::to_string(i) + ": " + e.what());
    }
  }
  return Network(static_cast<Eigen::Index>(in_dim), std::move(layers));
}

Network load_network(const std::string& path) {
  return parse_network(read_file(path));
}

std::string network_to_json(const Network& net) {
  std::string s = "{\"input_dim\":";
  s += std::to_string(net.input_dim);
  s += ",\"layers\":[";
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    if (i > 0) s += ',';
    const Layer& l = net.layers[i];
    s += "{\"activation\":\"";
    s += l.activation == Activation::kRelu ? "relu" : "linear";
    s += "\",\"W\":";
    w_matrix(s, l.weights);
    s += ",\"b\":";
    w_vector(s, l.bias);
    s += '}';
  }
  s += "]}";
  return s;
}

// ------------------------------------------------------------------ union

UnionOfPolyhedra parse_union(const std::string& text) {
  const json j = parse_text(text, "input set");
  const json& pieces_json = field(j, "pieces", "input set");
  if (!pieces_json.is_array())
    throw ParseError("input set.pieces: expected an array");

  std::vector<Polyhedron> pieces;
  Eigen::Index dim = -1;
  for (std::size_t i = 0; i < pieces_json.size(); ++i) {
    Polyhedron p = polyhedron_of(pieces_json[i], "pieces[" + std::to_string(i) + "]", dim);
    if (dim >= 0 && p.dim() != dim)
      throw ShapeError("piece " + std::to_string(i) + ": dimension " +
                       std::to_string(p.dim()) + " differs from " + std::to_string(dim));
    dim = p.dim();
    pieces.push_back(std::move(p));
  }
  if (dim < 0) throw ParseError("input set: at least one piece required");
  return UnionOfPolyhedra(dim, std::move(pieces));
}

UnionOfPolyhedra load_union(const std::string& path) {
  return parse_union(read_file(path));
}

std::string union_to_json(const UnionOfPolyhedra& u) {
  std::string s = "{\"pieces\":[";
  for (std::size_t i = 0; i < u.pieces.size(); ++i) {
    if (i > 0) s += ',';
    s += '{';
    w_polyhedron_fields(s, u.pieces[i]);
    s += '}';
  }
  s += "]}";
  return s;
}

// ------------------------------------------------------------ safety spec

SafetySpec parse_safety_spec(const std::string& text) {
  const json j = parse_text(text, "safety spec");
  const json& kind = field(j, "kind", "safety spec");
  if (!kind.is_string()) throw ParseError("safety spec.kind: expected a string");

  SafetySpec spec;
  if (kind == "unsafe_ball_inf") {
    const Eigen::VectorXd center =
        vector_of(field(j, "center", "safety spec"), "safety spec.center");
    const double radius = number(field(j, "radius", "safety spec"), "safety spec.radius");
    if (radius <= 0.0) throw ParseError("safety spec.radius: must be positive");
    return unsafe_from_infinity_ball(center, radius);
  }
  if (kind == "unsafe") spec.kind = SafetyKind::kUnsafeGiven;
  else if (kind == "safe") spec.kind = SafetyKind::kSafeGiven;
  else throw ParseError("safety spec.kind: expected \"unsafe\", \"safe\" or \"unsafe_ball_inf\"");

  const json& pieces_json = field(j, "pieces", "safety spec");
  if (!pieces_json.is_array() || pieces_json.empty())
    throw ParseError("safety spec.pieces: expected a nonempty array");
  if (spec.kind == SafetyKind::kSafeGiven && pieces_json.size() != 1)
    throw ParseError("safety spec: a safe region must be a single polyhedron");

  std::vector<Polyhedron> pieces;
  Eigen::Index dim = -1;
  for (std::size_t i = 0; i < pieces_json.size(); ++i) {
    const std::string ctx = "pieces[" + std::to_string(i) + "]";
    const json& pj = pieces_json[i];
    Eigen::MatrixXd C = matrix_of(field(pj, "C", ctx), ctx + ".C");
    Eigen::VectorXd d = vector_of(field(pj, "d", ctx), ctx + ".d");
    try {
      Polyhedron p(std::move(C), std::move(d));
      if (dim >= 0 && p.dim() != dim)
        throw ShapeError(ctx + ": dimension mismatch across pieces");
      dim = p.dim();
      pieces.push_back(std::move(p));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(ctx + ": " + e.what());
    }
  }
  spec.pieces = UnionOfPolyhedra(dim, std::move(pieces));
  return spec;
}

SafetySpec load_safety_spec(const std::string& path) {
  return parse_safety_spec(read_file(path));
}

// ------------------------------------------------------------------ reach

std::string reach_to_json(const ReachSet& reach, const ReachStats& stats) {
  std::string s = "{\"layer\":";
  s += std::to_string(reach.layer_index);
  s += ",\"regions\":[";
  for (std::size_t i = 0; i < reach.regions.size(); ++i) {
    if (i > 0) s += ',';
    const AffineRegion& r = reach.regions[i];
    s += '{';
    w_polyhedron_fields(s, r.domain);
    s += ",\"M\":";
    w_matrix(s, r.map);
    s += ",\"c\":";
    w_vector(s, r.offset);
    s += '}';
  }
  s += "],\"stats\":";
  w_counts(s, stats);
  s += '}';
  return s;
}

std::pair<ReachSet, ReachStats> parse_reach(const std::string& text) {
  const json j = parse_text(text, "reach set");
  ReachSet reach;
  reach.layer_index =
      static_cast<int>(number(field(j, "layer", "reach set"), "reach set.layer"));

  const json& regions_json = field(j, "regions", "reach set");
  if (!regions_json.is_array()) throw ParseError("reach set.regions: expected an array");
  for (std::size_t i = 0; i < regions_json.size(); ++i) {
    const std::string ctx = "regions[" + std::to_string(i) + "]";
    const json& rj = regions_json[i];
    Eigen::MatrixXd map = matrix_of(field(rj, "M", ctx), ctx + ".M");
    Eigen::VectorXd offset = vector_of(field(rj, "c", ctx), ctx + ".c");
    Polyhedron domain = polyhedron_of(rj, ctx, map.cols());
    try {
      reach.regions.emplace_back(std::move(map), std::move(offset), std::move(domain));
    } catch (const Error& e) {
      throw ParseError(ctx + ": " + e.what());
    }
    if (reach.out_dim == 0) reach.out_dim = reach.regions.back().out_dim();
    else if (reach.regions.back().out_dim() != reach.out_dim)
      throw ShapeError(ctx + ": output dimension mismatch across regions");
  }

  ReachStats stats;
  if (j.contains("stats") && j["stats"].contains("per_layer")) {
    for (const json& lj : j["stats"]["per_layer"]) {
      LayerStats ls;
      ls.candidates = lj.value("candidates", std::size_t{0});
      ls.kept = lj.value("kept", std::size_t{0});
      ls.pruned = lj.value("pruned", std::size_t{0});
      stats.per_layer.push_back(ls);
    }
  }
  return {std::move(reach), std::move(stats)};
}

std::pair<ReachSet, ReachStats> load_reach(const std::string& path) {
  return parse_reach(read_file(path));
}

// --------------------------------------------------------------- exports

std::string polygons_to_json(const std::vector<std::vector<Eigen::Vector2d>>& polys) {
  std::string s = "{\"polygons\":[";
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (i > 0) s += ',';
    s += '[';
    for (std::size_t k = 0; k < polys[i].size(); ++k) {
      if (k > 0) s += ',';
      s += '[';
      w_double(s, polys[i][k].x());
      s += ',';
      w_double(s, polys[i][k].y());
      s += ']';
    }
    s += ']';
  }
  s += "]}";
  return s;
}

std::string verdict_to_json(const Verdict& verdict) {
  std::string s = "{\"status\":\"";
  s += verdict.safe ? "SAFE" : "UNSAFE";
  s += "\",\"counterexample\":";
  if (verdict.counterexample) {
    const Counterexample& ce = *verdict.counterexample;
    s += "{\"input\":";
    w_vector(s, ce.input);
    s += ",\"output\":";
    w_vector(s, ce.output);
    s += ",\"region_index\":";
    w_size(s, ce.region_index);
    s += ",\"piece_index\":";
    w_size(s, ce.piece_index);
    s += '}';
  } else {
    s += "null";
  }
  s += ",\"checked_pairs\":";
  w_size(s, verdict.checked_pairs);
  s += ",\"stats\":";
  w_counts(s, verdict.reach_stats);
  s += '}';
  return s;
}

std::string soundness_report_to_json(const SoundnessReport& report) {
  std::string s = "{\"samples\":";
  w_size(s, report.samples);
  s += ",\"failures\":";
  w_size(s, report.failures);
  s += ",\"max_residual\":";
  w_double(s, report.max_residual);
  s += ",\"failure_details\":[";
  for (std::size_t i = 0; i < report.failure_details.size(); ++i) {
    if (i > 0) s += ',';
    const SoundnessFailure& fd = report.failure_details[i];
    s += "{\"input\":";
    w_vector(s, fd.input);
    s += ",\"output\":";
    w_vector(s, fd.output);
    s += ",\"residual\":";
    w_double(s, fd.residual);
    s += '}';
  }
  s += "]}";
  return s;
}

std::string stats_to_json(const ReachStats& stats, bool include_timing) {
  std::string s = "{\"per_layer\":[";
  for (std::size_t i = 0; i < stats.per_layer.size(); ++i) {
    if (i > 0) s += ',';
    const LayerStats& ls = stats.per_layer[i];
    s += "{\"layer\":";
    w_size(s, i + 1);
    s += ",\"candidates\":";
    w_size(s, ls.candidates);
    s += ",\"kept\":";
    w_size(s, ls.kept);
    s += ",\"pruned\":";
    w_size(s, ls.pruned);
    if (include_timing) {
      s += ",\"seconds\":";
      w_double(s, ls.seconds);
    }
    s += '}';
  }
  s += ']';
  if (include_timing) {
    s += ",\"total_seconds\":";
    w_double(s, stats.total_seconds);
  }
  s += '}';
  return s;
}

}  // namespace polyreach
