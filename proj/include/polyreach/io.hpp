#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polyreach/geometry.hpp"
#include "polyreach/netmodel.hpp"
#include "polyreach/oracle.hpp"
#include "polyreach/reach.hpp"
#include "polyreach/verify.hpp"

namespace polyreach {

// Parsing throws ParseError with field context; shape problems in otherwise
// well-formed JSON throw ShapeError naming the offending layer or piece.
Network parse_network(const std::string& text);
Network load_network(const std::string& path);
UnionOfPolyhedra parse_union(const std::string& text);
UnionOfPolyhedra load_union(const std::string& path);
SafetySpec parse_safety_spec(const std::string& text);
SafetySpec load_safety_spec(const std::string& path);
std::pair<ReachSet, ReachStats> parse_reach(const std::string& text);
std::pair<ReachSet, ReachStats> load_reach(const std::string& path);

// Canonical serialization: fixed key order, doubles as %.17g, no volatile
// fields. Identical values always produce identical bytes.
std::string network_to_json(const Network& net);
std::string union_to_json(const UnionOfPolyhedra& u);
std::string reach_to_json(const ReachSet& reach, const ReachStats& stats);
std::string polygons_to_json(const std::vector<std::vector<Eigen::Vector2d>>& polys);
std::string verdict_to_json(const Verdict& verdict);
std::string soundness_report_to_json(const SoundnessReport& report);

// Per-layer counts, and optionally the measured wall times (volatile, so
// excluded from canonical artifacts).
std::string stats_to_json(const ReachStats& stats, bool include_timing);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace polyreach
