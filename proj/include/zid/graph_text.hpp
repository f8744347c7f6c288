#pragma once

#include <string>
#include <string_view>

#include "zid/admg.hpp"

namespace zid {

// Line-oriented graph text:
//
//   # comment
//   node A          declares an isolated vertex
//   A -> B          directed edge (declares endpoints)
//   A <-> B         bidirected edge
//
// Blank lines are skipped. All problems surface as PARSE_ERROR with the
// offending line number, including structural ones (self-loops, duplicate
// edges, cycles).
Admg parse_graph(std::string_view text);

// Inverse of parse_graph, stable ordering: node lines for isolated vertices,
// then directed edges, then bidirected edges.
std::string render_graph(const Admg& g);

}  // namespace zid
