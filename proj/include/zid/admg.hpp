#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "zid/variable.hpp"

namespace zid {

using DirectedEdge = std::pair<VariableId, VariableId>;   // tail -> head
using BidirectedEdge = std::pair<VariableId, VariableId>; // stored min,max

// Acyclic directed mixed graph: directed edges plus bidirected arcs standing
// for unobserved common causes. Immutable after build(); all operations
// return fresh graphs or plain values.
class Admg {
public:
  // Default-constructed graphs are empty; useful as struct members.
  Admg() = default;

  static Admg build(VariableSet vertices,
                    std::vector<DirectedEdge> directed,
                    std::vector<BidirectedEdge> bidirected);

  const VariableSet& vertices() const noexcept { return vertices_; }
  const std::set<DirectedEdge>& directed() const noexcept { return directed_; }
  const std::set<BidirectedEdge>& bidirected() const noexcept { return bidirected_; }

  bool has_vertex(const VariableId& v) const { return vertices_.count(v) > 0; }
  bool has_directed(const VariableId& tail, const VariableId& head) const;
  bool has_bidirected(const VariableId& a, const VariableId& b) const;

  const VariableSet& parents(const VariableId& v) const;
  const VariableSet& children(const VariableId& v) const;
  const VariableSet& siblings(const VariableId& v) const;  // bidirected neighbours

  // Reflexive transitive closures along directed edges.
  VariableSet ancestors(const VariableSet& of) const;
  VariableSet descendants(const VariableSet& of) const;

  Admg induced(const VariableSet& keep) const;

  // Intervention surgery: overline removes arrowheads into the named
  // vertices (directed heads and both ends of incident bidirected arcs),
  // underline removes directed tails. Vertices stay.
  Admg mutilate(const VariableSet& overline, const VariableSet& underline) const;

  // Connected components of the bidirected part, each returned as a vertex
  // set; ordered by their lexicographically smallest member.
  std::vector<VariableSet> c_components() const;

  // Deterministic topological order, lexicographic among ready vertices.
  std::vector<VariableId> topological_order() const;

  // Directed sinks.
  VariableSet root_set() const;

  // Whether this graph is an R-rooted C-forest: one C-component spanning all
  // vertices, at most one directed child per vertex, and R exactly the sink
  // set. Empty graphs are not C-forests.
  bool is_c_forest(const VariableSet& roots) const;

private:
  VariableSet vertices_;
  std::set<DirectedEdge> directed_;
  std::set<BidirectedEdge> bidirected_;
  std::map<VariableId, VariableSet> parents_, children_, siblings_;
};

// A hedge witness: two nested C-forests F' ⊆ F sharing the root set R.
// Edge lists are explicit because F is generally a strict edge-subgraph of
// the graph it lives in.
struct Hedge {
  VariableSet f_vertices;
  std::vector<DirectedEdge> f_directed;
  std::vector<BidirectedEdge> f_bidirected;
  VariableSet fprime_vertices;
  std::vector<DirectedEdge> fprime_directed;
  std::vector<BidirectedEdge> fprime_bidirected;
  VariableSet r;
};

// Checks every hedge clause for effect query x -> y in G: both forests are
// R-rooted C-forests built from edges of G, F meets x, F' avoids x, F' ⊆ F,
// and R lies in An(y) of G with arrowheads into x removed. The containment
// on R follows the inclusive reading (R may equal the ancestor set).
// Malformed witnesses (edges absent from G, F' not contained in F) throw
// rather than return false.
bool validate_hedge(const Admg& g, const Hedge& hedge,
                    const VariableSet& x, const VariableSet& y);

}  // namespace zid
