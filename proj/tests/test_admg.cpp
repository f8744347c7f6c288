#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <initializer_list>
#include <string>
#include <vector>

#include "support/checks.hpp"
#include "zid/admg.hpp"
#include "zid/graph_text.hpp"

using support::thrown_code;
using zid::Admg;
using zid::BidirectedEdge;
using zid::DirectedEdge;
using zid::errc;
using zid::Hedge;
using zid::parse_graph;
using zid::render_graph;
using zid::VariableId;
using zid::VariableSet;

namespace {

VariableId vid(const std::string& s) { return VariableId(s); }

VariableSet vs(std::initializer_list<const char*> names) {
  VariableSet out;
  for (const char* n : names) out.insert(VariableId(n));
  return out;
}

// A -> C, B -> C, C -> D, A <-> B, B <-> D.
Admg diamond() {
  return parse_graph("A -> C\nB -> C\nC -> D\nA <-> B\nB <-> D\n");
}

}  // namespace

TEST_CASE("build rejects structural defects with stable codes") {
  CHECK(thrown_code([] {
          Admg::build(vs({"A", "B", "C"}),
                      {{vid("A"), vid("B")},
                       {vid("B"), vid("C")},
                       {vid("C"), vid("A")}},
                      {});
        }) == errc::cycle);
  CHECK(thrown_code([] {
          Admg::build(vs({"A"}), {{vid("A"), vid("A")}}, {});
        }) == errc::self_loop);
  CHECK(thrown_code([] {
          Admg::build(vs({"A"}), {}, {{vid("A"), vid("A")}});
        }) == errc::self_loop);
  CHECK(thrown_code([] {
          Admg::build(vs({"A"}), {{vid("A"), vid("B")}}, {});
        }) == errc::unknown_vertex);
  CHECK(thrown_code([] {
          Admg::build(vs({"A", "B"}),
                      {{vid("A"), vid("B")}, {vid("A"), vid("B")}}, {});
        }) == errc::duplicate_edge);
  // Bidirected arcs are unordered: the flipped copy is the same edge.
  CHECK(thrown_code([] {
          Admg::build(vs({"A", "B"}), {},
                      {{vid("A"), vid("B")}, {vid("B"), vid("A")}});
        }) == errc::duplicate_edge);
}

TEST_CASE("local relations") {
  const Admg g = diamond();
  CHECK(g.parents(vid("C")) == vs({"A", "B"}));
  CHECK(g.children(vid("B")) == vs({"C"}));
  CHECK(g.siblings(vid("B")) == vs({"A", "D"}));
  CHECK(g.siblings(vid("C")).empty());
  CHECK(g.has_directed(vid("A"), vid("C")));
  CHECK_FALSE(g.has_directed(vid("C"), vid("A")));
  CHECK(g.has_bidirected(vid("D"), vid("B")));  // orientation-free lookup
  CHECK(thrown_code([&] { g.parents(vid("Q")); }) == errc::unknown_vertex);
}

TEST_CASE("ancestor and descendant closures are reflexive and transitive") {
  const Admg g = diamond();
  CHECK(g.ancestors(vs({"D"})) == vs({"A", "B", "C", "D"}));
  CHECK(g.descendants(vs({"A"})) == vs({"A", "C", "D"}));
  CHECK(g.descendants(vs({"B"})) == vs({"B", "C", "D"}));
  CHECK(g.ancestors({}).empty());
  // Bidirected arcs do not transmit ancestry.
  CHECK(g.ancestors(vs({"B"})) == vs({"B"}));
}

TEST_CASE("induced subgraph keeps only fully contained edges") {
  const Admg sub = diamond().induced(vs({"A", "B", "C"}));
  CHECK(sub.vertices() == vs({"A", "B", "C"}));
  CHECK(sub.directed() ==
        std::set<DirectedEdge>{{vid("A"), vid("C")}, {vid("B"), vid("C")}});
  CHECK(sub.bidirected() == std::set<BidirectedEdge>{{vid("A"), vid("B")}});
}

TEST_CASE("mutilation cuts heads, tails and incident arcs") {
  const Admg g = parse_graph("Z -> X\nX -> Y\nZ <-> X\nZ <-> Y\n");

  // overline on Z: Z has no incoming directed edges, but both bidirected
  // arcs touch it and must go. Outgoing Z -> X stays.
  const Admg oz = g.mutilate(vs({"Z"}), {});
  CHECK(oz.vertices() == g.vertices());
  CHECK(oz.bidirected().empty());
  CHECK(oz.has_directed(vid("Z"), vid("X")));
  CHECK(oz.has_directed(vid("X"), vid("Y")));

  // overline on X: drops Z -> X and Z <-> X, keeps X -> Y and Z <-> Y.
  const Admg ox = g.mutilate(vs({"X"}), {});
  CHECK_FALSE(ox.has_directed(vid("Z"), vid("X")));
  CHECK(ox.has_directed(vid("X"), vid("Y")));
  CHECK_FALSE(ox.has_bidirected(vid("Z"), vid("X")));
  CHECK(ox.has_bidirected(vid("Z"), vid("Y")));

  // underline on X: drops the outgoing X -> Y only.
  const Admg ux = g.mutilate({}, vs({"X"}));
  CHECK(ux.has_directed(vid("Z"), vid("X")));
  CHECK_FALSE(ux.has_directed(vid("X"), vid("Y")));
  CHECK(ux.bidirected() == g.bidirected());
}

TEST_CASE("c-components are ordered by smallest member") {
  const Admg g = parse_graph("node A\nB <-> D\nC <-> E\n");
  const std::vector<VariableSet> want = {vs({"A"}), vs({"B", "D"}),
                                         vs({"C", "E"})};
  CHECK(g.c_components() == want);
}

TEST_CASE("topological order is edge-respecting and lexicographic") {
  const Admg g = parse_graph("D -> A\nD -> B\nA -> C\n");
  const std::vector<VariableId> want = {vid("D"), vid("A"), vid("B"),
                                        vid("C")};
  CHECK(g.topological_order() == want);
}

TEST_CASE("root set collects directed sinks") {
  CHECK(diamond().root_set() == vs({"D"}));
  CHECK(parse_graph("node A\nX -> Y\n").root_set() == vs({"A", "Y"}));
}

TEST_CASE("c-forest recognition") {
  const Admg bow = parse_graph("X -> Y\nX <-> Y\n");
  CHECK(bow.is_c_forest(vs({"Y"})));
  CHECK_FALSE(bow.is_c_forest(vs({"X"})));  // roots must equal the sinks

  // Two directed children disqualify a vertex.
  const Admg fan = parse_graph("A -> B\nA -> C\nA <-> B\nB <-> C\n");
  CHECK_FALSE(fan.is_c_forest(vs({"B", "C"})));

  // The bidirected part must span everything in one component.
  const Admg split = parse_graph("X -> Y\n");
  CHECK_FALSE(split.is_c_forest(vs({"Y"})));

  const Admg lone = parse_graph("node A\n");
  CHECK(lone.is_c_forest(vs({"A"})));

  CHECK_FALSE(Admg().is_c_forest({}));
}

TEST_CASE("validate_hedge separates rejection from malformation") {
  const Admg g = parse_graph("X -> Y\nX <-> Y\nnode Z\n");
  Hedge h;
  h.f_vertices = vs({"X", "Y"});
  h.f_directed = {{vid("X"), vid("Y")}};
  h.f_bidirected = {{vid("X"), vid("Y")}};
  h.fprime_vertices = vs({"Y"});
  h.r = vs({"Y"});

  CHECK(validate_hedge(g, h, vs({"X"}), vs({"Y"})));

  // Genuine non-witnesses return false...
  CHECK_FALSE(validate_hedge(g, h, vs({"Z"}), vs({"Y"})));  // F misses x
  Hedge wrong_roots = h;
  wrong_roots.r = vs({"X"});
  CHECK_FALSE(validate_hedge(g, wrong_roots, vs({"X"}), vs({"Y"})));
  Hedge overlapping = h;
  overlapping.fprime_vertices = vs({"X", "Y"});
  overlapping.fprime_directed = h.f_directed;
  overlapping.fprime_bidirected = h.f_bidirected;
  CHECK_FALSE(
      validate_hedge(g, overlapping, vs({"X"}), vs({"Y"})));  // F' meets x

  // ...while structurally broken ones throw.
  Hedge alien_edge = h;
  alien_edge.f_directed.push_back({vid("Y"), vid("X")});
  CHECK(thrown_code([&] {
          validate_hedge(g, alien_edge, vs({"X"}), vs({"Y"}));
        }) == errc::malformed_witness);

  Hedge escaped = h;
  escaped.fprime_vertices = vs({"Z"});
  CHECK(thrown_code([&] {
          validate_hedge(g, escaped, vs({"X"}), vs({"Y"}));
        }) == errc::malformed_witness);

  Hedge edge_outside_f = h;
  edge_outside_f.f_bidirected.clear();
  edge_outside_f.fprime_vertices = vs({"X", "Y"});
  edge_outside_f.fprime_bidirected = {{vid("X"), vid("Y")}};
  CHECK(thrown_code([&] {
          validate_hedge(g, edge_outside_f, vs({"X"}), vs({"Y"}));
        }) == errc::malformed_witness);
}

TEST_CASE("graph text parses comments, node lines and both edge kinds") {
  const Admg g = parse_graph(
      "# effect question\n"
      "\n"
      "node W\n"
      "A -> B\n"
      "A <-> B\n");
  CHECK(g.vertices() == vs({"A", "B", "W"}));
  CHECK(g.has_directed(vid("A"), vid("B")));
  CHECK(g.has_bidirected(vid("A"), vid("B")));
}

TEST_CASE("graph text errors carry the offending line") {
  const auto message_of = [](const char* text) {
    try {
      parse_graph(text);
    } catch (const zid::Error& e) {
      CHECK(e.code() == errc::parse_error);
      return std::string(e.what());
    }
    return std::string("<no error>");
  };

  CHECK(message_of("A -> B\nX ->\n").find("line 2") != std::string::npos);
  CHECK(message_of("A - B\n").find("line 1") != std::string::npos);
  CHECK(message_of("A -> A\n").find("line 1") != std::string::npos);
  // Duplicates and cycles are whole-file properties, pinned to the last
  // content line.
  CHECK(message_of("A -> B\nB -> A\n").find("line 2") != std::string::npos);
  CHECK(message_of("A -> B\n\nA -> B\n").find("line 3") != std::string::npos);
  CHECK(message_of("A -> 'B'\n").find("line 1") != std::string::npos);
}

TEST_CASE("render_graph round-trips through parse_graph") {
  const Admg g = parse_graph("node Q\nA -> B\nB -> C\nA <-> C\n");
  const Admg again = parse_graph(render_graph(g));
  CHECK(again.vertices() == g.vertices());
  CHECK(again.directed() == g.directed());
  CHECK(again.bidirected() == g.bidirected());
  // Isolated vertices survive only through explicit node lines.
  CHECK(render_graph(g).find("node Q") != std::string::npos);
}
