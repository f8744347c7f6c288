#include "zid/admg.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace zid {

namespace {

const VariableSet kEmptySet;

void require_known(const Admg& g, const VariableSet& s, const char* what) {
  for (const auto& v : s) {
    if (!g.has_vertex(v))
      fail(errc::unknown_vertex, std::string(what) + " names '" + v.str() +
                                     "' which is not a vertex");
  }
}

}  // namespace

Admg Admg::build(VariableSet vertices, std::vector<DirectedEdge> directed,
                 std::vector<BidirectedEdge> bidirected) {
  Admg g;
  g.vertices_ = std::move(vertices);
  for (const auto& v : g.vertices_) {
    g.parents_[v];
    g.children_[v];
    g.siblings_[v];
  }

  for (auto& [tail, head] : directed) {
    if (tail == head)
      fail(errc::self_loop, "directed self-loop on '" + tail.str() + "'");
    if (!g.vertices_.count(tail) || !g.vertices_.count(head))
      fail(errc::unknown_vertex, "directed edge " + tail.str() + " -> " +
                                     head.str() + " uses an undeclared vertex");
    if (!g.directed_.emplace(tail, head).second)
      fail(errc::duplicate_edge,
           "duplicate directed edge " + tail.str() + " -> " + head.str());
    g.children_[tail].insert(head);
    g.parents_[head].insert(tail);
  }

  for (auto& [a, b] : bidirected) {
    if (a == b)
      fail(errc::self_loop, "bidirected self-loop on '" + a.str() + "'");
    if (!g.vertices_.count(a) || !g.vertices_.count(b))
      fail(errc::unknown_vertex, "bidirected edge " + a.str() + " <-> " +
                                     b.str() + " uses an undeclared vertex");
    auto norm = std::minmax(a, b);
    if (!g.bidirected_.emplace(norm.first, norm.second).second)
      fail(errc::duplicate_edge,
           "duplicate bidirected edge " + a.str() + " <-> " + b.str());
    g.siblings_[a].insert(b);
    g.siblings_[b].insert(a);
  }

  // Cycle check with an explicit path so the error can name one cycle.
  std::map<VariableId, int> state;  // 0 unvisited, 1 on stack, 2 done
  std::vector<VariableId> path;
  std::function<void(const VariableId&)> visit = [&](const VariableId& v) {
    state[v] = 1;
    path.push_back(v);
    for (const auto& c : g.children_.at(v)) {
      if (state[c] == 1) {
        auto it = std::find(path.begin(), path.end(), c);
        std::string cyc;
        for (; it != path.end(); ++it) cyc += it->str() + " -> ";
        fail(errc::cycle, "directed cycle: " + cyc + c.str());
      }
      if (state[c] == 0) visit(c);
    }
    path.pop_back();
    state[v] = 2;
  };
  for (const auto& v : g.vertices_)
    if (state[v] == 0) visit(v);

  return g;
}

bool Admg::has_directed(const VariableId& tail, const VariableId& head) const {
  return directed_.count({tail, head}) > 0;
}

bool Admg::has_bidirected(const VariableId& a, const VariableId& b) const {
  auto norm = std::minmax(a, b);
  return bidirected_.count({norm.first, norm.second}) > 0;
}

const VariableSet& Admg::parents(const VariableId& v) const {
  auto it = parents_.find(v);
  if (it == parents_.end())
    fail(errc::unknown_vertex, "'" + v.str() + "' is not a vertex");
  return it->second;
}

const VariableSet& Admg::children(const VariableId& v) const {
  auto it = children_.find(v);
  if (it == children_.end())
    fail(errc::unknown_vertex, "'" + v.str() + "' is not a vertex");
  return it->second;
}

const VariableSet& Admg::siblings(const VariableId& v) const {
  auto it = siblings_.find(v);
  if (it == siblings_.end())
    fail(errc::unknown_vertex, "'" + v.str() + "' is not a vertex");
  return it->second;
}

VariableSet Admg::ancestors(const VariableSet& of) const {
  require_known(*this, of, "ancestors()");
  VariableSet out = of;
  std::deque<VariableId> queue(of.begin(), of.end());
  while (!queue.empty()) {
    VariableId v = queue.front();
    queue.pop_front();
    for (const auto& p : parents_.at(v))
      if (out.insert(p).second) queue.push_back(p);
  }
  return out;
}

VariableSet Admg::descendants(const VariableSet& of) const {
  require_known(*this, of, "descendants()");
  VariableSet out = of;
  std::deque<VariableId> queue(of.begin(), of.end());
  while (!queue.empty()) {
    VariableId v = queue.front();
    queue.pop_front();
    for (const auto& c : children_.at(v))
      if (out.insert(c).second) queue.push_back(c);
  }
  return out;
}

Admg Admg::induced(const VariableSet& keep) const {
  require_known(*this, keep, "induced()");
  std::vector<DirectedEdge> d;
  std::vector<BidirectedEdge> b;
  for (const auto& e : directed_)
    if (keep.count(e.first) && keep.count(e.second)) d.push_back(e);
  for (const auto& e : bidirected_)
    if (keep.count(e.first) && keep.count(e.second)) b.push_back(e);
  return build(keep, std::move(d), std::move(b));
}

Admg Admg::mutilate(const VariableSet& overline,
                    const VariableSet& underline) const {
  require_known(*this, overline, "mutilate() overline");
  require_known(*this, underline, "mutilate() underline");
  std::vector<DirectedEdge> d;
  std::vector<BidirectedEdge> b;
  for (const auto& e : directed_) {
    if (overline.count(e.second)) continue;   // arrowhead into overline
    if (underline.count(e.first)) continue;   // tail out of underline
    d.push_back(e);
  }
  for (const auto& e : bidirected_) {
    if (overline.count(e.first) || overline.count(e.second)) continue;
    b.push_back(e);
  }
  return build(vertices_, std::move(d), std::move(b));
}

std::vector<VariableSet> Admg::c_components() const {
  std::vector<VariableSet> out;
  VariableSet seen;
  for (const auto& v : vertices_) {
    if (seen.count(v)) continue;
    VariableSet comp{v};
    std::deque<VariableId> queue{v};
    while (!queue.empty()) {
      VariableId u = queue.front();
      queue.pop_front();
      for (const auto& s : siblings_.at(u))
        if (comp.insert(s).second) queue.push_back(s);
    }
    seen.insert(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  // Component discovery already walks vertices in lexicographic order, so
  // components come out ordered by smallest member.
  return out;
}

std::vector<VariableId> Admg::topological_order() const {
  std::map<VariableId, int> indegree;
  for (const auto& v : vertices_) indegree[v] = static_cast<int>(parents_.at(v).size());
  VariableSet ready;
  for (const auto& [v, d] : indegree)
    if (d == 0) ready.insert(v);
  std::vector<VariableId> order;
  while (!ready.empty()) {
    VariableId v = *ready.begin();  // lexicographic tie-break
    ready.erase(ready.begin());
    order.push_back(v);
    for (const auto& c : children_.at(v))
      if (--indegree[c] == 0) ready.insert(c);
  }
  if (order.size() != vertices_.size())
    fail(errc::internal, "topological order on cyclic graph");
  return order;
}

VariableSet Admg::root_set() const {
  VariableSet out;
  for (const auto& v : vertices_)
    if (children_.at(v).empty()) out.insert(v);
  return out;
}

bool Admg::is_c_forest(const VariableSet& roots) const {
  require_known(*this, roots, "is_c_forest() roots");
  if (vertices_.empty()) return false;
  if (c_components().size() != 1) return false;
  for (const auto& v : vertices_)
    if (children_.at(v).size() > 1) return false;
  return root_set() == roots;
}

bool validate_hedge(const Admg& g, const Hedge& hedge, const VariableSet& x,
                    const VariableSet& y) {
  require_known(g, x, "validate_hedge() x");
  require_known(g, y, "validate_hedge() y");

  auto check_edges = [&](const VariableSet& vs,
                         const std::vector<DirectedEdge>& dir,
                         const std::vector<BidirectedEdge>& bid,
                         const char* label) {
    if (!is_subset(vs, g.vertices()))
      fail(errc::malformed_witness,
           std::string(label) + " vertices are not all in the graph");
    for (const auto& [t, h] : dir) {
      if (!vs.count(t) || !vs.count(h) || !g.has_directed(t, h))
        fail(errc::malformed_witness, std::string(label) + " directed edge " +
                                          t.str() + " -> " + h.str() +
                                          " is not available");
    }
    for (const auto& [a, b] : bid) {
      if (!vs.count(a) || !vs.count(b) || !g.has_bidirected(a, b))
        fail(errc::malformed_witness, std::string(label) + " bidirected edge " +
                                          a.str() + " <-> " + b.str() +
                                          " is not available");
    }
  };
  check_edges(hedge.f_vertices, hedge.f_directed, hedge.f_bidirected, "F");
  check_edges(hedge.fprime_vertices, hedge.fprime_directed,
              hedge.fprime_bidirected, "F'");

  // F' must be contained in F as an edge subgraph.
  if (!is_subset(hedge.fprime_vertices, hedge.f_vertices))
    fail(errc::malformed_witness, "F' vertices are not contained in F");
  auto contains_dir = [&](const DirectedEdge& e) {
    return std::find(hedge.f_directed.begin(), hedge.f_directed.end(), e) !=
           hedge.f_directed.end();
  };
  auto normalized = [](const BidirectedEdge& e) {
    return e.first < e.second ? e : BidirectedEdge(e.second, e.first);
  };
  auto contains_bid = [&](const BidirectedEdge& e) {
    const BidirectedEdge want = normalized(e);
    for (const auto& fe : hedge.f_bidirected) {
      if (normalized(fe) == want) return true;
    }
    return false;
  };
  for (const auto& e : hedge.fprime_directed)
    if (!contains_dir(e))
      fail(errc::malformed_witness, "F' directed edge missing from F");
  for (const auto& e : hedge.fprime_bidirected)
    if (!contains_bid(e))
      fail(errc::malformed_witness, "F' bidirected edge missing from F");

  auto as_graph = [](const VariableSet& vs, std::vector<DirectedEdge> dir,
                     std::vector<BidirectedEdge> bid) {
    return Admg::build(vs, std::move(dir), std::move(bid));
  };
  Admg f = as_graph(hedge.f_vertices, hedge.f_directed, hedge.f_bidirected);
  Admg fp = as_graph(hedge.fprime_vertices, hedge.fprime_directed,
                     hedge.fprime_bidirected);

  if (!f.is_c_forest(hedge.r)) return false;
  if (!fp.is_c_forest(hedge.r)) return false;
  if (disjoint(hedge.f_vertices, x)) return false;
  if (!disjoint(hedge.fprime_vertices, x)) return false;

  // Root set must stay ancestral for y once interventions on x are applied.
  Admg cut = g.mutilate(x, {});
  return is_subset(hedge.r, cut.ancestors(y));
}

}  // namespace zid
