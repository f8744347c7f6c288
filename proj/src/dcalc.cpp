#include "zid/dcalc.hpp"

#include <array>
#include <deque>
#include <map>
#include <set>
#include <utility>

namespace zid {

namespace {

// Augmented DAG: observed vertices plus one hidden parent per bidirected
// arc. Hidden nodes use indices < 0 so they cannot collide with any name.
struct AugmentedDag {
  std::map<VariableId, int> id;
  std::vector<std::vector<int>> parents, children;

  explicit AugmentedDag(const Admg& g) {
    int next = 0;
    for (const auto& v : g.vertices()) id[v] = next++;
    parents.resize(g.vertices().size() + g.bidirected().size());
    children.resize(parents.size());
    for (const auto& [t, h] : g.directed()) link(id[t], id[h]);
    for (const auto& [a, b] : g.bidirected()) {
      int hidden = next++;
      link(hidden, id[a]);
      link(hidden, id[b]);
    }
  }

  void link(int parent, int child) {
    parents[child].push_back(parent);
    children[parent].push_back(child);
  }
};

void require_disjoint_known(const Admg& g, const VariableSet& a,
                            const VariableSet& b, const VariableSet& given) {
  for (const auto* s : {&a, &b, &given})
    for (const auto& v : *s)
      if (!g.has_vertex(v))
        fail(errc::unknown_vertex,
             "m_separated: '" + v.str() + "' is not a vertex");
  if (!disjoint(a, b) || !disjoint(a, given) || !disjoint(b, given))
    fail(errc::overlapping_sets, "m_separated: query sets overlap");
}

}  // namespace

bool m_separated(const Admg& g, const VariableSet& a, const VariableSet& b,
                 const VariableSet& given) {
  require_disjoint_known(g, a, b, given);
  if (a.empty() || b.empty()) return true;

  AugmentedDag dag(g);
  size_t n = dag.parents.size();
  std::vector<bool> observed(n, false);
  for (const auto& v : given) observed[dag.id.at(v)] = true;

  // Ancestors of the conditioning set, conditioning set included.
  std::vector<bool> anc(n, false);
  {
    std::deque<int> queue;
    for (const auto& v : given) {
      int i = dag.id.at(v);
      anc[i] = true;
      queue.push_back(i);
    }
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int p : dag.parents[v])
        if (!anc[p]) {
          anc[p] = true;
          queue.push_back(p);
        }
    }
  }

  // Active-trail reachability over (vertex, direction) states. Direction
  // records how the trail arrived: "up" came from a child, "down" from a
  // parent. A collider can only be passed when it is ancestral for the
  // conditioning set.
  enum { kUp = 0, kDown = 1 };
  std::vector<std::array<bool, 2>> seen(n, {false, false});
  std::deque<std::pair<int, int>> queue;
  for (const auto& v : a) queue.emplace_back(dag.id.at(v), kUp);

  std::vector<bool> target(n, false);
  for (const auto& v : b) target[dag.id.at(v)] = true;

  while (!queue.empty()) {
    auto [v, dir] = queue.front();
    queue.pop_front();
    if (seen[v][dir]) continue;
    seen[v][dir] = true;
    if (!observed[v] && target[v]) return false;

    if (dir == kUp && !observed[v]) {
      for (int p : dag.parents[v]) queue.emplace_back(p, kUp);
      for (int c : dag.children[v]) queue.emplace_back(c, kDown);
    } else if (dir == kDown) {
      if (!observed[v])
        for (int c : dag.children[v]) queue.emplace_back(c, kDown);
      if (anc[v])
        for (int p : dag.parents[v]) queue.emplace_back(p, kUp);
    }
  }
  return true;
}

bool rule1_applicable(const Admg& g, const VariableSet& y,
                      const VariableSet& x_hat, const VariableSet& z_obs,
                      const VariableSet& w) {
  Admg cut = g.mutilate(x_hat, {});
  return m_separated(cut, y, z_obs, set_union(x_hat, w));
}

bool rule2_applicable(const Admg& g, const VariableSet& y,
                      const VariableSet& x_hat, const VariableSet& z_exchange,
                      const VariableSet& w) {
  Admg cut = g.mutilate(x_hat, z_exchange);
  return m_separated(cut, y, z_exchange, set_union(x_hat, w));
}

bool rule3_applicable(const Admg& g, const VariableSet& y,
                      const VariableSet& x_hat, const VariableSet& z_del,
                      const VariableSet& w) {
  // Members of z_del that are ancestors of w with x_hat already cut keep
  // their incoming arrows; deleting do() on them is only licensed through
  // the remaining ones.
  Admg x_cut = g.mutilate(x_hat, {});
  VariableSet z_star = set_minus(z_del, x_cut.ancestors(w));
  Admg cut = g.mutilate(set_union(x_hat, z_star), {});
  return m_separated(cut, y, z_del, set_union(x_hat, w));
}

}  // namespace zid
