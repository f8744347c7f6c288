#include "zid/identify.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zid/errors.hpp"

namespace zid {
namespace {

using BindingMap = std::map<VariableId, ValueBinding>;

VariableSet keys(const BindingMap& m) {
  VariableSet out;
  for (const auto& [v, b] : m) out.insert(v);
  return out;
}

VariableSet keys(const Assignment& m) {
  VariableSet out;
  for (const auto& [v, val] : m) out.insert(v);
  return out;
}

bool is_own_ref(const VariableId& v, const ValueBinding& b) {
  return !b.is_constant() && b.ref() == v;
}

// ---------------------------------------------------------------------------
// Shared plumbing for both recursions.

// Per-run context: the full graph (its vocabulary decides what counts as a
// fresh dummy name), one fixed topological order every subgraph inherits,
// and the surrogate set.
struct RunCtx {
  const Admg* original = nullptr;
  std::map<VariableId, std::size_t> topo_pos;
  VariableSet z;
  int fresh_counter = 0;
};

RunCtx make_ctx(const Admg& g, VariableSet z) {
  RunCtx ctx;
  ctx.original = &g;
  const auto order = g.topological_order();
  for (std::size_t k = 0; k < order.size(); ++k) {
    ctx.topo_pos.emplace(order[k], k);
  }
  ctx.z = std::move(z);
  return ctx;
}

VariableId fresh_dummy(RunCtx& ctx, const VariableId& base) {
  for (;;) {
    VariableId cand(base.str() + "_" + std::to_string(++ctx.fresh_counter));
    if (!ctx.original->has_vertex(cand)) return cand;
  }
}

// The distribution a recursive call is relative to: either the raw data
// family itself (`is_table`, usable under any accumulated regime) or an
// expression already built over the variables in `scope`.
struct CarriedP {
  bool is_table = true;
  VariableSet scope;
  std::optional<Estimand> expr;
};

// Sum `drop` out of a composite carried expression. Dropped names are
// rebound to fresh dummies so identically-named references elsewhere in the
// final tree (query frees, outer binders) cannot capture them. Names the
// expression never mentions still get a binder: the expression is constant
// in them, and summing a constant over the domain is exactly the weight the
// marginal needs.
Estimand marginalize_expr(RunCtx& ctx, const Estimand& expr,
                          const VariableSet& drop) {
  if (drop.empty()) return expr;
  std::map<VariableId, VariableId> renames;
  std::vector<VariableId> binder;
  for (const auto& v : drop) {
    VariableId dummy = fresh_dummy(ctx, v);
    renames.emplace(v, dummy);
    binder.push_back(std::move(dummy));
  }
  return Estimand::sum(std::move(binder), rename_free_refs(expr, renames));
}

// Variables of `scope` that precede v in the run's topological order,
// listed in that order.
std::vector<VariableId> preceding(const RunCtx& ctx, const VariableSet& scope,
                                  const VariableId& v) {
  std::vector<VariableId> out;
  const std::size_t pos = ctx.topo_pos.at(v);
  for (const auto& u : scope) {
    if (ctx.topo_pos.at(u) < pos) out.push_back(u);
  }
  std::sort(out.begin(), out.end(), [&](const VariableId& a, const VariableId& b) {
    return ctx.topo_pos.at(a) < ctx.topo_pos.at(b);
  });
  return out;
}

std::vector<VariableId> to_vector(const VariableSet& s) {
  return std::vector<VariableId>(s.begin(), s.end());
}

Estimand sum_over(std::vector<VariableId> binder, Estimand body) {
  if (binder.empty()) return body;
  return Estimand::sum(std::move(binder), std::move(body));
}

// ---------------------------------------------------------------------------
// Surrogate-aware recursion.

// One call frame. Outcome variables always stand for their own name, so y is
// a plain set; x maps this call's interventions to the value each one takes
// in the enclosing expression; i holds surrogate interventions pinned at the
// canonical level, j surrogate interventions whose level is bound by an
// enclosing sum. Vertices named in i/j may have been dropped from g by
// ancestral restriction; the maps keep them because the data regime does.
struct ZState {
  Admg g;
  VariableSet y;
  BindingMap x;
  BindingMap i;
  BindingMap j;
  CarriedP p;
};

ValueBinding z_binding(const ZState& s, const VariableId& v) {
  if (s.y.count(v)) return ValueBinding::reference(v);
  for (const BindingMap* m : {&s.x, &s.i, &s.j}) {
    const auto it = m->find(v);
    if (it != m->end()) return it->second;
  }
  return ValueBinding::reference(v);
}

// The do()-side of every term this call emits: all i/j entries merged in
// variable order.
std::vector<VarBinding> z_regime(const ZState& s) {
  std::vector<VarBinding> out;
  auto ai = s.i.begin();
  auto aj = s.j.begin();
  while (ai != s.i.end() || aj != s.j.end()) {
    const bool take_i =
        aj == s.j.end() || (ai != s.i.end() && ai->first < aj->first);
    if (take_i) {
      out.push_back({ai->first, ai->second});
      ++ai;
    } else {
      out.push_back({aj->first, aj->second});
      ++aj;
    }
  }
  return out;
}

// P(v | cond) under the carried distribution, with every variable's value
// supplied by the calling context except those in keep_free, which stay as
// their own references for the caller to bind.
Estimand z_conditional(RunCtx& ctx, const ZState& s, const VariableId& v,
                       const std::vector<VariableId>& cond,
                       const VariableSet& keep_free) {
  const auto resolve = [&](const VariableId& u) {
    return keep_free.count(u) ? ValueBinding::reference(u) : z_binding(s, u);
  };
  if (s.p.is_table) {
    Term t;
    t.outcome.push_back({v, resolve(v)});
    for (const auto& u : cond) t.conditioning.push_back({u, resolve(u)});
    t.regime.intervened = z_regime(s);
    return Estimand::term(std::move(t));
  }
  const Estimand& expr = *s.p.expr;
  const VariableSet cset(cond.begin(), cond.end());
  VariableSet num_keep = cset;
  num_keep.insert(v);

  const auto bindings_for = [&](const VariableSet& kept) {
    BindingMap subs;
    for (const auto& u : kept) {
      ValueBinding b = resolve(u);
      if (!is_own_ref(u, b)) subs.emplace(u, std::move(b));
    }
    return subs;
  };

  Estimand num = marginalize_expr(ctx, expr, set_minus(s.p.scope, num_keep));
  if (const BindingMap subs = bindings_for(num_keep); !subs.empty()) {
    num = bind_free_refs(num, subs);
  }
  if (cond.empty()) return num;

  Estimand den = marginalize_expr(ctx, expr, set_minus(s.p.scope, cset));
  if (const BindingMap subs = bindings_for(cset); !subs.empty()) {
    den = bind_free_refs(den, subs);
  }
  return Estimand::ratio(std::move(num), std::move(den));
}

struct RecOut {
  std::optional<Estimand> e;
  std::optional<Fail> f;
};

RecOut z_recurse(RunCtx& ctx, ZState s) {
  const VariableSet& vtx = s.g.vertices();
  const VariableSet ij = set_union(keys(s.i), keys(s.j));
  const VariableSet ij_loc = set_intersect(ij, vtx);

  // No interventions left: the answer is the carried distribution summed
  // down to the outcome set.
  if (s.x.empty()) {
    if (s.p.is_table) {
      Term t;
      for (const auto& v : s.p.scope) t.outcome.push_back({v, z_binding(s, v)});
      t.regime.intervened = z_regime(s);
      return {sum_over(to_vector(set_minus(s.p.scope, s.y)),
                       Estimand::term(std::move(t))),
              std::nullopt};
    }
    return {marginalize_expr(ctx, *s.p.expr, set_minus(s.p.scope, s.y)),
            std::nullopt};
  }

  // Restrict to the ancestors of the outcome: everything else is noise.
  const VariableSet an = s.g.ancestors(s.y);
  if (an != vtx) {
    ZState next;
    next.g = s.g.induced(an);
    next.y = s.y;
    for (const auto& [v, b] : s.x) {
      if (an.count(v)) next.x.emplace(v, b);
    }
    next.i = std::move(s.i);
    next.j = std::move(s.j);
    if (s.p.is_table) {
      next.p = CarriedP{true, set_intersect(s.p.scope, an), std::nullopt};
    } else {
      const VariableSet scope = set_intersect(s.p.scope, an);
      next.p = CarriedP{
          false, scope,
          marginalize_expr(ctx, *s.p.expr, set_minus(s.p.scope, scope))};
    }
    return z_recurse(ctx, std::move(next));
  }

  // Variables with no causal route into the outcome once current
  // interventions are cut may be absorbed: surrogate members become pinned
  // experiments (severing their arcs), the rest become plain interventions.
  const VariableSet cut = set_union(keys(s.x), ij_loc);
  const VariableSet rest = set_minus(vtx, cut);
  const VariableSet an_cut = s.g.mutilate(cut, {}).ancestors(s.y);
  const VariableSet w_all = set_minus(rest, an_cut);
  if (!w_all.empty()) {
    const VariableSet zw =
        s.p.is_table ? set_intersect(w_all, ctx.z) : VariableSet{};
    const VariableSet w = set_minus(w_all, zw);
    ZState next = std::move(s);
    for (const auto& v : zw) next.i.emplace(v, ValueBinding::constant(0));
    for (const auto& v : w) next.x.emplace(v, ValueBinding::constant(0));
    if (!zw.empty()) {
      next.g = next.g.mutilate(zw, {});
      next.p.scope = set_minus(next.p.scope, zw);
    }
    return z_recurse(ctx, std::move(next));
  }

  const std::vector<VariableSet> comps = s.g.induced(rest).c_components();
  if (comps.empty()) {
    fail(errc::internal, "identify: no component contains the outcome set");
  }

  // Several confounded components: the effect factorises over them; each
  // factor is the component's own effect query under the remaining
  // variables, with surrogate members of the complement turned into
  // sum-level experiments.
  if (comps.size() > 1) {
    std::vector<Estimand> factors;
    for (const VariableSet& part : comps) {
      ZState sub;
      sub.p = s.p;
      VariableSet jmoves;
      if (s.p.is_table) {
        jmoves = set_minus(set_intersect(ctx.z, set_minus(vtx, part)),
                           set_union(keys(s.x), ij));
      }
      sub.g = jmoves.empty() ? s.g : s.g.mutilate(jmoves, {});
      sub.y = part;
      for (const auto& v : set_minus(set_minus(vtx, part),
                                     set_union(ij_loc, jmoves))) {
        sub.x.emplace(v, z_binding(s, v));
      }
      sub.i = s.i;
      sub.j = s.j;
      for (const auto& v : jmoves) sub.j.emplace(v, z_binding(s, v));
      if (!jmoves.empty()) sub.p.scope = set_minus(sub.p.scope, jmoves);

      RecOut out = z_recurse(ctx, std::move(sub));
      if (out.f) return out;
      factors.push_back(std::move(*out.e));
    }
    return {sum_over(to_vector(set_minus(rest, s.y)),
                     Estimand::product(std::move(factors))),
            std::nullopt};
  }

  const VariableSet& comp = comps.front();
  const std::vector<VariableSet> gcomps = s.g.c_components();

  // The whole graph is one confounded component: stuck.
  if (gcomps.size() == 1) {
    CallContext context;
    for (const auto& [v, b] : s.i) context.i_set.push_back({v, b});
    for (const auto& [v, b] : s.j) context.j_set.push_back({v, b});
    return {std::nullopt,
            Fail{s.g, comp, std::move(context), s.y}};
  }

  // The component stands alone in the carried distribution: read it off as
  // a product of topological conditionals.
  if (std::find(gcomps.begin(), gcomps.end(), comp) != gcomps.end()) {
    std::vector<VariableId> order = to_vector(comp);
    std::sort(order.begin(), order.end(),
              [&](const VariableId& a, const VariableId& b) {
                return ctx.topo_pos.at(a) < ctx.topo_pos.at(b);
              });
    std::vector<Estimand> factors;
    for (const auto& v : order) {
      factors.push_back(
          z_conditional(ctx, s, v, preceding(ctx, s.p.scope, v), {}));
    }
    return {sum_over(to_vector(set_minus(comp, s.y)),
                     Estimand::product(std::move(factors))),
            std::nullopt};
  }

  // The component sits strictly inside a larger confounded block: recurse
  // into the block, carrying its distribution (a product of topological
  // conditionals) as the new composite data source. The block never meets
  // the i/j sets — their arcs were severed, so each forms its own singleton
  // component — and all other context values are baked in here, so the
  // subcall starts with a clean context.
  for (const VariableSet& block : gcomps) {
    if (!is_subset(comp, block)) continue;
    std::vector<VariableId> order = to_vector(block);
    std::sort(order.begin(), order.end(),
              [&](const VariableId& a, const VariableId& b) {
                return ctx.topo_pos.at(a) < ctx.topo_pos.at(b);
              });
    std::vector<Estimand> factors;
    for (const auto& v : order) {
      factors.push_back(
          z_conditional(ctx, s, v, preceding(ctx, s.p.scope, v), block));
    }
    ZState sub;
    sub.g = s.g.induced(block);
    sub.y = s.y;
    for (const auto& [v, b] : s.x) {
      if (block.count(v)) sub.x.emplace(v, b);
    }
    sub.p = CarriedP{false, block, Estimand::product(std::move(factors))};
    return z_recurse(ctx, std::move(sub));
  }
  fail(errc::internal, "identify: component escaped every confounded block");
}

// ---------------------------------------------------------------------------
// Classic recursion (observational data only). Kept as an independent code
// path rather than the surrogate route with an empty surrogate set, so the
// two can check each other.

struct CState {
  Admg g;
  VariableSet y;
  BindingMap x;
  CarriedP p;
};

ValueBinding c_binding(const CState& s, const VariableId& v) {
  if (s.y.count(v)) return ValueBinding::reference(v);
  const auto it = s.x.find(v);
  if (it != s.x.end()) return it->second;
  return ValueBinding::reference(v);
}

Estimand c_conditional(RunCtx& ctx, const CState& s, const VariableId& v,
                       const std::vector<VariableId>& cond,
                       const VariableSet& keep_free) {
  const auto resolve = [&](const VariableId& u) {
    return keep_free.count(u) ? ValueBinding::reference(u) : c_binding(s, u);
  };
  if (s.p.is_table) {
    Term t;
    t.outcome.push_back({v, resolve(v)});
    for (const auto& u : cond) t.conditioning.push_back({u, resolve(u)});
    return Estimand::term(std::move(t));
  }
  const Estimand& expr = *s.p.expr;
  const VariableSet cset(cond.begin(), cond.end());
  VariableSet num_keep = cset;
  num_keep.insert(v);

  const auto bindings_for = [&](const VariableSet& kept) {
    BindingMap subs;
    for (const auto& u : kept) {
      ValueBinding b = resolve(u);
      if (!is_own_ref(u, b)) subs.emplace(u, std::move(b));
    }
    return subs;
  };

  Estimand num = marginalize_expr(ctx, expr, set_minus(s.p.scope, num_keep));
  if (const BindingMap subs = bindings_for(num_keep); !subs.empty()) {
    num = bind_free_refs(num, subs);
  }
  if (cond.empty()) return num;

  Estimand den = marginalize_expr(ctx, expr, set_minus(s.p.scope, cset));
  if (const BindingMap subs = bindings_for(cset); !subs.empty()) {
    den = bind_free_refs(den, subs);
  }
  return Estimand::ratio(std::move(num), std::move(den));
}

RecOut c_recurse(RunCtx& ctx, CState s) {
  const VariableSet& vtx = s.g.vertices();

  if (s.x.empty()) {
    if (s.p.is_table) {
      Term t;
      for (const auto& v : s.p.scope) t.outcome.push_back({v, c_binding(s, v)});
      return {sum_over(to_vector(set_minus(s.p.scope, s.y)),
                       Estimand::term(std::move(t))),
              std::nullopt};
    }
    return {marginalize_expr(ctx, *s.p.expr, set_minus(s.p.scope, s.y)),
            std::nullopt};
  }

  const VariableSet an = s.g.ancestors(s.y);
  if (an != vtx) {
    CState next;
    next.g = s.g.induced(an);
    next.y = s.y;
    for (const auto& [v, b] : s.x) {
      if (an.count(v)) next.x.emplace(v, b);
    }
    if (s.p.is_table) {
      next.p = CarriedP{true, set_intersect(s.p.scope, an), std::nullopt};
    } else {
      const VariableSet scope = set_intersect(s.p.scope, an);
      next.p = CarriedP{
          false, scope,
          marginalize_expr(ctx, *s.p.expr, set_minus(s.p.scope, scope))};
    }
    return c_recurse(ctx, std::move(next));
  }

  const VariableSet xv = keys(s.x);
  const VariableSet rest = set_minus(vtx, xv);
  const VariableSet an_cut = s.g.mutilate(xv, {}).ancestors(s.y);
  const VariableSet w = set_minus(rest, an_cut);
  if (!w.empty()) {
    CState next = std::move(s);
    for (const auto& v : w) next.x.emplace(v, ValueBinding::constant(0));
    return c_recurse(ctx, std::move(next));
  }

  const std::vector<VariableSet> comps = s.g.induced(rest).c_components();
  if (comps.empty()) {
    fail(errc::internal, "identify: no component contains the outcome set");
  }

  if (comps.size() > 1) {
    std::vector<Estimand> factors;
    for (const VariableSet& part : comps) {
      CState sub;
      sub.g = s.g;
      sub.y = part;
      for (const auto& v : set_minus(vtx, part)) {
        sub.x.emplace(v, c_binding(s, v));
      }
      sub.p = s.p;
      RecOut out = c_recurse(ctx, std::move(sub));
      if (out.f) return out;
      factors.push_back(std::move(*out.e));
    }
    return {sum_over(to_vector(set_minus(rest, s.y)),
                     Estimand::product(std::move(factors))),
            std::nullopt};
  }

  const VariableSet& comp = comps.front();
  const std::vector<VariableSet> gcomps = s.g.c_components();

  if (gcomps.size() == 1) {
    return {std::nullopt, Fail{s.g, comp, CallContext{}, s.y}};
  }

  if (std::find(gcomps.begin(), gcomps.end(), comp) != gcomps.end()) {
    std::vector<VariableId> order = to_vector(comp);
    std::sort(order.begin(), order.end(),
              [&](const VariableId& a, const VariableId& b) {
                return ctx.topo_pos.at(a) < ctx.topo_pos.at(b);
              });
    std::vector<Estimand> factors;
    for (const auto& v : order) {
      factors.push_back(
          c_conditional(ctx, s, v, preceding(ctx, s.p.scope, v), {}));
    }
    return {sum_over(to_vector(set_minus(comp, s.y)),
                     Estimand::product(std::move(factors))),
            std::nullopt};
  }

  for (const VariableSet& block : gcomps) {
    if (!is_subset(comp, block)) continue;
    std::vector<VariableId> order = to_vector(block);
    std::sort(order.begin(), order.end(),
              [&](const VariableId& a, const VariableId& b) {
                return ctx.topo_pos.at(a) < ctx.topo_pos.at(b);
              });
    std::vector<Estimand> factors;
    for (const auto& v : order) {
      factors.push_back(
          c_conditional(ctx, s, v, preceding(ctx, s.p.scope, v), block));
    }
    CState sub;
    sub.g = s.g.induced(block);
    sub.y = s.y;
    for (const auto& [v, b] : s.x) {
      if (block.count(v)) sub.x.emplace(v, b);
    }
    sub.p = CarriedP{false, block, Estimand::product(std::move(factors))};
    return c_recurse(ctx, std::move(sub));
  }
  fail(errc::internal, "identify: component escaped every confounded block");
}

// ---------------------------------------------------------------------------
// Entry validation.

void require_vertices(const Admg& g, const VariableSet& s, const char* role) {
  for (const auto& v : s) {
    if (!g.has_vertex(v)) {
      fail(errc::unknown_vertex,
           std::string(role) + " variable '" + v.str() + "' is not a vertex");
    }
  }
}

void validate_query(const Query& q, const Admg& g, bool allow_surrogates) {
  if (q.y.empty()) fail(errc::invalid_query, "outcome set must not be empty");
  if (!allow_surrogates && !q.z.empty()) {
    fail(errc::invalid_query,
         "plain identification takes no surrogate set; use the surrogate "
         "routine instead");
  }
  const VariableSet yv = keys(q.y);
  const VariableSet xv = keys(q.x);
  require_vertices(g, yv, "outcome");
  require_vertices(g, xv, "treatment");
  require_vertices(g, q.z, "surrogate");
  if (!disjoint(yv, xv)) {
    fail(errc::invalid_query, "outcome and treatment sets overlap");
  }
  if (!disjoint(yv, q.z)) {
    fail(errc::invalid_query, "outcome and surrogate sets overlap");
  }
  if (!disjoint(xv, q.z)) {
    fail(errc::invalid_query, "treatment and surrogate sets overlap");
  }
  for (const Assignment* a : {&q.y, &q.x}) {
    for (const auto& [v, value] : *a) {
      if (value < 0) {
        fail(errc::invalid_query,
             "negative value for variable '" + v.str() + "'");
      }
    }
  }
}

BindingMap query_x_map(const Query& q) {
  BindingMap x;
  for (const auto& [v, value] : q.x) x.emplace(v, ValueBinding::reference(v));
  return x;
}

// ---------------------------------------------------------------------------
// Subset enumeration for the exhaustive surrogate test.

std::vector<VariableSet> subsets_in_order(const VariableSet& z) {
  const std::vector<VariableId> zs(z.begin(), z.end());
  std::vector<VariableSet> out;
  out.reserve(std::size_t{1} << zs.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << zs.size());
       ++mask) {
    VariableSet sub;
    for (std::size_t k = 0; k < zs.size(); ++k) {
      if (mask & (std::uint64_t{1} << k)) sub.insert(zs[k]);
    }
    out.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end(),
            [](const VariableSet& a, const VariableSet& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return out;
}

}  // namespace

IdResult id(const Query& q, const Admg& g) {
  validate_query(q, g, /*allow_surrogates=*/false);
  RunCtx ctx = make_ctx(g, {});
  CState s0{g, keys(q.y), query_x_map(q), CarriedP{true, g.vertices(), {}}};
  RecOut out = c_recurse(ctx, std::move(s0));
  if (out.e) return {normalize(*out.e), std::nullopt};
  return {std::nullopt, std::move(out.f)};
}

IdResult idz(const Query& q, const Admg& g) {
  validate_query(q, g, /*allow_surrogates=*/true);
  RunCtx ctx = make_ctx(g, q.z);
  ZState s0{g,  keys(q.y), query_x_map(q),
            {}, {},        CarriedP{true, g.vertices(), {}}};
  RecOut out = z_recurse(ctx, std::move(s0));
  if (out.e) return {normalize(*out.e), std::nullopt};
  return {std::nullopt, std::move(out.f)};
}

Hedge extract_hedge(const Fail& fail_info, const Query&) {
  const Admg& g = fail_info.local_graph;
  const VariableSet& s = fail_info.s_component;
  if (s.empty() || !is_subset(s, g.vertices())) {
    fail(errc::malformed_fail,
         "stuck component is empty or not a vertex subset of the local graph");
  }
  if (g.c_components().size() != 1) {
    fail(errc::malformed_fail,
         "local graph of a failure must be a single confounded component");
  }

  // Roots: the sinks of the stuck component's induced subgraph.
  const VariableSet r = g.induced(s).root_set();

  // Which vertices still reach the roots along directed edges.
  VariableSet reached = r;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& v : g.vertices()) {
      if (reached.count(v)) continue;
      if (!disjoint(g.children(v), reached)) {
        reached.insert(v);
        grew = true;
      }
    }
  }

  // Keep one child edge per non-root vertex, preferring to stay inside the
  // component, lexicographically smallest head first.
  Hedge h;
  h.r = r;
  h.f_vertices = reached;
  for (const auto& v : reached) {
    if (r.count(v)) continue;
    const VariableSet cands = set_intersect(g.children(v), reached);
    if (cands.empty()) {
      fail(errc::internal, "hedge extraction: non-root vertex with no route "
                           "to the root set");
    }
    const VariableSet inside = set_intersect(cands, s);
    const VariableSet& pool = (s.count(v) && !inside.empty()) ? inside : cands;
    h.f_directed.push_back({v, *pool.begin()});
  }
  for (const auto& [a, b] : g.bidirected()) {
    if (reached.count(a) && reached.count(b)) h.f_bidirected.push_back({a, b});
  }

  h.fprime_vertices = set_intersect(s, reached);
  for (const auto& [tail, head] : h.f_directed) {
    if (s.count(tail) && s.count(head)) h.fprime_directed.push_back({tail, head});
  }
  for (const auto& [a, b] : h.f_bidirected) {
    if (s.count(a) && s.count(b)) h.fprime_bidirected.push_back({a, b});
  }

  const auto [x_side, y_side] = hedge_query_sets(fail_info);
  if (!validate_hedge(g, h, x_side, y_side)) {
    fail(errc::internal, "hedge extraction produced an invalid witness");
  }
  return h;
}

std::pair<VariableSet, VariableSet> hedge_query_sets(const Fail& fail_info) {
  return {set_minus(fail_info.local_graph.vertices(), fail_info.s_component),
          fail_info.s_component};
}

Thm3Verdict theorem3_zid(const Query& q, const Admg& g) {
  validate_query(q, g, /*allow_surrogates=*/true);
  if (q.z.size() > 20) {
    fail(errc::subset_limit,
         "surrogate set too large for exhaustive subset search (" +
             std::to_string(q.z.size()) + " > 20)");
  }
  const VariableSet yv = keys(q.y);
  const VariableSet xv = keys(q.x);
  const Query plain{q.y, q.x, {}};

  Thm3Verdict verdict;
  for (const VariableSet& sub : subsets_in_order(q.z)) {
    ++verdict.subsets_checked;
    if (!intercepts(g, xv, sub, yv)) continue;
    if (!id(plain, g.mutilate(sub, {})).identified()) continue;
    verdict.zid = true;
    verdict.witness = sub;
    return verdict;
  }
  return verdict;
}

bool intercepts(const Admg& g, const VariableSet& x, const VariableSet& zprime,
                const VariableSet& y) {
  for (const VariableSet* s : {&x, &zprime, &y}) {
    for (const auto& v : *s) {
      if (!g.has_vertex(v)) {
        fail(errc::unknown_vertex, "'" + v.str() + "' is not a vertex");
      }
    }
  }
  const VariableSet keep = set_minus(g.vertices(), x);
  const VariableSet sources = set_intersect(zprime, keep);
  if (sources.empty()) return true;
  const VariableSet reach = g.induced(keep).descendants(sources);
  return disjoint(reach, set_intersect(y, keep));
}

bool pearl_criterion(const Admg& g, const VariableSet& x,
                     const VariableSet& z_single, const VariableSet& y) {
  if (!intercepts(g, x, z_single, y)) return false;
  Query plain;
  for (const auto& v : y) plain.y.emplace(v, 0);
  for (const auto& v : x) plain.x.emplace(v, 0);
  return id(plain, g.mutilate(z_single, {})).identified();
}

bool corollary2_precheck(const Admg& g, const VariableSet& x,
                         const VariableSet& y, const VariableSet& z) {
  for (const VariableSet* s : {&x, &y, &z}) {
    for (const auto& v : *s) {
      if (!g.has_vertex(v)) {
        fail(errc::unknown_vertex, "'" + v.str() + "' is not a vertex");
      }
    }
  }
  if (y.empty()) fail(errc::invalid_query, "outcome set must not be empty");
  const VariableSet an_y = g.ancestors(y);
  const VariableSet below =
      g.induced(an_y).descendants(set_intersect(x, an_y));
  if (!is_subset(z, below)) return false;
  Query plain;
  for (const auto& v : y) plain.y.emplace(v, 0);
  for (const auto& v : x) plain.x.emplace(v, 0);
  return !id(plain, g).identified();
}

std::string verdict_json(const IdResult& result,
                         const std::optional<Hedge>& hedge,
                         const std::optional<VariableSet>& witness_subset,
                         int indent) {
  nlohmann::json out;
  out["verdict"] = result.identified() ? "identified" : "not-zid";
  out["estimand"] = result.identified()
                        ? nlohmann::json::parse(to_json(*result.estimand))
                        : nlohmann::json();
  out["hedge"] = hedge ? nlohmann::json::parse(hedge_json(*hedge))
                       : nlohmann::json();
  if (witness_subset) {
    auto arr = nlohmann::json::array();
    for (const auto& v : *witness_subset) arr.push_back(v.str());
    out["witness_subset"] = std::move(arr);
  } else {
    out["witness_subset"] = nlohmann::json();
  }
  return indent >= 0 ? out.dump(indent) : out.dump();
}

std::string hedge_json(const Hedge& h, int indent) {
  const auto names = [](const VariableSet& s) {
    auto arr = nlohmann::json::array();
    for (const auto& v : s) arr.push_back(v.str());
    return arr;
  };
  const auto edges = [](const std::vector<std::pair<VariableId, VariableId>>& es) {
    auto arr = nlohmann::json::array();
    for (const auto& [a, b] : es) {
      arr.push_back(nlohmann::json::array({a.str(), b.str()}));
    }
    return arr;
  };
  nlohmann::json out;
  out["f_vertices"] = names(h.f_vertices);
  out["f_directed"] = edges(h.f_directed);
  out["f_bidirected"] = edges(h.f_bidirected);
  out["fprime_vertices"] = names(h.fprime_vertices);
  out["fprime_directed"] = edges(h.fprime_directed);
  out["fprime_bidirected"] = edges(h.fprime_bidirected);
  out["r"] = names(h.r);
  return indent >= 0 ? out.dump(indent) : out.dump();
}

}  // namespace zid
