#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "zid/admg.hpp"
#include "zid/estimand.hpp"
#include "zid/variable.hpp"

namespace zid {

// An identification question: is P(y | do(x)) computable from the
// observational distribution plus experiments on subsets of z?
struct Query {
  Assignment y;   // outcome variables with their values
  Assignment x;   // treatment variables with their values
  VariableSet z;  // variables experiments may be performed on
};

// The intervention context a recursive call runs under: variables moved
// into the do() side along the way, with the value each one is pinned to.
// i_set entries carry canonical constants; j_set entries reference values
// bound by an enclosing sum.
struct CallContext {
  std::vector<VarBinding> i_set;
  std::vector<VarBinding> j_set;
};

// Everything needed to reconstruct and check a non-identifiability witness:
// the local graph the recursion got stuck on, the problematic component,
// the intervention context, and the outcome set of that call.
struct Fail {
  Admg local_graph;
  VariableSet s_component;
  CallContext context;
  VariableSet local_y;
};

struct IdResult {
  std::optional<Estimand> estimand;
  std::optional<Fail> failure;

  bool identified() const noexcept { return estimand.has_value(); }
};

// Classic identification from observational data alone (q.z must be empty;
// INVALID_QUERY otherwise). Identified estimands reference only the
// observational regime.
IdResult id(const Query& q, const Admg& g);

// Identification from observational data plus surrogate experiments on
// subsets of q.z. Identified estimands reference only do()-regimes over
// subsets of q.z.
IdResult idz(const Query& q, const Admg& g);

// Deterministic construction of a hedge witness from a Fail: roots are the
// sinks of the stuck component, and surplus child edges are deleted via
// backward reachability from the roots (lexicographic choice). The result
// passes validate_hedge against hedge_query_sets(fail).
Hedge extract_hedge(const Fail& fail, const Query& q);

// The (x-side, y-side) sets a Fail's hedge witnesses non-identifiability
// for, in the local graph.
std::pair<VariableSet, VariableSet> hedge_query_sets(const Fail& fail);

// Independent decision route: either the plain query is identifiable, or
// some subset Z' of z satisfies (i) x intercepts all directed Z'-to-y paths
// and (ii) the query is identifiable once Z' is severed from its causes.
// Subsets are tried in order of increasing size, then lexicographically,
// so the reported witness is deterministic. SUBSET_LIMIT if |z| > 20.
struct Thm3Verdict {
  bool zid = false;
  std::optional<VariableSet> witness;
  std::uint64_t subsets_checked = 0;
};
Thm3Verdict theorem3_zid(const Query& q, const Admg& g);

// True iff every directed path from zprime to y passes through x (checked
// by deleting the x vertices).
bool intercepts(const Admg& g, const VariableSet& x, const VariableSet& zprime,
                const VariableSet& y);

// The classical sufficient test applied to the full surrogate set at once:
// x intercepts all z-to-y paths AND the query is identifiable with z
// severed. Sufficient only; theorem3_zid subsumes it.
bool pearl_criterion(const Admg& g, const VariableSet& x,
                     const VariableSet& z_single, const VariableSet& y);

// Quick rejection: when z lies below x inside the ancestral closure of y
// and the plain query is unidentifiable, surrogate experiments on z cannot
// help. True = provably not z-identifiable.
bool corollary2_precheck(const Admg& g, const VariableSet& x,
                         const VariableSet& y, const VariableSet& z);

// {"verdict": "identified" | "not-zid", "estimand": ... | null,
//  "hedge": ... | null, "witness_subset": [names] | null}
std::string verdict_json(const IdResult& result,
                         const std::optional<Hedge>& hedge,
                         const std::optional<VariableSet>& witness_subset,
                         int indent = -1);

std::string hedge_json(const Hedge& h, int indent = -1);

}  // namespace zid
