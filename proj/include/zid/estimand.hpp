#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zid/table.hpp"
#include "zid/variable.hpp"

namespace zid {

// How a variable occurring in a probability term gets its value: either a
// fixed element of its domain, or a reference to a named expression variable
// (a query free variable or a Sum-bound dummy).
class ValueBinding {
public:
  static ValueBinding constant(int value);
  static ValueBinding reference(VariableId name);

  bool is_constant() const noexcept { return !ref_.has_value(); }
  int value() const;                // requires is_constant()
  const VariableId& ref() const;    // requires !is_constant()

  bool operator==(const ValueBinding&) const = default;

private:
  ValueBinding() = default;
  int value_ = 0;
  std::optional<VariableId> ref_;
};

// A variable together with the binding that supplies its value.
struct VarBinding {
  VariableId var;
  ValueBinding binding;

  bool operator==(const VarBinding&) const = default;
};

// Shorthand for the common "variable bound to its own name" case.
VarBinding own_ref(const VariableId& v);

// The experimental context a term draws from: the set of variables held
// fixed by intervention, with their value bindings. Empty = observational.
struct Regime {
  std::vector<VarBinding> intervened;

  bool operator==(const Regime&) const = default;
};

// One conditional-probability leaf: P[regime](outcome | conditioning).
// Outcome and conditioning are ordered lists so rendering is deterministic.
struct Term {
  std::vector<VarBinding> outcome;
  std::vector<VarBinding> conditioning;
  Regime regime;

  bool operator==(const Term&) const = default;
};

// Immutable expression tree over Term leaves. Shared subtrees are fine;
// nothing is ever mutated after construction.
class Estimand {
public:
  enum class Kind { term, sum, product, ratio };

  static Estimand term(Term t);
  static Estimand sum(std::vector<VariableId> bound, Estimand body);
  static Estimand product(std::vector<Estimand> factors);
  static Estimand ratio(Estimand numerator, Estimand denominator);

  Kind kind() const noexcept;

  const Term& as_term() const;
  const std::vector<VariableId>& sum_bound() const;
  const Estimand& sum_body() const;
  const std::vector<Estimand>& factors() const;
  const Estimand& numerator() const;
  const Estimand& denominator() const;

  // Deep structural equality.
  bool operator==(const Estimand& other) const;

private:
  struct Node;
  explicit Estimand(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class RenderFormat { text, latex };

// Recursive numeric evaluation of the tree against a data family.
// `free` must bind every free variable; Sum nodes enumerate bound domains
// (cardinalities resolved through `data`); a Term reads the table of its
// regime and divides marginals with the convention 0/0 = 0.
double evaluate(const Estimand& e, const Assignment& free,
                const DistributionFamily& data);

// Names referenced at leaves that no enclosing Sum binds.
VariableSet free_variables(const Estimand& e);

// Deterministic pretty-printer. Text examples: `P(y|x)`, `P[z](y,x)`,
// `sum_{v2} P(v1,v2)`, `a / b`, `a * b`.
std::string render(const Estimand& e, RenderFormat format);

// Semantics-preserving cleanup: flatten nested Products, drop Sums with no
// bound variables, collapse single-factor Products. Nothing else.
Estimand normalize(const Estimand& e);

// Copy of the tree with every leaf-regime binding of `var` replaced by the
// given constant. Used to probe invariance to the intervention level.
Estimand with_regime_value(const Estimand& e, const VariableId& var, int value);

// Copy of the tree with free references renamed per the map. References
// shadowed by an inner Sum binder of the same name are left alone; binder
// names themselves are not touched.
Estimand rename_free_refs(const Estimand& e,
                          const std::map<VariableId, VariableId>& renames);

// Same traversal, but substitutes whole bindings: a free reference to a key
// is replaced by the mapped binding (another reference or a constant).
Estimand bind_free_refs(const Estimand& e,
                        const std::map<VariableId, ValueBinding>& bindings);

// All Sum-binder names anywhere in the tree.
VariableSet binder_names(const Estimand& e);

// JSON round-trip; node kinds are "term" | "sum" | "product" | "ratio",
// value bindings are {"var": name, "value": int} or {"var": name, "ref": name}.
std::string to_json(const Estimand& e, int indent = -1);
Estimand estimand_from_json(const std::string& text);

// Domain size of an expression variable: exact table variable, or — for a
// generated dummy like "V2_3" — the table variable obtained by stripping one
// "_<digits>" suffix.
int domain_cardinality(const DistributionFamily& data, const VariableId& v);

}  // namespace zid
