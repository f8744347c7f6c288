#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "zid/errors.hpp"

namespace zid {

// A vertex / variable name. Tokens are restricted to [A-Za-z0-9_] so the
// graph text format and renderers never need quoting. Ordering is plain
// lexicographic string order; every deterministic tie-break in the library
// leans on it.
class VariableId {
public:
  explicit VariableId(std::string name);

  const std::string& str() const noexcept { return name_; }

  auto operator<=>(const VariableId&) const = default;

private:
  std::string name_;
};

using VariableSet = std::set<VariableId>;

// A (possibly partial) assignment of integer values to variables. Values are
// indices into each variable's finite domain, 0-based.
using Assignment = std::map<VariableId, int>;

// Small set helpers; the algorithms read much closer to their sources with
// these than with std::set_difference iterator plumbing.
VariableSet set_union(const VariableSet& a, const VariableSet& b);
VariableSet set_minus(const VariableSet& a, const VariableSet& b);
VariableSet set_intersect(const VariableSet& a, const VariableSet& b);
bool is_subset(const VariableSet& a, const VariableSet& b);
bool disjoint(const VariableSet& a, const VariableSet& b);
std::string join(const VariableSet& s, const std::string& sep = ", ");
std::string join(const std::vector<VariableId>& s, const std::string& sep = ", ");

}  // namespace zid
