#include "zid/variable.hpp"

#include <algorithm>
#include <cctype>

namespace zid {

VariableId::VariableId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) fail(errc::invalid_identifier, "empty variable name");
  for (char c : name_) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
      fail(errc::invalid_identifier,
           "variable name '" + name_ + "' contains '" + std::string(1, c) + "'");
    }
  }
}

VariableSet set_union(const VariableSet& a, const VariableSet& b) {
  VariableSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

VariableSet set_minus(const VariableSet& a, const VariableSet& b) {
  VariableSet out;
  for (const auto& v : a)
    if (!b.count(v)) out.insert(v);
  return out;
}

VariableSet set_intersect(const VariableSet& a, const VariableSet& b) {
  VariableSet out;
  for (const auto& v : a)
    if (b.count(v)) out.insert(v);
  return out;
}

bool is_subset(const VariableSet& a, const VariableSet& b) {
  return std::all_of(a.begin(), a.end(),
                     [&](const VariableId& v) { return b.count(v) > 0; });
}

bool disjoint(const VariableSet& a, const VariableSet& b) {
  return std::none_of(a.begin(), a.end(),
                      [&](const VariableId& v) { return b.count(v) > 0; });
}

std::string join(const VariableSet& s, const std::string& sep) {
  std::string out;
  for (const auto& v : s) {
    if (!out.empty()) out += sep;
    out += v.str();
  }
  return out;
}

std::string join(const std::vector<VariableId>& s, const std::string& sep) {
  std::string out;
  for (const auto& v : s) {
    if (!out.empty()) out += sep;
    out += v.str();
  }
  return out;
}

}  // namespace zid
