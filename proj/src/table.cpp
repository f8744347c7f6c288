#include "zid/table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zid/kernels.hpp"

namespace zid {

namespace {
constexpr std::size_t kMaxCells = std::size_t{1} << 26;
}

DistributionTable DistributionTable::build(std::vector<VariableId> variables,
                                           std::vector<int> cardinalities,
                                           std::vector<double> probabilities) {
  if (variables.size() != cardinalities.size()) {
    fail(errc::domain_mismatch,
         "table: variable and cardinality counts differ");
  }
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (cardinalities[i] < 1) {
      fail(errc::domain_mismatch, "table: cardinality of " +
                                      variables[i].str() +
                                      " must be at least 1");
    }
    for (std::size_t j = i + 1; j < variables.size(); ++j) {
      if (variables[i] == variables[j]) {
        fail(errc::domain_mismatch,
             "table: duplicate variable " + variables[i].str());
      }
    }
  }
  std::size_t cells = 1;
  for (int c : cardinalities) {
    if (cells > kMaxCells / static_cast<std::size_t>(c)) {
      fail(errc::size_limit, "table: state space exceeds the enumerable cap");
    }
    cells *= static_cast<std::size_t>(c);
  }
  if (probabilities.size() != cells) {
    fail(errc::domain_mismatch,
         "table: expected " + std::to_string(cells) + " probabilities, got " +
             std::to_string(probabilities.size()));
  }
  for (double p : probabilities) {
    if (!(p >= -1e-12)) {
      fail(errc::domain_mismatch, "table: negative probability");
    }
  }
  const double mass = kernels::sum(probabilities.data(), probabilities.size());
  if (std::fabs(mass - 1.0) > 1e-9) {
    fail(errc::domain_mismatch,
         "table: total mass " + std::to_string(mass) + " is not 1");
  }

  DistributionTable t;
  t.vars_ = std::move(variables);
  t.cards_ = std::move(cardinalities);
  t.probs_ = std::move(probabilities);
  t.strides_.assign(t.vars_.size(), 1);
  for (std::size_t i = t.vars_.size(); i-- > 1;) {
    t.strides_[i - 1] = t.strides_[i] * static_cast<std::size_t>(t.cards_[i]);
  }
  return t;
}

bool DistributionTable::has_variable(const VariableId& v) const {
  return std::find(vars_.begin(), vars_.end(), v) != vars_.end();
}

std::size_t DistributionTable::axis_of(const VariableId& v) const {
  const auto it = std::find(vars_.begin(), vars_.end(), v);
  if (it == vars_.end()) {
    fail(errc::domain_mismatch, "table: no variable " + v.str());
  }
  return static_cast<std::size_t>(it - vars_.begin());
}

int DistributionTable::cardinality(const VariableId& v) const {
  return cards_[axis_of(v)];
}

double DistributionTable::marginal(const Assignment& fixed) const {
  std::size_t base = 0;
  std::vector<bool> is_fixed(vars_.size(), false);
  for (const auto& [v, value] : fixed) {
    const std::size_t axis = axis_of(v);
    if (value < 0 || value >= cards_[axis]) {
      fail(errc::domain_mismatch, "table: value " + std::to_string(value) +
                                      " out of range for " + v.str());
    }
    is_fixed[axis] = true;
    base += static_cast<std::size_t>(value) * strides_[axis];
  }
  std::vector<std::size_t> free_axes;
  for (std::size_t a = 0; a < vars_.size(); ++a) {
    if (!is_fixed[a]) free_axes.push_back(a);
  }

  double acc = 0.0;
  std::vector<int> digit(free_axes.size(), 0);
  while (true) {
    std::size_t offset = base;
    for (std::size_t k = 0; k < free_axes.size(); ++k) {
      offset += static_cast<std::size_t>(digit[k]) * strides_[free_axes[k]];
    }
    acc += probs_[offset];

    std::size_t k = free_axes.size();
    while (k > 0) {
      --k;
      if (++digit[k] < cards_[free_axes[k]]) break;
      digit[k] = 0;
      if (k == 0) return acc;
    }
    if (free_axes.empty()) return acc;
  }
}

DistributionTable DistributionTable::marginalize(const VariableSet& keep) const {
  std::vector<VariableId> new_vars;
  std::vector<int> new_cards;
  std::vector<std::size_t> kept_axes;
  for (std::size_t a = 0; a < vars_.size(); ++a) {
    if (keep.count(vars_[a])) {
      new_vars.push_back(vars_[a]);
      new_cards.push_back(cards_[a]);
      kept_axes.push_back(a);
    }
  }
  if (new_vars.size() != keep.size()) {
    fail(errc::domain_mismatch,
         "table: marginalize target is not a subset of the variables");
  }

  std::size_t new_cells = 1;
  for (int c : new_cards) new_cells *= static_cast<std::size_t>(c);
  std::vector<std::size_t> new_strides(new_vars.size(), 1);
  for (std::size_t i = new_vars.size(); i-- > 1;) {
    new_strides[i - 1] =
        new_strides[i] * static_cast<std::size_t>(new_cards[i]);
  }

  std::vector<double> new_probs(new_cells, 0.0);
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < kept_axes.size(); ++k) {
      const std::size_t a = kept_axes[k];
      const auto digit = (idx / strides_[a]) %
                         static_cast<std::size_t>(cards_[a]);
      out += digit * new_strides[k];
    }
    new_probs[out] += probs_[idx];
  }

  DistributionTable t;
  t.vars_ = std::move(new_vars);
  t.cards_ = std::move(new_cards);
  t.strides_ = std::move(new_strides);
  t.probs_ = std::move(new_probs);
  return t;
}

Assignment DistributionTable::assignment_at(std::size_t index) const {
  if (index >= probs_.size()) {
    fail(errc::domain_mismatch, "table: index out of range");
  }
  Assignment a;
  for (std::size_t axis = 0; axis < vars_.size(); ++axis) {
    a[vars_[axis]] = static_cast<int>(
        (index / strides_[axis]) % static_cast<std::size_t>(cards_[axis]));
  }
  return a;
}

double DistributionTable::total() const {
  return kernels::sum(probs_.data(), probs_.size());
}

double DistributionTable::max_abs_diff(const DistributionTable& other) const {
  if (vars_ != other.vars_ || cards_ != other.cards_) {
    fail(errc::domain_mismatch, "table: comparing tables of different shape");
  }
  return kernels::max_abs_diff(probs_.data(), other.probs_.data(),
                               probs_.size());
}

DistributionFamily::DistributionFamily(DistributionTable observational)
    : obs_(std::move(observational)) {}

void DistributionFamily::add_experimental(const Assignment& regime,
                                          DistributionTable table) {
  std::vector<VariableId> expected;
  for (const auto& v : obs_.variables()) {
    const auto it = regime.find(v);
    if (it == regime.end()) {
      expected.push_back(v);
    } else if (it->second < 0 || it->second >= obs_.cardinality(v)) {
      fail(errc::domain_mismatch,
           "family: regime value out of range for " + v.str());
    }
  }
  if (expected.size() + regime.size() != obs_.variables().size()) {
    fail(errc::domain_mismatch,
         "family: regime mentions a variable outside the joint");
  }
  if (table.variables() != expected) {
    fail(errc::domain_mismatch,
         "family: experimental table must cover exactly the non-intervened "
         "variables, in joint order");
  }
  experimental_.insert_or_assign(regime, std::move(table));
}

bool DistributionFamily::has_regime(const Assignment& regime) const {
  return regime.empty() || experimental_.count(regime) > 0;
}

const DistributionTable& DistributionFamily::table_for(
    const Assignment& regime) const {
  const auto it = experimental_.find(regime);
  if (it != experimental_.end()) return it->second;
  if (regime.empty()) return obs_;
  std::string desc;
  for (const auto& [v, value] : regime) {
    if (!desc.empty()) desc += ", ";
    desc += v.str() + "=" + std::to_string(value);
  }
  fail(errc::missing_regime, "family: no table for do(" + desc + ")");
}

int DistributionFamily::cardinality(const VariableId& v) const {
  return obs_.cardinality(v);
}

}  // namespace zid
