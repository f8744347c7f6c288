#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "zid/variable.hpp"

namespace zid {

// An exact finite joint distribution: an ordered list of variables with
// their cardinalities and one probability per full assignment, stored
// row-major with the last variable varying fastest.
class DistributionTable {
public:
  // Validates shape (probabilities size = product of cardinalities, all
  // cardinalities >= 1), nonnegativity, and total mass 1 within 1e-9.
  static DistributionTable build(std::vector<VariableId> variables,
                                 std::vector<int> cardinalities,
                                 std::vector<double> probabilities);

  const std::vector<VariableId>& variables() const noexcept { return vars_; }
  const std::vector<int>& cardinalities() const noexcept { return cards_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }

  bool has_variable(const VariableId& v) const;
  int cardinality(const VariableId& v) const;  // DOMAIN_MISMATCH if absent

  // Probability mass of the event described by a partial assignment (sum of
  // all cells matching it). An empty assignment gives total mass. Errors:
  // DOMAIN_MISMATCH for unknown variables or out-of-range values.
  double marginal(const Assignment& fixed) const;

  // Table over `keep` (relative order preserved) with everything else
  // summed out. `keep` must be a subset of the variables.
  DistributionTable marginalize(const VariableSet& keep) const;

  // Decode a flat index into a full assignment.
  Assignment assignment_at(std::size_t index) const;

  double total() const;
  // Largest per-cell gap; requires identical variable order and shape.
  double max_abs_diff(const DistributionTable& other) const;

private:
  DistributionTable() = default;

  std::size_t axis_of(const VariableId& v) const;  // DOMAIN_MISMATCH if absent

  std::vector<VariableId> vars_;
  std::vector<int> cards_;
  std::vector<std::size_t> strides_;
  std::vector<double> probs_;
};

// The data a z-identification estimand may draw from: the observational
// joint over V plus one experimental table P(V \ Z' | do(Z'=z')) for each
// intervened subset and value assignment. The empty assignment is served by
// the observational table.
class DistributionFamily {
public:
  explicit DistributionFamily(DistributionTable observational);

  const DistributionTable& observational() const noexcept { return obs_; }

  // Registers the table for do(regime). The table's variables must be
  // exactly the observational variables minus the regime's.
  void add_experimental(const Assignment& regime, DistributionTable table);

  bool has_regime(const Assignment& regime) const;
  // MISSING_REGIME if absent.
  const DistributionTable& table_for(const Assignment& regime) const;

  int cardinality(const VariableId& v) const;  // from the observational table
  const std::vector<VariableId>& variables() const {
    return obs_.variables();
  }
  const std::map<Assignment, DistributionTable>& experimental() const {
    return experimental_;
  }

private:
  DistributionTable obs_;
  std::map<Assignment, DistributionTable> experimental_;
};

}  // namespace zid
