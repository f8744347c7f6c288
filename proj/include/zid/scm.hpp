#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zid/admg.hpp"
#include "zid/table.hpp"
#include "zid/variable.hpp"

namespace zid {

// A fully enumerated discrete structural causal model compatible with an
// ADMG: one exogenous prior per bidirected edge (the shared latent cause),
// one exogenous noise term per observed variable, and a deterministic
// mechanism table per observed variable over (observed parents, incident
// latents, own noise).
struct DiscreteScm {
  struct Latent {
    BidirectedEdge edge;  // the two observed variables it confounds
    int cardinality = 2;
    std::vector<double> prior;
  };
  struct Noise {
    int cardinality = 2;
    std::vector<double> prior;
  };
  struct Mechanism {
    std::vector<VariableId> parents;  // observed parents, sorted
    std::vector<int> latent_axes;     // indices into latents, sorted
    // Row-major over (parents..., latents..., noise), last axis fastest;
    // entries are values of the variable itself.
    std::vector<int> table;
  };

  Admg graph;
  std::map<VariableId, int> cardinality;
  std::vector<Latent> latents;  // one per graph.bidirected(), same order
  std::map<VariableId, Noise> noise;
  std::map<VariableId, Mechanism> mechanisms;
};

// Seeded, reproducible model generator. Latent cardinality is uniform
// (default 2); priors are strictly positive, and every mechanism's noise
// block covers the variable's whole domain in every parent/latent context,
// so all conditionals of the induced distributions are strictly positive
// (identification identities require positivity). SIZE_LIMIT if observed +
// exogenous variable count exceeds 16.
DiscreteScm random_scm(const Admg& g,
                       const std::map<VariableId, int>& cardinalities,
                       std::uint64_t seed, int latent_cardinality = 2);

// Exact observational joint over the observed variables (sorted order),
// by enumerating every exogenous configuration. SIZE_LIMIT if the full
// state space exceeds 2^24.
DistributionTable joint(const DiscreteScm& m);

// Joint of the modified model where each assigned variable's mechanism is
// replaced by the constant, restricted to the unassigned variables.
DistributionTable intervene(const DiscreteScm& m, const Assignment& fixed);

// True interventional probability P(y | do(x)).
double truth(const DiscreteScm& m, const Assignment& x_assignment,
             const Assignment& y_assignment);

// Observational table plus an experimental table for every subset of z and
// every value assignment to that subset. SIZE_LIMIT if |z| > 6.
DistributionFamily family(const DiscreteScm& m, const VariableSet& z);

// Bounded randomized search for a pair of models that agree (within 1e-7)
// on the observational table and on every do(Z') table over subsets of
// q_z, yet differ by at least 1e-3 in P(y|do(x)). The search perturbs one
// exogenous prior at a time along directions that keep every required
// table fixed, so agreement is structural and the gap is maximized by a
// line search. Returns nothing when the budget runs out — absence of a
// pair proves nothing.
struct WitnessQuery {
  Assignment x;
  Assignment y;
  VariableSet z;
};
std::optional<std::pair<DiscreteScm, DiscreteScm>> witness_search(
    const Admg& g, const WitnessQuery& q, std::uint64_t budget,
    std::uint64_t seed);

// JSON dump with enough detail to rebuild the model (cards, priors,
// mechanism tables).
std::string scm_to_json(const DiscreteScm& m, int indent = -1);

// CSV export: one column per variable plus a final probability column.
std::string table_csv(const DistributionTable& t);

}  // namespace zid
