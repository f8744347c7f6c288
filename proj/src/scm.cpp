#include "zid/scm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>

namespace zid {

using nlohmann::json;

namespace {

constexpr std::uint64_t kMaxExoStates = std::uint64_t{1} << 24;

int card_of(const std::map<VariableId, int>& cards, const VariableId& v) {
  const auto it = cards.find(v);
  return it == cards.end() ? 2 : it->second;
}

std::vector<double> random_prior(std::mt19937_64& rng, int n) {
  // Entries are kept well away from zero so conditionals stay numerically
  // tame and every exogenous state actually occurs.
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& x : p) {
    x = u(rng);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

// Shared generator core: explicit per-latent and per-noise cardinalities.
DiscreteScm build_random_scm(const Admg& g,
                             const std::map<VariableId, int>& cardinalities,
                             std::uint64_t seed,
                             const std::vector<int>& latent_cards,
                             const std::map<VariableId, int>& noise_cards) {
  if (g.vertices().size() + g.bidirected().size() > 16) {
    fail(errc::size_limit,
         "scm: more than 16 enumerable variables (observed + latent)");
  }
  DiscreteScm m;
  m.graph = g;
  for (const auto& v : g.vertices()) {
    const int c = card_of(cardinalities, v);
    if (c < 2) {
      fail(errc::domain_mismatch,
           "scm: cardinality of " + v.str() + " must be at least 2");
    }
    m.cardinality[v] = c;
  }
  for (const auto& [v, c] : cardinalities) {
    if (!g.has_vertex(v)) {
      fail(errc::unknown_vertex, "scm: cardinality for unknown " + v.str());
    }
    (void)c;
  }

  std::mt19937_64 rng(seed);
  const std::vector<BidirectedEdge> bidir(g.bidirected().begin(),
                                          g.bidirected().end());
  for (std::size_t i = 0; i < bidir.size(); ++i) {
    const int card = latent_cards[i];
    m.latents.push_back(
        DiscreteScm::Latent{bidir[i], card, random_prior(rng, card)});
  }
  for (const auto& v : g.vertices()) {
    DiscreteScm::Noise nz;
    nz.cardinality = noise_cards.at(v);
    nz.prior = random_prior(rng, nz.cardinality);
    m.noise.emplace(v, std::move(nz));

    DiscreteScm::Mechanism mech;
    const VariableSet parents = m.graph.parents({v});
    mech.parents.assign(parents.begin(), parents.end());
    for (std::size_t i = 0; i < bidir.size(); ++i) {
      if (bidir[i].first == v || bidir[i].second == v) {
        mech.latent_axes.push_back(static_cast<int>(i));
      }
    }
    std::size_t rows = 1;
    for (const auto& p : mech.parents) {
      rows *= static_cast<std::size_t>(m.cardinality.at(p));
    }
    for (int li : mech.latent_axes) {
      rows *= static_cast<std::size_t>(m.latents[static_cast<std::size_t>(li)]
                                           .cardinality);
    }
    rows *= static_cast<std::size_t>(m.noise.at(v).cardinality);

    // Last axis is the noise. Every (parents, latents) configuration gets a
    // surjective noise block — a random permutation of the domain on the
    // first card slots, uniform draws on any extra slots — so each value of
    // the variable stays reachable in every context and all conditionals
    // are strictly positive. Identification identities only hold under
    // positivity, and the oracle must not manufacture spurious 0/0 cases.
    const int vcard = m.cardinality.at(v);
    const int ncard = m.noise.at(v).cardinality;
    if (ncard < vcard) {
      fail(errc::domain_mismatch,
           "scm: noise axis of " + v.str() + " is narrower than its domain");
    }
    std::uniform_int_distribution<int> val(0, vcard - 1);
    mech.table.resize(rows);
    std::vector<int> perm(static_cast<std::size_t>(vcard));
    const std::size_t blocks = rows / static_cast<std::size_t>(ncard);
    for (std::size_t b = 0; b < blocks; ++b) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int n = 0; n < ncard; ++n) {
        mech.table[b * static_cast<std::size_t>(ncard) +
                   static_cast<std::size_t>(n)] =
            n < vcard ? perm[static_cast<std::size_t>(n)] : val(rng);
      }
    }
    m.mechanisms.emplace(v, std::move(mech));
  }
  return m;
}

// Exogenous axis layout: latents first (in bidirected-edge order), then one
// noise axis per observed variable in sorted order.
struct ExoLayout {
  std::vector<int> cards;
  std::vector<const std::vector<double>*> priors;
  std::map<VariableId, std::size_t> noise_axis;
  std::uint64_t states = 1;
};

ExoLayout exo_layout(const DiscreteScm& m) {
  ExoLayout lay;
  for (const auto& lat : m.latents) {
    lay.cards.push_back(lat.cardinality);
    lay.priors.push_back(&lat.prior);
  }
  for (const auto& [v, nz] : m.noise) {
    lay.noise_axis[v] = lay.cards.size();
    lay.cards.push_back(nz.cardinality);
    lay.priors.push_back(&nz.prior);
  }
  for (int c : lay.cards) {
    if (lay.states > kMaxExoStates / static_cast<std::uint64_t>(c)) {
      fail(errc::size_limit, "scm: exogenous state space exceeds the cap");
    }
    lay.states *= static_cast<std::uint64_t>(c);
  }
  return lay;
}

int mechanism_value(const DiscreteScm& m, const VariableId& v,
                    const std::map<VariableId, int>& observed,
                    const std::vector<int>& exo, const ExoLayout& lay) {
  const auto& mech = m.mechanisms.at(v);
  std::size_t row = 0;
  for (const auto& p : mech.parents) {
    row = row * static_cast<std::size_t>(m.cardinality.at(p)) +
          static_cast<std::size_t>(observed.at(p));
  }
  for (int li : mech.latent_axes) {
    const auto& lat = m.latents[static_cast<std::size_t>(li)];
    row = row * static_cast<std::size_t>(lat.cardinality) +
          static_cast<std::size_t>(exo[static_cast<std::size_t>(li)]);
  }
  const auto& nz = m.noise.at(v);
  row = row * static_cast<std::size_t>(nz.cardinality) +
        static_cast<std::size_t>(exo[lay.noise_axis.at(v)]);
  return mech.table[row];
}

// Full sweep over exogenous configurations of `m`, handing each observed
// outcome and its probability weight to `sink`.
template <typename Sink>
void enumerate_outcomes(const DiscreteScm& m, Sink&& sink) {
  const ExoLayout lay = exo_layout(m);
  const std::vector<VariableId> topo = m.graph.topological_order();

  std::vector<int> exo(lay.cards.size(), 0);
  std::map<VariableId, int> observed;
  while (true) {
    double weight = 1.0;
    for (std::size_t a = 0; a < exo.size(); ++a) {
      weight *= (*lay.priors[a])[static_cast<std::size_t>(exo[a])];
    }
    for (const auto& v : topo) {
      observed[v] = mechanism_value(m, v, observed, exo, lay);
    }
    sink(observed, weight);

    std::size_t k = exo.size();
    bool done = exo.empty();
    while (k > 0) {
      --k;
      if (++exo[k] < lay.cards[k]) break;
      exo[k] = 0;
      if (k == 0) done = true;
    }
    if (done) break;
  }
}

DiscreteScm with_constant_mechanisms(const DiscreteScm& m,
                                     const Assignment& fixed) {
  DiscreteScm out = m;
  for (const auto& [v, value] : fixed) {
    if (!out.graph.has_vertex(v)) {
      fail(errc::unknown_vertex, "intervene: unknown variable " + v.str());
    }
    if (value < 0 || value >= out.cardinality.at(v)) {
      fail(errc::domain_mismatch,
           "intervene: value out of range for " + v.str());
    }
    // No parents, no latents; one entry per noise value (the row lookup
    // still consults the noise axis), all equal to the constant.
    DiscreteScm::Mechanism constant;
    constant.table.assign(
        static_cast<std::size_t>(out.noise.at(v).cardinality), value);
    out.mechanisms[v] = std::move(constant);
  }
  return out;
}

}  // namespace

DiscreteScm random_scm(const Admg& g,
                       const std::map<VariableId, int>& cardinalities,
                       std::uint64_t seed, int latent_cardinality) {
  if (latent_cardinality < 2) {
    fail(errc::domain_mismatch, "scm: latent cardinality must be at least 2");
  }
  std::vector<int> latent_cards(g.bidirected().size(), latent_cardinality);
  std::map<VariableId, int> noise_cards;
  for (const auto& v : g.vertices()) {
    // Two slots beyond the domain size: the permutation part of each
    // mechanism block guarantees positivity, the extra slots let the
    // conditional rows vary freely across parent/latent contexts.
    noise_cards[v] = card_of(cardinalities, v) + 2;
  }
  return build_random_scm(g, cardinalities, seed, latent_cards, noise_cards);
}

DistributionTable joint(const DiscreteScm& m) {
  std::vector<VariableId> vars;
  std::vector<int> cards;
  std::uint64_t cells = 1;
  for (const auto& [v, c] : m.cardinality) {
    vars.push_back(v);
    cards.push_back(c);
    if (cells > kMaxExoStates / static_cast<std::uint64_t>(c)) {
      fail(errc::size_limit, "scm: observed state space exceeds the cap");
    }
    cells *= static_cast<std::uint64_t>(c);
  }
  std::vector<std::size_t> strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * static_cast<std::size_t>(cards[i]);
  }

  std::vector<double> probs(cells, 0.0);
  enumerate_outcomes(m, [&](const std::map<VariableId, int>& observed,
                            double weight) {
    std::size_t idx = 0;
    std::size_t axis = 0;
    for (const auto& [v, c] : m.cardinality) {
      (void)c;
      idx += static_cast<std::size_t>(observed.at(v)) * strides[axis];
      ++axis;
    }
    probs[idx] += weight;
  });
  return DistributionTable::build(std::move(vars), std::move(cards),
                                  std::move(probs));
}

DistributionTable intervene(const DiscreteScm& m, const Assignment& fixed) {
  const DiscreteScm modified = with_constant_mechanisms(m, fixed);
  const DistributionTable full = joint(modified);
  VariableSet keep;
  for (const auto& v : m.graph.vertices()) {
    if (!fixed.count(v)) keep.insert(v);
  }
  return full.marginalize(keep);
}

double truth(const DiscreteScm& m, const Assignment& x_assignment,
             const Assignment& y_assignment) {
  return intervene(m, x_assignment).marginal(y_assignment);
}

DistributionFamily family(const DiscreteScm& m, const VariableSet& z) {
  if (z.size() > 6) {
    fail(errc::size_limit, "family: more than 6 surrogate variables");
  }
  for (const auto& v : z) {
    if (!m.graph.has_vertex(v)) {
      fail(errc::unknown_vertex, "family: unknown surrogate " + v.str());
    }
  }
  DistributionFamily fam(joint(m));

  const std::vector<VariableId> zs(z.begin(), z.end());
  // Mask 0 is the empty subset; the family already serves it with the
  // observational table, so only proper interventions get extra tables.
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << zs.size());
       ++mask) {
    std::vector<VariableId> subset;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) subset.push_back(zs[i]);
    }
    std::vector<int> digit(subset.size(), 0);
    while (true) {
      Assignment regime;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        regime[subset[i]] = digit[i];
      }
      fam.add_experimental(regime, intervene(m, regime));

      std::size_t k = subset.size();
      bool done = subset.empty();
      while (k > 0) {
        --k;
        if (++digit[k] < m.cardinality.at(subset[k])) break;
        digit[k] = 0;
        if (k == 0) done = true;
      }
      if (done) break;
    }
  }
  return fam;
}

namespace {

// All (regime assignment) combinations the witness pair must agree on.
std::vector<Assignment> required_regimes(const DiscreteScm& m,
                                         const VariableSet& z) {
  std::vector<Assignment> out;
  const std::vector<VariableId> zs(z.begin(), z.end());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << zs.size());
       ++mask) {
    std::vector<VariableId> subset;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) subset.push_back(zs[i]);
    }
    std::vector<int> digit(subset.size(), 0);
    while (true) {
      Assignment regime;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        regime[subset[i]] = digit[i];
      }
      out.push_back(regime);
      std::size_t k = subset.size();
      bool done = subset.empty();
      while (k > 0) {
        --k;
        if (++digit[k] < m.cardinality.at(subset[k])) break;
        digit[k] = 0;
        if (k == 0) done = true;
      }
      if (done) break;
    }
  }
  return out;
}

// P(observed cell | target exo axis = u), as a matrix column per u, for the
// model `base` under do(regime): every other exogenous axis is marginalized.
// Rows are appended to `rows_out` in cell order of the regime's table.
void append_conditional_rows(const DiscreteScm& base, const Assignment& regime,
                             std::size_t target_axis, int target_card,
                             std::vector<std::vector<double>>& rows_out) {
  const DiscreteScm m = with_constant_mechanisms(base, regime);
  const ExoLayout lay = exo_layout(m);
  const std::vector<VariableId> topo = m.graph.topological_order();

  std::vector<VariableId> vars;
  std::vector<int> cards;
  for (const auto& [v, c] : m.cardinality) {
    if (!regime.count(v)) {
      vars.push_back(v);
      cards.push_back(c);
    }
  }
  std::vector<std::size_t> strides(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * static_cast<std::size_t>(cards[i]);
  }
  std::size_t cells = 1;
  for (int c : cards) cells *= static_cast<std::size_t>(c);

  const std::size_t first_row = rows_out.size();
  rows_out.resize(first_row + cells,
                  std::vector<double>(static_cast<std::size_t>(target_card),
                                      0.0));

  std::vector<int> exo(lay.cards.size(), 0);
  std::map<VariableId, int> observed;
  while (true) {
    double weight = 1.0;
    for (std::size_t a = 0; a < exo.size(); ++a) {
      if (a == target_axis) continue;
      weight *= (*lay.priors[a])[static_cast<std::size_t>(exo[a])];
    }
    for (const auto& v : topo) {
      observed[v] = mechanism_value(m, v, observed, exo, lay);
    }
    std::size_t idx = 0;
    for (std::size_t axis = 0; axis < vars.size(); ++axis) {
      idx += static_cast<std::size_t>(observed.at(vars[axis])) *
             strides[axis];
    }
    rows_out[first_row + idx][static_cast<std::size_t>(exo[target_axis])] +=
        weight;

    std::size_t k = exo.size();
    bool done = exo.empty();
    while (k > 0) {
      --k;
      if (++exo[k] < lay.cards[k]) break;
      exo[k] = 0;
      if (k == 0) done = true;
    }
    if (done) break;
  }
}

// P(y | do(x), target exo axis = u) for each u.
std::vector<double> gap_vector(const DiscreteScm& base, const WitnessQuery& q,
                               std::size_t target_axis, int target_card) {
  const DiscreteScm m = with_constant_mechanisms(base, q.x);
  const ExoLayout lay = exo_layout(m);
  const std::vector<VariableId> topo = m.graph.topological_order();

  std::vector<double> t(static_cast<std::size_t>(target_card), 0.0);
  std::vector<int> exo(lay.cards.size(), 0);
  std::map<VariableId, int> observed;
  while (true) {
    double weight = 1.0;
    for (std::size_t a = 0; a < exo.size(); ++a) {
      if (a == target_axis) continue;
      weight *= (*lay.priors[a])[static_cast<std::size_t>(exo[a])];
    }
    for (const auto& v : topo) {
      observed[v] = mechanism_value(m, v, observed, exo, lay);
    }
    bool hit = true;
    for (const auto& [v, value] : q.y) {
      if (observed.at(v) != value) {
        hit = false;
        break;
      }
    }
    if (hit) t[static_cast<std::size_t>(exo[target_axis])] += weight;

    std::size_t k = exo.size();
    bool done = exo.empty();
    while (k > 0) {
      --k;
      if (++exo[k] < lay.cards[k]) break;
      exo[k] = 0;
      if (k == 0) done = true;
    }
    if (done) break;
  }
  return t;
}

double family_gap(const DistributionFamily& a, const DistributionFamily& b) {
  double worst = a.observational().max_abs_diff(b.observational());
  for (const auto& [regime, table] : a.experimental()) {
    worst = std::max(worst, table.max_abs_diff(b.table_for(regime)));
  }
  return worst;
}

}  // namespace

std::optional<std::pair<DiscreteScm, DiscreteScm>> witness_search(
    const Admg& g, const WitnessQuery& q, std::uint64_t budget,
    std::uint64_t seed) {
  if (g.vertices().size() + g.bidirected().size() > 16) {
    fail(errc::size_limit, "witness_search: graph beyond corpus scale");
  }
  for (const auto* part : {&q.x, &q.y}) {
    for (const auto& [v, value] : *part) {
      if (!g.has_vertex(v)) {
        fail(errc::unknown_vertex, "witness_search: unknown " + v.str());
      }
      (void)value;
    }
  }
  for (const auto& v : q.z) {
    if (!g.has_vertex(v)) {
      fail(errc::unknown_vertex, "witness_search: unknown surrogate " + v.str());
    }
  }

  const std::uint64_t attempts = std::max<std::uint64_t>(1, budget / 2000);
  const std::size_t n_latents = g.bidirected().size();
  const std::size_t n_targets = n_latents + g.vertices().size();

  std::optional<std::pair<DiscreteScm, DiscreteScm>> best;
  double best_gap = 0.0;

  for (std::uint64_t attempt = 0; attempt < attempts; ++attempt) {
    // Choose which exogenous prior to perturb; latents first since they are
    // the source of confounding.
    const std::size_t target = attempt % n_targets;

    // Widen the target's cardinality so the linear system constraining its
    // prior has a nontrivial nullspace, under a state-space cap.
    std::vector<int> latent_cards(n_latents, 2);
    std::map<VariableId, int> noise_cards;
    std::map<VariableId, int> obs_cards;
    for (const auto& v : g.vertices()) {
      noise_cards[v] = 2;
      obs_cards[v] = 2;
    }
    std::uint64_t rest_states = 1;
    for (std::size_t i = 0; i < n_latents; ++i) rest_states *= 2;
    for (std::size_t i = 0; i < g.vertices().size(); ++i) rest_states *= 2;
    rest_states /= 2;  // the target axis is widened below
    int target_card = 2;
    while (target_card < 24 &&
           rest_states * static_cast<std::uint64_t>(target_card + 1) <=
               (std::uint64_t{1} << 18)) {
      ++target_card;
    }
    std::size_t target_axis;
    if (target < n_latents) {
      latent_cards[target] = target_card;
      target_axis = target;
    } else {
      auto it = g.vertices().begin();
      std::advance(it, static_cast<long>(target - n_latents));
      noise_cards[*it] = target_card;
      target_axis = target;  // latents come first in the exo layout
    }

    const DiscreteScm m1 = build_random_scm(g, obs_cards, seed + attempt * 31,
                                            latent_cards, noise_cards);

    // Constraint rows: every table the pair must agree on, as linear
    // functions of the target prior.
    std::vector<std::vector<double>> rows;
    for (const Assignment& regime : required_regimes(m1, q.z)) {
      append_conditional_rows(m1, regime, target_axis, target_card, rows);
    }
    const std::vector<double> t =
        gap_vector(m1, q, target_axis, target_card);

    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(target_card));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int c = 0; c < target_card; ++c) {
        A(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-9);
    if (lu.dimensionOfKernel() == 0) continue;
    const Eigen::MatrixXd K = lu.kernel();

    // Project the gap gradient onto the nullspace to get the direction that
    // moves the target effect fastest while pinning every table.
    Eigen::VectorXd tv(static_cast<Eigen::Index>(target_card));
    for (int c = 0; c < target_card; ++c) {
      tv(c) = t[static_cast<std::size_t>(c)];
    }
    const Eigen::VectorXd coef =
        (K.transpose() * K).ldlt().solve(K.transpose() * tv);
    Eigen::VectorXd d = K * coef;
    const double dnorm = d.norm();
    if (dnorm < 1e-10) continue;
    d /= dnorm;
    const double rate = std::fabs(d.dot(tv));
    if (rate < 1e-9) continue;

    const std::vector<double>& p1 = target < n_latents
                                        ? m1.latents[target].prior
                                        : std::next(m1.noise.begin(),
                                                    static_cast<long>(
                                                        target - n_latents))
                                              ->second.prior;
    const auto max_step = [&](double sign) {
      double alpha = 1e9;
      for (int u = 0; u < target_card; ++u) {
        const double du = sign * d(u);
        if (du < 0) {
          alpha = std::min(alpha, (p1[static_cast<std::size_t>(u)] - 1e-6) /
                                      (-du));
        }
      }
      return alpha;
    };
    const double a_plus = max_step(1.0);
    const double a_minus = max_step(-1.0);
    const double sign = a_plus >= a_minus ? 1.0 : -1.0;
    const double alpha = std::max(a_plus, a_minus);
    if (alpha <= 0 || alpha > 1e8) continue;

    DiscreteScm m2 = m1;
    std::vector<double>* p2 = target < n_latents
                                  ? &m2.latents[target].prior
                                  : &std::next(m2.noise.begin(),
                                               static_cast<long>(
                                                   target - n_latents))
                                         ->second.prior;
    for (int u = 0; u < target_card; ++u) {
      (*p2)[static_cast<std::size_t>(u)] += sign * alpha * d(u);
    }

    // Verify the candidate from scratch; the construction is exact in the
    // parameterization, so this guards against implementation slips rather
    // than luck.
    const DistributionFamily f1 = family(m1, q.z);
    const DistributionFamily f2 = family(m2, q.z);
    if (family_gap(f1, f2) > 1e-7) continue;
    const double gap = std::fabs(truth(m1, q.x, q.y) - truth(m2, q.x, q.y));
    if (gap >= 1e-3 && gap > best_gap) {
      best_gap = gap;
      best = std::make_pair(m1, m2);
      if (best_gap >= 0.2) return best;
    }
  }
  return best;
}

std::string scm_to_json(const DiscreteScm& m, int indent) {
  json j;
  j["variables"] = json::object();
  for (const auto& [v, c] : m.cardinality) j["variables"][v.str()] = c;
  j["latents"] = json::array();
  for (const auto& lat : m.latents) {
    json lj;
    lj["confounds"] = {lat.edge.first.str(), lat.edge.second.str()};
    lj["cardinality"] = lat.cardinality;
    lj["prior"] = lat.prior;
    j["latents"].push_back(std::move(lj));
  }
  j["noise"] = json::object();
  for (const auto& [v, nz] : m.noise) {
    json nj;
    nj["cardinality"] = nz.cardinality;
    nj["prior"] = nz.prior;
    j["noise"][v.str()] = std::move(nj);
  }
  j["mechanisms"] = json::object();
  for (const auto& [v, mech] : m.mechanisms) {
    json mj;
    mj["parents"] = json::array();
    for (const auto& p : mech.parents) mj["parents"].push_back(p.str());
    mj["latents"] = mech.latent_axes;
    mj["table"] = mech.table;
    j["mechanisms"][v.str()] = std::move(mj);
  }
  return indent < 0 ? j.dump() : j.dump(indent);
}

std::string table_csv(const DistributionTable& t) {
  std::string out;
  for (const auto& v : t.variables()) {
    out += v.str();
    out += ',';
  }
  out += "p\n";
  char buf[64];
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Assignment a = t.assignment_at(i);
    for (const auto& v : t.variables()) {
      std::snprintf(buf, sizeof buf, "%d,", a.at(v));
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", t.probabilities()[i]);
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace zid
