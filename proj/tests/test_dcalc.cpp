#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "support/checks.hpp"
#include "support/corpus.hpp"
#include "zid/dcalc.hpp"
#include "zid/graph_text.hpp"
#include "zid/scm.hpp"

using support::thrown_code;
using zid::Admg;
using zid::Assignment;
using zid::errc;
using zid::m_separated;
using zid::parse_graph;
using zid::VariableId;
using zid::VariableSet;

namespace {

VariableSet vs(std::initializer_list<const char*> names) {
  VariableSet out;
  for (const char* n : names) out.insert(VariableId(n));
  return out;
}

}  // namespace

TEST_CASE("chains, forks and colliders") {
  const Admg chain = parse_graph("X -> M\nM -> Y\n");
  CHECK_FALSE(m_separated(chain, vs({"X"}), vs({"Y"}), {}));
  CHECK(m_separated(chain, vs({"X"}), vs({"Y"}), vs({"M"})));

  const Admg fork = parse_graph("M -> X\nM -> Y\n");
  CHECK_FALSE(m_separated(fork, vs({"X"}), vs({"Y"}), {}));
  CHECK(m_separated(fork, vs({"X"}), vs({"Y"}), vs({"M"})));

  const Admg collider = parse_graph("X -> C\nY -> C\n");
  CHECK(m_separated(collider, vs({"X"}), vs({"Y"}), {}));
  CHECK_FALSE(m_separated(collider, vs({"X"}), vs({"Y"}), vs({"C"})));

  // Conditioning on a descendant of a collider opens it too.
  const Admg desc = parse_graph("X -> C\nY -> C\nC -> D\n");
  CHECK_FALSE(m_separated(desc, vs({"X"}), vs({"Y"}), vs({"D"})));
}

TEST_CASE("bidirected arcs act as hidden common causes") {
  const Admg direct = parse_graph("X <-> Y\n");
  CHECK_FALSE(m_separated(direct, vs({"X"}), vs({"Y"}), {}));

  // A <-> B <-> C: B is a collider between the two hidden parents, so the
  // path is blocked marginally and opened by conditioning on B.
  const Admg two_arcs = parse_graph("A <-> B\nB <-> C\n");
  CHECK(m_separated(two_arcs, vs({"A"}), vs({"C"}), {}));
  CHECK_FALSE(m_separated(two_arcs, vs({"A"}), vs({"C"}), vs({"B"})));
}

TEST_CASE("query set validation") {
  const Admg g = parse_graph("X -> Y\n");
  CHECK(thrown_code([&] {
          m_separated(g, vs({"X"}), vs({"X"}), {});
        }) == errc::overlapping_sets);
  CHECK(thrown_code([&] {
          m_separated(g, vs({"X"}), vs({"Q"}), {});
        }) == errc::unknown_vertex);
  // Empty sides are separated by convention.
  CHECK(m_separated(g, {}, vs({"Y"}), {}));
}

TEST_CASE("m-separation is symmetric on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Admg g = corpus::random_admg(rng, 5, 0.4, 3);
    std::vector<VariableId> pool(g.vertices().begin(), g.vertices().end());
    std::shuffle(pool.begin(), pool.end(), rng);
    const VariableSet a = {pool[0]};
    const VariableSet b = {pool[1]};
    VariableSet given;
    std::uniform_int_distribution<int> ng(0, 2);
    const int want = ng(rng);
    for (int k = 0; k < want; ++k) given.insert(pool[2 + k]);
    CHECK(m_separated(g, a, b, given) == m_separated(g, b, a, given));
  }
}

TEST_CASE("m-separation implies conditional independence in every model") {
  // The converse needs faithfulness, so only the sound direction is
  // testable: whenever the graph claims separation, every compatible model
  // must factorize accordingly.
  std::mt19937_64 rng(11);
  int separated_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Admg g = corpus::random_admg(rng, 4, 0.4, 2);
    std::vector<VariableId> pool(g.vertices().begin(), g.vertices().end());
    std::shuffle(pool.begin(), pool.end(), rng);
    const VariableId a = pool[0];
    const VariableId b = pool[1];
    VariableSet given;
    if (trial % 2 == 0) given.insert(pool[2]);
    if (!m_separated(g, {a}, {b}, given)) continue;
    ++separated_seen;

    const zid::DiscreteScm m =
        zid::random_scm(g, {}, 1000 + std::uint64_t(trial));
    const zid::DistributionTable joint = zid::joint(m);
    // Check P(a, b | given) = P(a | given) * P(b | given) cell by cell.
    std::vector<VariableId> cond(given.begin(), given.end());
    const int ca = joint.cardinality(a);
    const int cb = joint.cardinality(b);
    std::vector<int> ccards;
    for (const auto& v : cond) ccards.push_back(joint.cardinality(v));
    std::vector<int> digits(cond.size(), 0);
    bool more = true;
    while (more) {
      Assignment ctx;
      for (std::size_t i = 0; i < cond.size(); ++i) ctx[cond[i]] = digits[i];
      const double pc = joint.marginal(ctx);
      for (int va = 0; va < ca; ++va) {
        for (int vb = 0; vb < cb; ++vb) {
          Assignment both = ctx;
          both[a] = va;
          both[b] = vb;
          Assignment only_a = ctx;
          only_a[a] = va;
          Assignment only_b = ctx;
          only_b[b] = vb;
          const double lhs = joint.marginal(both) * pc;
          const double rhs = joint.marginal(only_a) * joint.marginal(only_b);
          CHECK(std::abs(lhs - rhs) <= 1e-9);
        }
      }
      std::size_t k = cond.size();
      more = false;
      while (k > 0) {
        --k;
        if (++digits[k] < ccards[k]) {
          more = true;
          break;
        }
        digits[k] = 0;
      }
    }
  }
  CHECK(separated_seen > 5);  // the trial mix must actually exercise the claim
}

TEST_CASE("rule 1: dropping an irrelevant observation") {
  const Admg chain = parse_graph("X -> M\nM -> Y\n");
  // Under do(M), X carries no further information about Y.
  CHECK(zid::rule1_applicable(chain, vs({"Y"}), vs({"M"}), vs({"X"}), {}));
  // Without the intervention the chain keeps X relevant.
  CHECK_FALSE(zid::rule1_applicable(chain, vs({"Y"}), {}, vs({"X"}), {}));
}

TEST_CASE("rule 2: exchanging action and observation") {
  // No confounding: conditioning on X equals intervening on X.
  const Admg chain = parse_graph("X -> Y\n");
  CHECK(zid::rule2_applicable(chain, vs({"Y"}), {}, vs({"X"}), {}));

  // The bow's hidden cause breaks the exchange.
  const Admg bow = corpus::bow();
  CHECK_FALSE(zid::rule2_applicable(bow, vs({"Y"}), {}, vs({"X"}), {}));

  // Conditioning on the common cause restores it: this is exactly why
  // backdoor adjustment works.
  const Admg bd = corpus::backdoor();
  CHECK_FALSE(zid::rule2_applicable(bd, vs({"Y"}), {}, vs({"X"}), {}));
  CHECK(zid::rule2_applicable(bd, vs({"Y"}), {}, vs({"X"}), vs({"Z"})));
}

TEST_CASE("rule 3: deleting a vacuous action") {
  const Admg g = parse_graph("X -> Y\nnode Q\n");
  // Q influences nothing, so do(Q) can be dropped.
  CHECK(zid::rule3_applicable(g, vs({"Y"}), {}, vs({"Q"}), {}));
  // X drives Y, so do(X) cannot.
  CHECK_FALSE(zid::rule3_applicable(g, vs({"Y"}), {}, vs({"X"}), {}));

  const Admg chain = parse_graph("X -> M\nM -> Y\n");
  // Once do(M) screens the mediator, do(X) becomes vacuous for Y.
  CHECK(zid::rule3_applicable(chain, vs({"Y"}), vs({"M"}), vs({"X"}), {}));
}

TEST_CASE("rule 3 shields the part of z that feeds the conditioning set") {
  // Z -> W and Z -> Y. Because Z is an ancestor of the observed W, its
  // incoming arrows must be kept when testing deletability, so the direct
  // Z -> Y edge is (correctly) still found: not applicable.
  const Admg g = parse_graph("Z -> W\nZ -> Y\n");
  CHECK_FALSE(zid::rule3_applicable(g, vs({"Y"}), {}, vs({"Z"}), vs({"W"})));

  // Without the direct edge the action is vacuous given W.
  const Admg h = parse_graph("Z -> W\nnode Y\n");
  CHECK(zid::rule3_applicable(h, vs({"Y"}), {}, vs({"Z"}), vs({"W"})));
}
