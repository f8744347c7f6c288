#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "support/checks.hpp"
#include "zid/estimand.hpp"
#include "zid/table.hpp"

using support::thrown_code;
using zid::Assignment;
using zid::DistributionFamily;
using zid::DistributionTable;
using zid::errc;
using zid::Estimand;
using zid::own_ref;
using zid::Regime;
using zid::RenderFormat;
using zid::Term;
using zid::ValueBinding;
using zid::VarBinding;
using zid::VariableId;
using zid::VariableSet;

namespace {

const VariableId X{"X"}, Y{"Y"}, Z{"Z"}, W{"W"};

// Joint over (X, Y, Z), plus both do(Z) tables over (X, Y). All cells are
// hand-picked so the expected numbers below are exact binary fractions or
// at least simple decimals.
DistributionFamily fixture() {
  DistributionFamily fam(DistributionTable::build(
      {X, Y, Z}, {2, 2, 2},
      {0.05, 0.10, 0.15, 0.20, 0.05, 0.15, 0.10, 0.20}));
  fam.add_experimental(
      {{Z, 0}},
      DistributionTable::build({X, Y}, {2, 2}, {0.3, 0.2, 0.4, 0.1}));
  fam.add_experimental(
      {{Z, 1}},
      DistributionTable::build({X, Y}, {2, 2}, {0.25, 0.25, 0.25, 0.25}));
  return fam;
}

Estimand obs_conditional() {
  return Estimand::term(Term{{own_ref(Y)}, {own_ref(X)}, {}});
}

// P[z](y,x) / P[z](x) with the regime pinned to Z=0.
Estimand regime_ratio() {
  const Regime do_z{{VarBinding{Z, ValueBinding::constant(0)}}};
  return Estimand::ratio(
      Estimand::term(Term{{own_ref(Y), own_ref(X)}, {}, do_z}),
      Estimand::term(Term{{own_ref(X)}, {}, do_z}));
}

}  // namespace

TEST_CASE("builders validate their parts") {
  CHECK(thrown_code([] { Estimand::term(Term{}); }) ==
        errc::malformed_expression);
  CHECK(thrown_code([] {
          Estimand::sum({X, X}, obs_conditional());
        }) == errc::malformed_expression);
  CHECK(thrown_code([] { Estimand::product({}); }) ==
        errc::malformed_expression);
  CHECK(thrown_code([] { ValueBinding::constant(7).ref(); }) ==
        errc::malformed_expression);
  CHECK(thrown_code([] { ValueBinding::reference(X).value(); }) ==
        errc::malformed_expression);
}

TEST_CASE("text rendering") {
  CHECK(zid::render(obs_conditional(), RenderFormat::text) == "P(y|x)");
  CHECK(zid::render(regime_ratio(), RenderFormat::text) ==
        "P[z](y,x) / P[z](x)");
  const Estimand marginal =
      Estimand::sum({W}, Estimand::term(Term{{own_ref(X), own_ref(W)}, {}, {}}));
  CHECK(zid::render(marginal, RenderFormat::text) == "sum_{w} P(x,w)");
  const Estimand prod = Estimand::product({obs_conditional(),
                                           Estimand::term(Term{{own_ref(Z)}, {}, {}})});
  CHECK(zid::render(Estimand::sum({Z}, prod), RenderFormat::text) ==
        "sum_{z} (P(y|x) * P(z))");
}

TEST_CASE("latex rendering") {
  CHECK(zid::render(obs_conditional(), RenderFormat::latex) ==
        "P(y \\mid x)");
  const Regime do_z{{VarBinding{Z, ValueBinding::constant(0)}}};
  const Estimand t = Estimand::term(Term{{own_ref(Y)}, {own_ref(X)}, do_z});
  CHECK(zid::render(t, RenderFormat::latex) == "P(y \\mid x, do(z))");
  CHECK(zid::render(regime_ratio(), RenderFormat::latex) ==
        "\\frac{P(y, x \\mid do(z))}{P(x \\mid do(z))}");
  const VariableId dummy{"W_2"};
  const Estimand s = Estimand::sum(
      {dummy}, Estimand::term(Term{{VarBinding{W, ValueBinding::reference(dummy)}},
                                   {},
                                   {}}));
  // Underscores in generated dummies must be escaped.
  CHECK(zid::render(s, RenderFormat::latex) == "\\sum_{w\\_2} P(w\\_2)");
}

TEST_CASE("evaluation reads the regime's table") {
  const DistributionFamily fam = fixture();

  // Observational: P(Y=1 | X=1) = 0.30 / 0.5.
  CHECK(zid::evaluate(obs_conditional(), {{X, 1}, {Y, 1}}, fam) ==
        doctest::Approx(0.6).epsilon(1e-12));

  // do(Z=0): P(Y=1, X=1) / P(X=1) = 0.1 / 0.5.
  CHECK(zid::evaluate(regime_ratio(), {{X, 1}, {Y, 1}}, fam) ==
        doctest::Approx(0.2).epsilon(1e-12));

  // A conditioning list is the same ratio computed inside the term.
  const Regime do_z{{VarBinding{Z, ValueBinding::constant(0)}}};
  const Estimand cond =
      Estimand::term(Term{{own_ref(Y)}, {own_ref(X)}, do_z});
  CHECK(zid::evaluate(cond, {{X, 1}, {Y, 1}}, fam) ==
        doctest::Approx(0.2).epsilon(1e-12));

  // Sums bind their own variable and shadow the environment.
  const Estimand summed = Estimand::sum(
      {Y}, Estimand::term(Term{{own_ref(Y), own_ref(X)}, {}, do_z}));
  CHECK(zid::evaluate(summed, {{X, 1}}, fam) ==
        doctest::Approx(0.5).epsilon(1e-12));

  CHECK(thrown_code([&] { zid::evaluate(obs_conditional(), {{Y, 1}}, fam); })
        == errc::unbound_variable);
}

TEST_CASE("division by an impossible event yields zero, not NaN") {
  DistributionFamily fam(DistributionTable::build(
      {X, Y}, {2, 2}, {0.5, 0.5, 0.0, 0.0}));  // X = 1 never happens
  CHECK(zid::evaluate(obs_conditional(), {{X, 1}, {Y, 0}}, fam) == 0.0);
  const Estimand r = Estimand::ratio(
      Estimand::term(Term{{own_ref(Y)}, {}, {}}),
      Estimand::term(Term{{own_ref(X)}, {}, {}}));
  CHECK(zid::evaluate(r, {{X, 1}, {Y, 0}}, fam) == 0.0);
}

TEST_CASE("product evaluation does not depend on factor order") {
  const DistributionFamily fam = fixture();
  const Estimand a = obs_conditional();
  const Estimand b = Estimand::term(Term{{own_ref(Z)}, {}, {}});
  const Estimand c = Estimand::term(Term{{own_ref(X)}, {}, {}});
  const Assignment env = {{X, 1}, {Y, 0}, {Z, 1}};
  const double forward = zid::evaluate(Estimand::product({a, b, c}), env, fam);
  const double backward = zid::evaluate(Estimand::product({c, b, a}), env, fam);
  CHECK(forward == backward);  // bitwise: factors are multiplied in value order
}

TEST_CASE("free variables and binder names respect shadowing") {
  const Estimand e = Estimand::sum(
      {Y}, Estimand::product(
               {Estimand::term(Term{{own_ref(Y)}, {own_ref(X)}, {}}),
                Estimand::sum({X}, Estimand::term(Term{{own_ref(X)}, {}, {}}))}));
  CHECK(zid::free_variables(e) == VariableSet{X});
  CHECK(zid::binder_names(e) == VariableSet{X, Y});

  // Regime references count as free occurrences too.
  const Regime ref_regime{{VarBinding{Z, ValueBinding::reference(W)}}};
  const Estimand t = Estimand::term(Term{{own_ref(Y)}, {}, ref_regime});
  CHECK(zid::free_variables(t) == VariableSet{W, Y});
}

TEST_CASE("normalize flattens products and drops empty sums") {
  const Estimand a = obs_conditional();
  const Estimand b = Estimand::term(Term{{own_ref(Z)}, {}, {}});
  const Estimand nested =
      Estimand::product({Estimand::product({a, b}), Estimand::product({a})});
  const Estimand flat = zid::normalize(nested);
  REQUIRE(flat.kind() == Estimand::Kind::product);
  CHECK(flat.factors().size() == 3);

  CHECK(zid::normalize(Estimand::sum({}, a)) == a);
  CHECK(zid::normalize(Estimand::product({a})) == a);
  // Idempotent.
  CHECK(zid::normalize(flat) == flat);
  // Sums with real binders survive.
  const Estimand s = Estimand::sum({Z}, b);
  CHECK(zid::normalize(s) == s);
}

TEST_CASE("with_regime_value retargets only regime bindings") {
  const DistributionFamily fam = fixture();
  const Estimand e = regime_ratio();
  const Estimand flipped = zid::with_regime_value(e, Z, 1);
  // do(Z=1) table is uniform: P(Y=1, X=1)/P(X=1) = 0.25 / 0.5.
  CHECK(zid::evaluate(flipped, {{X, 1}, {Y, 1}}, fam) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // Occurrences of Z outside regimes are left alone.
  const Estimand z_outcome = Estimand::term(Term{{own_ref(Z)}, {}, {}});
  CHECK(zid::with_regime_value(z_outcome, Z, 1) == z_outcome);
}

TEST_CASE("rename_free_refs leaves shadowed references alone") {
  const Estimand free_term = Estimand::term(Term{{own_ref(X)}, {}, {}});
  const Estimand shadowed = Estimand::sum({X}, free_term);
  const Estimand e = Estimand::product({free_term, shadowed});
  const Estimand renamed = zid::rename_free_refs(e, {{X, W}});
  REQUIRE(renamed.kind() == Estimand::Kind::product);
  // First factor: reference follows the rename (display name follows the
  // referenced variable).
  CHECK(zid::render(renamed.factors()[0], RenderFormat::text) == "P(w)");
  // Second factor: binder shadows the rename.
  CHECK(renamed.factors()[1] == shadowed);
  CHECK(zid::free_variables(renamed) == VariableSet{W});
}

TEST_CASE("bind_free_refs substitutes constants for references") {
  const DistributionFamily fam = fixture();
  const Estimand term_x = Estimand::term(Term{{own_ref(X)}, {}, {}});
  const Estimand bound =
      zid::bind_free_refs(term_x, {{X, ValueBinding::constant(1)}});
  CHECK(zid::free_variables(bound).empty());
  CHECK(zid::evaluate(bound, {}, fam) == doctest::Approx(0.5).epsilon(1e-12));
  // Shadowed references stay references.
  const Estimand s = Estimand::sum({X}, term_x);
  CHECK(zid::bind_free_refs(s, {{X, ValueBinding::constant(1)}}) == s);
}

TEST_CASE("JSON round-trip preserves structure") {
  const Estimand e = Estimand::sum(
      {Z}, Estimand::product(
               {regime_ratio(),
                Estimand::term(Term{{VarBinding{Z, ValueBinding::constant(1)}},
                                    {own_ref(X)},
                                    {}})}));
  const std::string text = zid::to_json(e);
  CHECK(zid::estimand_from_json(text) == e);
  // Spot-check the wire format.
  CHECK(text.find("\"kind\":\"sum\"") != std::string::npos);
  CHECK(text.find("\"bound\":[\"Z\"]") != std::string::npos);
  CHECK(text.find("\"ref\":\"X\"") != std::string::npos);
  CHECK(text.find("\"value\":1") != std::string::npos);
}

TEST_CASE("JSON rejects malformed expressions") {
  CHECK(thrown_code([] { zid::estimand_from_json("not json at all"); }) ==
        errc::malformed_expression);
  CHECK(thrown_code([] { zid::estimand_from_json("[]"); }) ==
        errc::malformed_expression);
  CHECK(thrown_code([] { zid::estimand_from_json("{\"kind\":\"sum\"}"); }) ==
        errc::malformed_expression);
  CHECK(thrown_code([] {
          zid::estimand_from_json("{\"kind\":\"wedge\",\"factors\":[]}");
        }) == errc::malformed_expression);
  CHECK(thrown_code([] {
          zid::estimand_from_json(
              "{\"kind\":\"term\",\"outcome\":[{\"var\":\"X\"}],"
              "\"conditioning\":[],\"regime\":[]}");
        }) == errc::malformed_expression);  // binding lacks value and ref
}

TEST_CASE("domain cardinality resolves generated dummies") {
  const DistributionFamily fam = fixture();
  CHECK(zid::domain_cardinality(fam, X) == 2);
  CHECK(zid::domain_cardinality(fam, VariableId{"X_7"}) == 2);
  // Exactly one suffix is stripped; anything deeper is unknown.
  CHECK(thrown_code([&] {
          zid::domain_cardinality(fam, VariableId{"X_7_12"});
        }) == errc::domain_mismatch);
  CHECK(thrown_code([&] {
          zid::domain_cardinality(fam, VariableId{"Q_3"});
        }) == errc::domain_mismatch);
  CHECK(thrown_code([&] { zid::domain_cardinality(fam, VariableId{"Q"}); }) ==
        errc::domain_mismatch);
}
