#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "support/checks.hpp"
#include "zid/kernels.hpp"
#include "zid/table.hpp"

using support::thrown_code;
using zid::Assignment;
using zid::DistributionFamily;
using zid::DistributionTable;
using zid::errc;
using zid::VariableId;
using zid::VariableSet;

namespace k = zid::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = u(rng);
  return out;
}

VariableId vid(const std::string& s) { return VariableId(s); }

// P(A, B) with A ~ fair coin and B biased by A; used by the table tests.
DistributionTable small_joint() {
  return DistributionTable::build({vid("A"), vid("B")}, {2, 2},
                                  {0.1, 0.4, 0.3, 0.2});
}

}  // namespace

TEST_CASE("dispatched kernels agree with the scalar reference") {
  std::mt19937_64 rng(99);
  // Lengths straddle every vector-width boundary plus ragged tails.
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 31u,
                        64u, 100u, 1023u}) {
    const auto x = random_vec(rng, n);
    const auto y = random_vec(rng, n);
    CHECK(std::abs(k::sum(x.data(), n) - k::scalar::sum(x.data(), n)) <=
          1e-12 * double(n + 1));
    CHECK(std::abs(k::dot(x.data(), y.data(), n) -
                   k::scalar::dot(x.data(), y.data(), n)) <=
          1e-12 * double(n + 1));
    // max over |diffs| involves no reassociation: exact match expected.
    CHECK(k::max_abs_diff(x.data(), y.data(), n) ==
          k::scalar::max_abs_diff(x.data(), y.data(), n));
  }
}

TEST_CASE("matvec matches the scalar reference on odd shapes") {
  std::mt19937_64 rng(7);
  for (auto [rows, cols] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 1}, {3, 5}, {4, 8}, {5, 7}, {16, 16}, {9, 33}}) {
    const auto a = random_vec(rng, rows * cols);
    const auto x = random_vec(rng, cols);
    std::vector<double> got(rows), want(rows);
    k::matvec(a.data(), x.data(), got.data(), rows, cols);
    k::scalar::matvec(a.data(), x.data(), want.data(), rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      CHECK(std::abs(got[r] - want[r]) <= 1e-12 * double(cols));
    }
  }
}

TEST_CASE("runtime backend reports a known implementation") {
  const std::string backend = k::active_backend();
  CHECK((backend == "scalar" || backend == "avx2"));
#if defined(__x86_64__) || defined(_M_X64)
  if (backend == "avx2") {
    // The explicitly vectorized entry points must agree with the scalar
    // reference on the same inputs.
    std::mt19937_64 rng(3);
    const auto x = random_vec(rng, 37);
    const auto y = random_vec(rng, 37);
    CHECK(std::abs(k::avx2::dot(x.data(), y.data(), 37) -
                   k::scalar::dot(x.data(), y.data(), 37)) <= 1e-12);
    CHECK(k::avx2::max_abs_diff(x.data(), y.data(), 37) ==
          k::scalar::max_abs_diff(x.data(), y.data(), 37));
  }
#endif
}

TEST_CASE("table construction validates shape and mass") {
  CHECK(thrown_code([] {
          DistributionTable::build({vid("A")}, {2}, {0.5, 0.6});
        }) == errc::domain_mismatch);  // mass 1.1
  CHECK(thrown_code([] {
          DistributionTable::build({vid("A")}, {2}, {1.5, -0.5});
        }) == errc::domain_mismatch);  // negative cell
  CHECK(thrown_code([] {
          DistributionTable::build({vid("A")}, {2}, {0.25, 0.25, 0.5});
        }) == errc::domain_mismatch);  // wrong cell count
  CHECK(thrown_code([] {
          DistributionTable::build({vid("A")}, {0}, {});
        }) == errc::domain_mismatch);  // cardinality < 1
  CHECK(thrown_code([] {
          DistributionTable::build({vid("A"), vid("A")}, {2, 2},
                                   {0.25, 0.25, 0.25, 0.25});
        }) == errc::domain_mismatch);  // duplicate variable
}

TEST_CASE("marginals and conditionals read the right cells") {
  const DistributionTable t = small_joint();
  CHECK(t.marginal({}) == doctest::Approx(1.0));
  CHECK(t.marginal({{vid("A"), 0}}) == doctest::Approx(0.5));
  CHECK(t.marginal({{vid("B"), 1}}) == doctest::Approx(0.6));
  CHECK(t.marginal({{vid("A"), 1}, {vid("B"), 0}}) == doctest::Approx(0.3));
  CHECK(thrown_code([&] { t.marginal({{vid("Q"), 0}}); }) ==
        errc::domain_mismatch);
  CHECK(thrown_code([&] { t.marginal({{vid("A"), 2}}); }) ==
        errc::domain_mismatch);
}

TEST_CASE("marginalize keeps order and mass") {
  const DistributionTable t = small_joint();
  const DistributionTable only_b = t.marginalize({vid("B")});
  CHECK(only_b.variables() == std::vector<VariableId>{vid("B")});
  REQUIRE(only_b.probabilities().size() == 2);
  CHECK(only_b.probabilities()[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(only_b.probabilities()[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(t.marginalize({vid("A"), vid("B")}).max_abs_diff(t) == 0.0);
  CHECK(thrown_code([&] { t.marginalize({vid("Q")}); }) ==
        errc::domain_mismatch);
}

TEST_CASE("assignment_at decodes row-major order, last axis fastest") {
  const DistributionTable t = small_joint();
  const Assignment a2 = t.assignment_at(2);
  CHECK(a2.at(vid("A")) == 1);
  CHECK(a2.at(vid("B")) == 0);
  CHECK(thrown_code([&] { t.assignment_at(4); }) == errc::domain_mismatch);
}

TEST_CASE("max_abs_diff requires identical shape") {
  const DistributionTable t = small_joint();
  const DistributionTable u = DistributionTable::build(
      {vid("A"), vid("B")}, {2, 2}, {0.1, 0.4, 0.2, 0.3});
  CHECK(t.max_abs_diff(u) == doctest::Approx(0.1));
  const DistributionTable narrow =
      DistributionTable::build({vid("A")}, {2}, {0.5, 0.5});
  CHECK(thrown_code([&] { t.max_abs_diff(narrow); }) ==
        errc::domain_mismatch);
}

TEST_CASE("distribution family serves regimes") {
  DistributionFamily fam(small_joint());
  // do(A=0): B keeps its A=0 conditional.
  fam.add_experimental({{vid("A"), 0}},
                       DistributionTable::build({vid("B")}, {2}, {0.2, 0.8}));

  CHECK(fam.has_regime({}));
  CHECK(fam.table_for({}).max_abs_diff(fam.observational()) == 0.0);
  CHECK(fam.has_regime({{vid("A"), 0}}));
  CHECK_FALSE(fam.has_regime({{vid("A"), 1}}));
  CHECK(thrown_code([&] { fam.table_for({{vid("A"), 1}}); }) ==
        errc::missing_regime);
  CHECK(fam.cardinality(vid("B")) == 2);

  // The experimental table must cover exactly the uncut variables.
  CHECK(thrown_code([&] {
          fam.add_experimental(
              {{vid("A"), 1}},
              DistributionTable::build({vid("A"), vid("B")}, {2, 2},
                                       {0.25, 0.25, 0.25, 0.25}));
        }) == errc::domain_mismatch);
}
