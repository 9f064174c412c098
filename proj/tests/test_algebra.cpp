#include <doctest.h>

#include "giry/algebra.hpp"
#include "giry/random.hpp"
#include "giry/space_file.hpp"
#include "support.hpp"

using namespace giry;
using test::q;

namespace {

AlgebraMap built(const SpaceEntry& e) { return std::get<AlgebraMap>(build_algebra(e.space, e.metric)); }

/// floor of the mean label: not an algebra.
AlgebraMap floor_mean(const SpacePtr& N) {
  return user_algebra(N, [](const FinMeasure& p) {
    Rational mean = 0;
    for (const auto& [x, w] : p.atoms()) mean += w * static_cast<long>(x.as_label());
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), mean.get_num_mpz_t(), mean.get_den_mpz_t());
    return Element::label(f.get_ui());
  });
}

/// Largest label in the support: the algebra of the max rule, used on a
/// min chain.
AlgebraMap max_label(const SpacePtr& N) {
  return user_algebra(N, [](const FinMeasure& p) {
    std::size_t top = 0;
    for (const auto& [x, w] : p.atoms()) top = std::max(top, x.as_label());
    return Element::label(top);
  });
}

}  // namespace

TEST_CASE("build_algebra examples") {
  auto reg = builtin_registry();
  const auto& N = *reg.at("N-min").space;
  auto hn = built(reg.at("N-min"));
  CHECK(hn.provenance == Provenance::DiscreteMin);
  CHECK(N.format(hn(test::m(N, {{"2", q(3, 10)}, {"5", q(7, 10)}}))) == "2");

  const auto& I = *reg.at("I").space;
  auto hi = built(reg.at("I"));
  CHECK(hi.provenance == Provenance::GeometricBarycenter);
  CHECK(I.format(hi(test::m(I, {{"0", q(1, 2)}, {"1", q(1, 2)}}))) == "1/2");

  // The L atom travels to 0 on H: 1/2·0 + 1/4·3/5 + 1/4·1/5.
  const auto& M = *reg.at("meng").space;
  auto hm = built(reg.at("meng"));
  CHECK(hm.provenance == Provenance::MixedConditional);
  CHECK(M.format(hm(test::m(M, {{"L[2/5]", q(1, 2)}, {"H[3/5]", q(1, 4)}, {"H[1/5]", q(1, 4)}}))) == "H[1/5]");

  CHECK(built(reg.at("chain-max")).provenance == Provenance::DiscreteMax);
  CHECK(built(reg.at("IxN")).provenance == Provenance::MixedConditional);
  CHECK(built(reg.at("R-inf")).provenance == Provenance::GeometricBarycenter);
}

TEST_CASE("C is rejected with both witnesses") {
  auto C = make_space_c();
  auto b = build_algebra(C, discrete_metric());
  REQUIRE(std::holds_alternative<Rejection>(b));
  const auto& r = std::get<Rejection>(b);
  CHECK(r.condition == "poset-not-total");
  REQUIRE(r.poset);
  CHECK(C->format(r.poset->x) == "0");
  CHECK(C->format(r.poset->y) == "1");
  CHECK(C->format(*r.poset->z) == "u");
  REQUIRE(r.compat);
  CHECK(r.compat->p == q(1, 2));
  CHECK(r.compat->lhs == ExtValue(1L));
  CHECK(r.compat->rhs == ExtValue(q(1, 2)));
}

TEST_CASE("metric-incompatible geometric spaces are rejected") {
  // The 0/1 metric on the interval: moving both points halfway to z
  // keeps them distinct, so d stays 1 where p·d would be 1/2.
  auto I = make_interval("I", 0, 1);
  ExtMetric sq{"01", [](const Element& x, const Element& y) { return ExtValue(x == y ? 0L : 1L); }, {}};
  auto b = build_algebra(I, sq);
  REQUIRE(std::holds_alternative<Rejection>(b));
  CHECK(std::get<Rejection>(b).condition == "compat-violation");
  CHECK(std::get<Rejection>(b).compat);
}

TEST_CASE("the literal cross-branch rule is rejected as a space") {
  auto reg = builtin_registry();
  auto b = build_algebra(reg.at("meng-literal").space, reg.at("meng-literal").metric);
  REQUIRE(std::holds_alternative<Rejection>(b));
  CHECK(std::get<Rejection>(b).condition == "not-a-convex-space");
  CHECK(std::get<Rejection>(b).regrouping);
}

TEST_CASE("unit law") {
  auto reg = builtin_registry();
  CHECK(verify_unit_law(built(reg.at("I"))).verdict == Verdict::SampledPass);
  CHECK(verify_unit_law(built(reg.at("N-min"))).verdict == Verdict::Pass);

  auto I = reg.at("I").space;
  auto zero = user_algebra(I, [](const FinMeasure&) { return test::pt(0); });
  auto r = verify_unit_law(zero);
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.point);
  CHECK(I->format(*r.point) == "1");
  CHECK(I->format(*r.image) == "0");
}

TEST_CASE("multiplication law") {
  auto reg = builtin_registry();
  CheckBudget b{500, 300, 3};
  CHECK(verify_mult_law(built(reg.at("I")), b).verdict == Verdict::SampledPass);
  CHECK(verify_mult_law(built(reg.at("N-min")), b).verdict == Verdict::SampledPass);

  auto N = reg.at("N-min").space;
  auto r = verify_mult_law(floor_mean(N), b);
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness);
  CHECK(*r.flattened != *r.pushed);
  CHECK(floor_mean(N)(mu(*r.witness)) == *r.flattened);

  // max is itself an algebra, of the max structure, so this law holds.
  CHECK(passed(verify_mult_law(max_label(N), b).verdict));
}

TEST_CASE("coseparator property") {
  auto reg = builtin_registry();
  auto I = reg.at("I").space;
  std::vector<AffineMap> lin{
      {"id", I, extended_reals(), [](const Element& x) { return Element::real(x.as_point().coords[0]); }},
      {"1-x", I, extended_reals(), [](const Element& x) { return Element::real(Rational(1 - x.as_point().coords[0])); }}};
  CHECK(passed(verify_coseparator_property(built(reg.at("I")), lin).verdict));

  auto N = reg.at("N-min").space;
  auto ideals = coseparating_family(N);
  auto r = verify_coseparator_property(built(reg.at("N-min")), ideals);
  CHECK(passed(r.verdict));
  CHECK(r.infinite_cases > 0);

  auto bad = verify_coseparator_property(max_label(N), ideals);
  CHECK(bad.verdict == Verdict::Fail);
  REQUIRE(bad.measure);
  CHECK(*bad.at_image != *bad.expectation);
}

TEST_CASE("support condition") {
  auto reg = builtin_registry();
  CHECK(passed(support_condition_check(built(reg.at("N-min"))).verdict));

  auto cx = counterexample_C();
  CHECK(cx.support.verdict == Verdict::Fail);
  REQUIRE(cx.support.measure);
  CHECK(serialize_measure(*cx.space, *cx.support.measure) == "measure on C: 0:1/2, 1:1/2");
  CHECK(cx.space->format(*cx.support.image) == "u");

  // Any map obeying the unit law passes on diracs.
  auto h = built(reg.at("chain-max"));
  for (const auto& x : reg.at("chain-max").space->elements()) {
    auto img = h(dirac(x));
    CHECK(img == x);
  }
}

TEST_CASE("induced structure matches the native one") {
  auto reg = builtin_registry();
  for (const char* id : {"I", "N-min", "meng", "IxN", "R-inf", "simplex3"}) {
    CAPTURE(id);
    CHECK(passed(induced_structure_check(built(reg.at(id))).verdict));
  }
  auto r = induced_structure_check(max_label(reg.at("N-min").space));
  CHECK(r.verdict == Verdict::Fail);
  CHECK(*r.algebra_value != *r.native_value);
}

TEST_CASE("discrete algebras see only the support") {
  auto reg = builtin_registry();
  std::mt19937_64 rng(79);
  for (const char* id : {"N-min", "chain-max", "two", "point"}) {
    const auto& e = reg.at(id);
    auto h = built(e);
    for (int k = 0; k < 100; ++k) {
      auto p = random_measure(*e.space, rng);
      auto w = random_weights(rng, p.size());
      std::vector<FinMeasure::Atom> moved;
      for (std::size_t i = 0; i < p.size(); ++i) moved.emplace_back(p.atoms()[i].first, w[i]);
      CHECK(h(p) == h(FinMeasure(moved)));
    }
  }
}

TEST_CASE("on one branch the mixed algebra is the branch algebra") {
  auto reg = builtin_registry();
  const auto& M = reg.at("meng");
  auto h = built(M);
  auto H = make_interval("[0,H]", 0, 1);
  auto hb = std::get<AlgebraMap>(build_algebra(H, l1_metric()));
  std::mt19937_64 rng(83);
  for (std::size_t branch : {0u, 1u}) {
    for (int k = 0; k < 100; ++k) {
      auto p = random_measure(*H, rng);
      auto tagged = pushforward([&](const Element& x) { return Element::tagged(branch, x); }, p);
      CHECK(h(tagged) == Element::tagged(branch, hb(p)));
    }
  }
}

TEST_CASE("products act factorwise") {
  auto reg = builtin_registry();
  const auto& e = reg.at("IxN");
  auto h = built(e);
  auto hI = built(reg.at("I"));
  auto N = make_naturals("N4", 4);
  auto hN = std::get<AlgebraMap>(build_algebra(N, discrete_ext_metric()));
  std::mt19937_64 rng(89);
  for (int k = 0; k < 100; ++k) {
    auto p = random_measure(*e.space, rng);
    auto img = h(p).as_tuple().parts;
    CHECK(img[0] == hI(pushforward([](const Element& x) { return x.as_tuple().parts[0]; }, p)));
    CHECK(img[1] == hN(pushforward([](const Element& x) { return x.as_tuple().parts[1]; }, p)));
  }
}

TEST_CASE("full reports") {
  CheckBudget b{500, 300, 1};
  for (const auto& e : test::builtins().entries()) {
    CAPTURE(e.space->id());
    auto r = algebra_report(e.space, e.metric, b);
    if (e.expect_reject) {
      CHECK(r.overall() == Verdict::Rejected);
      CHECK(r.rejection);
      continue;
    }
    CHECK(passed(r.overall()));
    REQUIRE(r.unit_law);
    REQUIRE(r.mult_law);
    REQUIRE(r.coseparator_law);
    REQUIRE(r.induced_structure);
    CHECK(r.mult_law->checked == 300);
    CHECK(r.support_condition.has_value() == (e.space->kind() != SpaceKind::Geometric));
    CHECK(r.compat.pass);
  }
}

TEST_CASE("a report on a bad candidate fails") {
  auto reg = builtin_registry();
  const auto& e = reg.at("N-min");
  auto r = algebra_report(floor_mean(e.space), e.metric);
  CHECK(r.overall() == Verdict::Fail);
  CHECK(r.provenance == Provenance::UserSupplied);
}

TEST_CASE("the counterexample report on C") {
  auto r = counterexample_C();
  CHECK(r.ideals.size() == 3);
  CHECK(r.coseparation.separates);
  CHECK_FALSE(r.compat.pass);
  CHECK_FALSE(r.poset.is_total_order);
  CHECK(std::holds_alternative<Rejection>(r.build));
}
