#include <doctest.h>

#include <algorithm>
#include <set>

#include "giry/affine.hpp"
#include "giry/parallel.hpp"
#include "giry/space_file.hpp"
#include "giry/structure.hpp"
#include "support.hpp"

using namespace giry;
using test::q;

namespace {

std::string show(const ConvexSpace& s, const std::vector<Element>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + s.format(xs[i]);
  return out + "}";
}

/// Ideal oracle straight from the definition: proper, nonempty, and
/// p·a + (1-p)·b stays inside for every member a, point b and grid p.
bool ideal_by_definition(const ConvexSpace& s, const std::vector<Element>& members) {
  const auto all = s.elements();
  if (members.empty() || members.size() == all.size()) return false;
  auto in = [&](const Element& e) { return std::find(members.begin(), members.end(), e) != members.end(); };
  for (const auto& a : members)
    for (const auto& b : all)
      for (const auto& p : default_p_grid())
        if (!in(s.combine2(p, a, b))) return false;
  return true;
}

std::vector<SpacePtr> finite_builtins() {
  std::vector<SpacePtr> out;
  for (const auto& e : test::builtins().entries())
    if (e.space->is_finite()) out.push_back(e.space);
  out.push_back(make_chain("chain3", {"0", "1", "2"}, ChainRule::Max));
  out.push_back(make_naturals("N10", 10));
  return out;
}

}  // namespace

TEST_CASE("combine examples") {
  auto I = make_interval("I", 0, 1);
  std::vector<Element> xs{test::pt(0), test::pt(1)};
  CHECK(combine(*I, WeightVector({q(1, 2), q(1, 2)}), xs) == test::pt(1, 2));

  auto C = make_space_c();
  std::vector<Element> c01{C->parse("0"), C->parse("1")};
  CHECK(C->format(combine(*C, WeightVector({q(1, 3), q(2, 3)}), c01)) == "u");

  auto N = make_naturals("N", 10);
  std::vector<Element> n25{N->parse("2"), N->parse("5")};
  CHECK(N->format(combine(*N, WeightVector({q(1, 2), q(1, 2)}), n25)) == "2");

  // The L point travels to 0 on H before combining.
  auto meng = make_meng_space();
  CHECK(meng->format(meng->combine2(q(1, 2), meng->parse("L[2/5]"), meng->parse("H[3/5]"))) == "H[3/10]");
  CHECK(meng->format(meng->combine2(q(1, 2), meng->parse("H[2/5]"), meng->parse("H[4/5]"))) == "H[3/5]");
}

TEST_CASE("zero weights are dropped before folding") {
  auto I = make_interval("I", 0, 1);
  std::vector<Element> xs{test::pt(0), test::pt(1), test::pt(1, 2)};
  CHECK(combine(*I, WeightVector({q(0), q(1, 2), q(1, 2)}), xs) == test::pt(3, 4));
  CHECK_THROWS(WeightVector({q(1, 2), q(1, 3)}));
  CHECK_THROWS(WeightVector({q(3, 2), q(-1, 2)}));
}

TEST_CASE("regrouping on meng, recomputed both ways") {
  auto s = make_meng_space();
  auto x = s->parse("L[1/2]"), a = s->parse("H[2/5]"), b = s->parse("H[4/5]");
  auto half = q(1, 2);
  auto left = s->combine2(half, x, s->combine2(half, a, b));
  // (1/2)x + (1/4)a + (1/4)b regrouped as ((1/2)x + (1/4)a)/(3/4) first.
  auto right = s->combine2(q(3, 4), s->combine2(q(2, 3), x, a), b);
  CHECK(left == right);
  CHECK(s->format(left) == "H[3/10]");
}

TEST_CASE("the literal cross-branch rule is not a convex space") {
  auto literal = make_meng_space(1, 1, SemidirectRule::Survivor);
  // The literal rule still gives p xL + (1-p) yH = yH.
  CHECK(literal->format(literal->combine2(q(1, 2), literal->parse("L[2/5]"), literal->parse("H[3/5]"))) ==
        "H[3/5]");
  auto r = check_space_axioms(*literal);
  CHECK_FALSE(r.ok);
  REQUIRE(r.witness);
  CHECK(r.witness->left_fold != r.witness->regrouped);
  CHECK(check_space_axioms(*make_meng_space()).ok);
}

TEST_CASE("space axioms hold on every built-in") {
  for (const auto& e : test::builtins().entries()) {
    if (e.space->id() == "meng-literal") continue;
    CAPTURE(e.space->id());
    auto r = check_space_axioms(*e.space, 1000, 7);
    CHECK(r.ok);
    CHECK(r.exhaustive == e.space->is_finite());
  }
}

TEST_CASE("is_affine") {
  auto I = make_interval("I", 0, 1);
  AffineMap id{"id", I, I, [](const Element& x) { return x; }};
  CHECK(is_affine(id).affine);

  AffineMap sq{"sq", I, I, [](const Element& x) {
                 const auto& v = x.as_point().coords[0];
                 return Element::point({Rational(v * v)});
               }};
  auto r = is_affine(sq);
  CHECK_FALSE(r.affine);
  REQUIRE(r.witness);
  CHECK(r.witness->p == q(1, 2));
  CHECK(r.witness->x == test::pt(0));
  CHECK(r.witness->y == test::pt(1));
  CHECK(r.witness->image_of_combination == test::pt(1, 4));
  CHECK(r.witness->combination_of_images == test::pt(1, 2));

  auto C = make_space_c();
  Ideal u0{C, {C->parse("0"), C->parse("u")}};
  auto chi = char_map(u0);
  auto a = is_affine(chi);
  CHECK(a.affine);
  CHECK(a.exhaustive);
}

TEST_CASE("ideals of C, 2 and a max chain") {
  auto C = make_space_c();
  auto ideals = enumerate_ideals(C);
  std::vector<std::string> got;
  for (const auto& i : ideals) got.push_back(show(*C, i.members));
  CHECK(got == std::vector<std::string>{"{u}", "{0,u}", "{1,u}"});

  auto two = make_two();
  auto t = enumerate_ideals(two);
  REQUIRE(t.size() == 1);
  CHECK(show(*two, t[0].members) == "{1}");

  auto chain = make_chain("chain3", {"0", "1", "2"}, ChainRule::Max);
  auto c = enumerate_ideals(chain);
  std::vector<std::string> cs;
  for (const auto& i : c) cs.push_back(show(*chain, i.members));
  CHECK(cs == std::vector<std::string>{"{2}", "{1,2}"});
}

TEST_CASE("enumerate_ideals matches brute-force subset filtering") {
  for (const auto& s : finite_builtins()) {
    const auto all = s->elements();
    if (all.size() > 12) continue;
    CAPTURE(s->id());
    std::set<std::string> oracle, got;
    for (auto& sub : test::all_subsets(all)) {
      std::sort(sub.begin(), sub.end());
      if (ideal_by_definition(*s, sub)) oracle.insert(show(*s, sub));
      CHECK(is_ideal(*s, sub) == ideal_by_definition(*s, sub));
    }
    for (const auto& i : enumerate_ideals(s)) {
      auto members = i.members;
      std::sort(members.begin(), members.end());
      got.insert(show(*s, members));
      CHECK(ideal_by_definition(*s, members));
    }
    CHECK(got == oracle);
  }
}

TEST_CASE("char maps take values in {0, inf} and are affine") {
  auto C = make_space_c();
  auto chi = char_map(Ideal{C, {C->parse("u")}});
  CHECK(chi(C->parse("u")).as_ext().is_infinite());
  CHECK(chi(C->parse("0")).as_ext() == ExtValue(0L));
  CHECK(chi(C->parse("1")).as_ext() == ExtValue(0L));

  auto two = make_two();
  auto chi1 = char_map(Ideal{two, {two->parse("1")}});
  CHECK(chi1(two->parse("1")).as_ext().is_infinite());
  CHECK(chi1(two->parse("0")).as_ext() == ExtValue(0L));

  CHECK_THROWS(char_map(Ideal{C, {}}));
  CHECK_THROWS(char_map(Ideal{C, {C->parse("0")}}));

  // chi is affine exactly when the complement of the ideal is closed too.
  // On C the complement {0, 1} of {u} is not, since 0 and 1 meet in u.
  for (const auto& s : finite_builtins()) {
    CAPTURE(s->id());
    for (const auto& i : enumerate_ideals(s)) {
      std::vector<Element> rest;
      for (const auto& x : s->elements())
        if (std::find(i.members.begin(), i.members.end(), x) == i.members.end()) rest.push_back(x);
      bool closed = true;
      for (const auto& a : rest)
        for (const auto& b : rest)
          for (const auto& p : default_p_grid())
            closed = closed && std::find(rest.begin(), rest.end(), s->combine2(p, a, b)) != rest.end();
      auto r = is_affine(char_map(i));
      CHECK(r.affine == closed);
      CHECK(r.exhaustive);
    }
  }
  auto bad = is_affine(chi);
  CHECK_FALSE(bad.affine);
  CHECK(is_affine(char_map(Ideal{C, {C->parse("0"), C->parse("u")}})).affine);
  CHECK(is_affine(char_map(Ideal{C, {C->parse("1"), C->parse("u")}})).affine);
}

TEST_CASE("coseparation on C") {
  auto C = make_space_c();
  std::vector<AffineMap> maps;
  for (const auto& i : enumerate_ideals(C)) maps.push_back(char_map(i));
  CHECK(coseparates(maps, C).separates);

  std::vector<AffineMap> one{maps[0]};
  auto r = coseparates(one, C);
  CHECK_FALSE(r.separates);
  REQUIRE(r.unseparated);
  CHECK(C->format(r.unseparated->first) == "0");
  CHECK(C->format(r.unseparated->second) == "1");

  CHECK(coseparates({}, make_point_space()).separates);
}

TEST_CASE("the built-in coseparating families coseparate and are affine") {
  for (const auto& e : test::builtins().entries()) {
    if (e.expect_reject) continue;
    CAPTURE(e.space->id());
    auto maps = coseparating_family(e.space);
    CHECK(coseparates(maps, e.space, 300, 3).separates);
    for (const auto& m : maps) {
      CAPTURE(m.name);
      CHECK(is_affine(m, 300, 5).affine);
    }
  }
}

TEST_CASE("preimages of ideals under affine maps are ideals") {
  // Every affine map from a 3-chain or C into 2, found by enumeration.
  auto two = make_two();
  auto two_ideals = enumerate_ideals(two);
  for (const auto& dom : {make_chain("chain3", {"0", "1", "2"}, ChainRule::Max), make_space_c()}) {
    const auto xs = dom->elements();
    std::size_t affine_maps = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << xs.size()); ++mask) {
      AffineMap f{"f", dom, two, [xs, mask](const Element& e) {
                    auto i = static_cast<std::size_t>(std::find(xs.begin(), xs.end(), e) - xs.begin());
                    return Element::label((mask >> i) & 1);
                  }};
      if (!is_affine(f).affine) continue;
      ++affine_maps;
      for (const auto& ideal : two_ideals) {
        auto pre = preimage(f, ideal);
        std::sort(pre.begin(), pre.end());
        // Empty or everything is allowed; anything else must be an ideal.
        if (!pre.empty() && pre.size() < xs.size()) CHECK(ideal_by_definition(*dom, pre));
      }
    }
    CHECK(affine_maps >= 2);
  }
}

TEST_CASE("discrete posets") {
  auto C = make_space_c();
  auto pc = discrete_poset(*C);
  CHECK_FALSE(pc.is_total_order);
  REQUIRE(pc.witness);
  CHECK(pc.witness->reason == PosetWitness::Reason::ThirdElement);
  CHECK(C->format(pc.witness->x) == "0");
  CHECK(C->format(pc.witness->y) == "1");
  CHECK(C->format(*pc.witness->z) == "u");

  auto N = make_naturals("N10", 10);
  auto pn = discrete_poset(*N);
  CHECK(pn.is_total_order);
  // i ≤ j iff the min-combination of i and j fixes j, so 9 is the bottom.
  auto asc = pn.ascending();
  CHECK(N->format(pn.elements[asc.front()]) == "9");
  CHECK(N->format(pn.elements[asc.back()]) == "0");
  for (std::size_t i = 0; i < pn.elements.size(); ++i)
    for (std::size_t j = 0; j < pn.elements.size(); ++j)
      CHECK(pn.leq[i][j] == (N->combine2(q(1, 2), pn.elements[i], pn.elements[j]) == pn.elements[j]));

  CHECK(discrete_poset(*make_point_space()).is_total_order);
  CHECK(discrete_poset(*make_chain("c", {"a", "b", "c"}, ChainRule::Max)).is_total_order);
  CHECK_THROWS(discrete_poset(*make_interval("I", 0, 1)));
}

TEST_CASE("kinds") {
  CHECK(classify_kind(*make_space_c()).kind == SpaceKind::Discrete);
  CHECK(classify_kind(*make_interval("I", 0, 1)).kind == SpaceKind::Geometric);
  CHECK(classify_kind(*make_meng_space()).kind == SpaceKind::Mixed);
  CHECK(classify_kind(*make_product("IxN", {make_interval("I", 0, 1), make_naturals("N", 4)})).kind ==
        SpaceKind::Mixed);
}

TEST_CASE("products combine coordinatewise") {
  auto I = make_interval("I", 0, 1);
  auto II = product_space(I, I);
  CHECK(II->format(II->combine2(q(1, 2), II->parse("(0,0)"), II->parse("(1,1)"))) == "(1/2,1/2)");

  auto N = make_naturals("N4", 4);
  auto IN = product_space(I, N);
  CHECK(IN->kind() == SpaceKind::Mixed);
  CHECK(product_space(I, I)->kind() == SpaceKind::Geometric);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    auto x = IN->sample(rng), y = IN->sample(rng);
    auto p = default_p_grid()[static_cast<std::size_t>(k) % default_p_grid().size()];
    auto z = IN->combine2(p, x, y);
    CHECK(z.as_tuple().parts[0] == I->combine2(p, x.as_tuple().parts[0], y.as_tuple().parts[0]));
    CHECK(z.as_tuple().parts[1] == N->combine2(p, x.as_tuple().parts[1], y.as_tuple().parts[1]));
  }
}

TEST_CASE("semidirect products need a totally ordered base") {
  auto I = make_interval("I", 0, 1);
  CHECK_THROWS(semidirect_space(make_space_c(), {I, I, I}, {}));
}

TEST_CASE("element text round-trips") {
  for (const auto& e : test::builtins().entries()) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
      auto x = e.space->sample(rng);
      CHECK(e.space->parse(e.space->format(x)) == x);
      CHECK(e.space->contains(x));
    }
  }
}

TEST_CASE("extended values absorb infinity") {
  auto inf = ExtValue::infinity();
  CHECK((inf + ExtValue(q(3))).is_infinite());
  CHECK(inf.scale(q(1, 9)).is_infinite());
  CHECK(inf.scale(q(0)) == ExtValue(0L));
  CHECK(ExtValue(q(1, 2)) < inf);
  CHECK(to_string(inf) == "inf");
  CHECK(parse_ext_value("inf").is_infinite());
  CHECK(parse_ext_value("-7/14") == ExtValue(q(-1, 2)));
}

TEST_CASE("serial and OpenMP kernels find the same first failure") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng() % 5000;
    const std::uint64_t salt = rng();
    const std::uint64_t rate = 1 + rng() % 2000;
    auto fails = [&](std::size_t i) { return (trial_rng(salt, i)() % rate) == 0; };
    CHECK(serial::first_failure(n, fails) == omp::first_failure(n, fails));
  }
  CHECK_FALSE(omp::first_failure(0, [](std::size_t) { return true; }));
}

TEST_CASE("a throwing trial stops the OpenMP kernel where the serial loop stops") {
  auto pred = [](std::size_t i) {
    if (i == 700) throw std::runtime_error("boom");
    return i == 900;
  };
  CHECK_THROWS_AS(serial::first_failure(1000, pred), std::runtime_error);
  CHECK_THROWS_AS(omp::first_failure(1000, pred), std::runtime_error);
  auto earlier = [](std::size_t i) {
    if (i == 700) throw std::runtime_error("boom");
    return i == 300;
  };
  CHECK(serial::first_failure(1000, earlier) == std::optional<std::size_t>(300));
  CHECK(omp::first_failure(1000, earlier) == std::optional<std::size_t>(300));
}
