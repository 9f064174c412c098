#include "giry/algebra.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "giry/parallel.hpp"
#include "giry/random.hpp"

namespace giry {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::GeometricBarycenter: return "geometric-barycenter";
    case Provenance::DiscreteMin: return "discrete-min";
    case Provenance::DiscreteMax: return "discrete-max";
    case Provenance::MixedConditional: return "mixed-conditional";
    case Provenance::UserSupplied: return "user-supplied";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::SampledPass: return "sampled-pass";
    case Verdict::Fail: return "fail";
    case Verdict::Rejected: return "rejected";
  }
  return "?";
}

AlgebraMap user_algebra(SpacePtr space, std::function<Element(const FinMeasure&)> rule) {
  return AlgebraMap{std::move(space), std::move(rule), Provenance::UserSupplied};
}

namespace {

Element barycenter(const FinMeasure& p) {
  const std::size_t dim = p.atoms().front().first.as_point().coords.size();
  std::vector<Rational> out(dim, Rational(0));
  for (const auto& [x, w] : p.atoms())
    for (std::size_t i = 0; i < dim; ++i) out[i] += w * x.as_point().coords[i];
  return Element::point(std::move(out));
}

Element ext_barycenter(const FinMeasure& p) {
  Rational s = 0;
  for (const auto& [x, w] : p.atoms()) {
    if (x.as_ext().is_infinite()) return Element::infinity();
    s += w * x.as_ext().value();
  }
  return Element::real(s);
}

Rejection compat_rejection(const SpacePtr& space, const CompatResult& c) {
  return Rejection{"compat-violation", space, std::nullopt, c.witness, std::nullopt};
}

BuildResult build_discrete(const SpacePtr& space, const ExtMetric& d, std::size_t budget, std::uint64_t seed) {
  DiscretePoset poset = discrete_poset(*space);
  if (!poset.is_total_order) {
    Rejection r{"poset-not-total", space, poset.witness, std::nullopt, std::nullopt};
    auto compat = compat_check_2pt(*space, d, budget, seed);
    if (!compat.pass) r.compat = compat.witness;
    return r;
  }
  if (const auto* chain = space->as<ChainCarrier>()) {
    const bool min = chain->rule == ChainRule::Min;
    return AlgebraMap{space,
                      [min](const FinMeasure& p) {
                        // atoms are sorted by label index
                        return min ? p.atoms().front().first : p.atoms().back().first;
                      },
                      min ? Provenance::DiscreteMin : Provenance::DiscreteMax};
  }
  // Top of the support in the induced order y ≤ x iff p·y + (1-p)·x = x.
  auto leq = poset.leq;
  return AlgebraMap{space,
                    [leq](const FinMeasure& p) {
                      for (const auto& [t, wt] : p.atoms()) {
                        bool top = std::all_of(p.atoms().begin(), p.atoms().end(),
                                               [&](const auto& a) { return leq[a.first.as_label()][t.as_label()]; });
                        if (top) return t;
                      }
                      throw std::logic_error("support has no top in a total order");
                    },
                    Provenance::DiscreteMax};
}

}  // namespace

BuildResult build_algebra(const SpacePtr& space, const ExtMetric& d, std::size_t budget, std::uint64_t seed) {
  const auto& carrier = space->carrier();

  if (std::holds_alternative<ChainCarrier>(carrier) || std::holds_alternative<TableCarrier>(carrier))
    return build_discrete(space, d, budget, seed);

  if (std::holds_alternative<SemidirectCarrier>(carrier)) {
    auto axioms = check_space_axioms(*space, budget, seed);
    if (!axioms.ok) return Rejection{"not-a-convex-space", space, std::nullopt, std::nullopt, axioms.witness};
  }

  if (space->kind() != SpaceKind::Discrete) {
    auto compat = compat_check_2pt(*space, d, budget, seed);
    if (!compat.pass) return compat_rejection(space, compat);
  }

  if (std::holds_alternative<BoxCarrier>(carrier) || std::holds_alternative<SimplexCarrier>(carrier))
    return AlgebraMap{space, barycenter, Provenance::GeometricBarycenter};
  if (std::holds_alternative<ExtLineCarrier>(carrier))
    return AlgebraMap{space, ext_barycenter, Provenance::GeometricBarycenter};

  auto part_metric = [&](std::size_t i, const SpacePtr& part) {
    return i < d.parts.size() ? d.parts[i] : default_metric(*part);
  };

  if (const auto* prod = std::get_if<ProductCarrier>(&carrier)) {
    std::vector<AlgebraMap> factors;
    for (std::size_t i = 0; i < prod->factors.size(); ++i) {
      auto r = build_algebra(prod->factors[i], part_metric(i, prod->factors[i]), budget, seed);
      if (auto* rej = std::get_if<Rejection>(&r)) return *rej;
      factors.push_back(std::get<AlgebraMap>(std::move(r)));
    }
    Provenance prov = factors.front().provenance;
    for (const auto& f : factors)
      if (f.provenance != prov) prov = Provenance::MixedConditional;
    return AlgebraMap{space,
                      [factors](const FinMeasure& p) {
                        std::vector<Element> parts;
                        for (std::size_t i = 0; i < factors.size(); ++i)
                          parts.push_back(factors[i](pushforward(
                              [i](const Element& x) { return x.as_tuple().parts[i]; }, p)));
                        return Element::tuple(std::move(parts));
                      },
                      prov};
  }

  const auto& sd = std::get<SemidirectCarrier>(carrier);
  std::vector<AlgebraMap> branches;
  for (std::size_t i = 0; i < sd.components.size(); ++i) {
    auto r = build_algebra(sd.components[i], part_metric(i, sd.components[i]), budget, seed);
    if (auto* rej = std::get_if<Rejection>(&r)) return *rej;
    branches.push_back(std::get<AlgebraMap>(std::move(r)));
  }
  SpacePtr base = sd.base;
  return AlgebraMap{space,
                    [space, base, branches](const FinMeasure& p) {
                      const Rational half = make_rational(1, 2);
                      Element s = Element::label(p.atoms().front().first.as_tagged().branch);
                      for (const auto& [x, w] : p.atoms())
                        s = base->combine2(half, s, Element::label(x.as_tagged().branch));
                      const std::size_t b = s.as_label();
                      auto moved = pushforward(
                          [&](const Element& x) {
                            const auto& t = x.as_tagged();
                            return space->transition(t.branch, b, *t.point);
                          },
                          p);
                      return Element::tagged(b, branches[b](moved));
                    },
                    Provenance::MixedConditional};
}

UnitLawResult verify_unit_law(const AlgebraMap& h, const CheckBudget& budget) {
  UnitLawResult r;
  const auto& space = *h.space;
  const bool finite = space.is_finite();
  const auto pts = space.landmarks();
  const std::size_t total = pts.size() + (finite ? 0 : budget.samples);
  r.checked = total;
  r.verdict = finite ? Verdict::Pass : Verdict::SampledPass;
  auto point = [&](std::size_t idx) {
    if (idx < pts.size()) return pts[idx];
    auto rng = trial_rng(budget.seed, idx);
    return space.sample(rng);
  };
  auto hit = first_failure(total, [&](std::size_t idx) {
    Element a = point(idx);
    return h(dirac(a)) != a;
  });
  if (hit) {
    r.verdict = Verdict::Fail;
    r.point = point(*hit);
    r.image = h(dirac(*r.point));
  }
  return r;
}

MultLawResult verify_mult_law(const AlgebraMap& h, const CheckBudget& budget) {
  MultLawResult r;
  r.checked = budget.meta;
  auto draw = [&](std::size_t idx) {
    auto rng = trial_rng(budget.seed, idx);
    return random_meta(*h.space, rng);
  };
  auto hit = first_failure(budget.meta, [&](std::size_t idx) {
    auto q = draw(idx);
    return h(mu(q)) != h(pushforward(h.rule, q));
  });
  if (hit) {
    r.verdict = Verdict::Fail;
    r.witness = draw(*hit);
    r.flattened = h(mu(*r.witness));
    r.pushed = h(pushforward(h.rule, *r.witness));
  }
  return r;
}

CoseparatorResult verify_coseparator_property(const AlgebraMap& h, std::span<const AffineMap> maps,
                                              const CheckBudget& budget) {
  CoseparatorResult r;
  r.checked = budget.samples;
  std::atomic<std::size_t> infinite{0};
  auto draw = [&](std::size_t idx) {
    auto rng = trial_rng(budget.seed, idx);
    return random_measure(*h.space, rng);
  };
  // Index of the first map that disagrees on P, or maps.size().
  auto first_bad_map = [&](const FinMeasure& p, bool count) {
    Element image = h(p);
    for (std::size_t k = 0; k < maps.size(); ++k) {
      ExtValue lhs = maps[k](image).as_ext();
      ExtValue rhs = integrate(p, [&](const Element& x) { return maps[k](x).as_ext(); });
      if (count && rhs.is_infinite()) infinite.fetch_add(1, std::memory_order_relaxed);
      if (lhs != rhs) return k;
    }
    return maps.size();
  };
  auto hit = first_failure(budget.samples, [&](std::size_t idx) { return first_bad_map(draw(idx), true) != maps.size(); });
  r.infinite_cases = infinite.load();
  if (hit) {
    r.verdict = Verdict::Fail;
    r.measure = draw(*hit);
    const auto& m = maps[first_bad_map(*r.measure, false)];
    r.map_name = m.name;
    r.at_image = m((h)(*r.measure)).as_ext();
    r.expectation = integrate(*r.measure, [&](const Element& x) { return m(x).as_ext(); });
  }
  return r;
}

std::vector<Element> discrete_shadows(const ConvexSpace& space, const Element& e) {
  const auto& c = space.carrier();
  if (std::holds_alternative<ChainCarrier>(c) || std::holds_alternative<TableCarrier>(c)) return {e};
  if (std::holds_alternative<ExtLineCarrier>(c)) return {Element::label(e.as_ext().is_infinite() ? 1 : 0)};
  if (const auto* prod = std::get_if<ProductCarrier>(&c)) {
    std::vector<Element> out;
    for (std::size_t i = 0; i < prod->factors.size(); ++i) {
      auto part = discrete_shadows(*prod->factors[i], e.as_tuple().parts[i]);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (std::holds_alternative<SemidirectCarrier>(c)) return {Element::label(e.as_tagged().branch)};
  return {};
}

SupportResult support_condition_check(const AlgebraMap& h, const CheckBudget& budget) {
  SupportResult r;
  const auto& space = *h.space;

  // Uniform measures on every subset of a small finite carrier, by size.
  std::vector<std::vector<Element>> subsets;
  if (space.is_finite()) {
    auto pts = space.elements();
    if (pts.size() <= 10) {
      const std::size_t n = pts.size();
      for (std::size_t k = 1; k <= n; ++k) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
          std::vector<Element> s;
          for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) s.push_back(pts[i]);
          subsets.push_back(std::move(s));
        } while (std::prev_permutation(pick.begin(), pick.end()));
      }
    }
  }
  auto measure = [&](std::size_t idx) {
    if (idx < subsets.size()) {
      std::vector<FinMeasure::Atom> atoms;
      for (const auto& x : subsets[idx]) atoms.emplace_back(x, make_rational(1, static_cast<long>(subsets[idx].size())));
      return FinMeasure(std::move(atoms));
    }
    auto rng = trial_rng(budget.seed, idx);
    return random_measure(space, rng);
  };
  auto violates = [&](const FinMeasure& p, const Element& image) {
    auto shadow = discrete_shadows(space, image);
    for (std::size_t k = 0; k < shadow.size(); ++k) {
      bool found = std::any_of(p.atoms().begin(), p.atoms().end(),
                               [&](const auto& a) { return discrete_shadows(space, a.first)[k] == shadow[k]; });
      if (!found) return true;
    }
    return false;
  };
  const std::size_t total = subsets.size() + budget.samples;
  r.checked = total;
  auto hit = first_failure(total, [&](std::size_t idx) {
    auto p = measure(idx);
    return violates(p, h(p));
  });
  if (hit) {
    r.verdict = Verdict::Fail;
    r.measure = measure(*hit);
    r.image = h(*r.measure);
  }
  return r;
}

InducedResult induced_structure_check(const AlgebraMap& h, const CheckBudget& budget) {
  InducedResult r;
  r.checked = budget.samples;
  const auto& space = *h.space;
  auto draw = [&](std::size_t idx) {
    auto rng = trial_rng(budget.seed, idx);
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    auto w = random_weights(rng, k);
    std::vector<Element> xs;
    for (std::size_t i = 0; i < k; ++i) xs.push_back(space.sample(rng));
    return std::pair{w, xs};
  };
  auto values = [&](const WeightVector& w, const std::vector<Element>& xs) {
    std::vector<FinMeasure::Atom> atoms;
    for (std::size_t i = 0; i < xs.size(); ++i) atoms.emplace_back(xs[i], w[i]);
    return std::pair{h(FinMeasure(std::move(atoms))), combine(space, w, xs)};
  };
  auto hit = first_failure(budget.samples, [&](std::size_t idx) {
    auto [w, xs] = draw(idx);
    auto [a, b] = values(w, xs);
    return a != b;
  });
  if (hit) {
    auto [w, xs] = draw(*hit);
    auto [a, b] = values(w, xs);
    r.verdict = Verdict::Fail;
    r.points = xs;
    r.weights = w.weights();
    r.algebra_value = a;
    r.native_value = b;
  }
  return r;
}

Verdict AlgebraReport::overall() const {
  if (rejection) return Verdict::Rejected;
  std::vector<Verdict> vs;
  if (unit_law) vs.push_back(unit_law->verdict);
  if (mult_law) vs.push_back(mult_law->verdict);
  if (coseparator_law) vs.push_back(coseparator_law->verdict);
  if (support_condition) vs.push_back(support_condition->verdict);
  if (induced_structure) vs.push_back(induced_structure->verdict);
  vs.push_back(compat.pass ? (compat.exhaustive ? Verdict::Pass : Verdict::SampledPass) : Verdict::Fail);
  if (std::any_of(vs.begin(), vs.end(), [](Verdict v) { return v == Verdict::Fail; })) return Verdict::Fail;
  if (std::any_of(vs.begin(), vs.end(), [](Verdict v) { return v == Verdict::SampledPass; }))
    return Verdict::SampledPass;
  return Verdict::Pass;
}

AlgebraReport algebra_report(const AlgebraMap& h, const ExtMetric& d, const CheckBudget& budget) {
  AlgebraReport r;
  r.space = h.space;
  r.metric = d.name;
  r.provenance = h.provenance;
  r.unit_law = verify_unit_law(h, budget);
  r.mult_law = verify_mult_law(h, budget);
  auto maps = coseparating_family(h.space);
  r.coseparator_law = verify_coseparator_property(h, maps, budget);
  if (h.space->kind() != SpaceKind::Geometric) r.support_condition = support_condition_check(h, budget);
  r.induced_structure = induced_structure_check(h, budget);
  r.compat = compat_check_2pt(*h.space, d, budget.samples, budget.seed);
  return r;
}

AlgebraReport algebra_report(const SpacePtr& space, const ExtMetric& d, const CheckBudget& budget) {
  auto built = build_algebra(space, d, budget.samples, budget.seed);
  if (auto* h = std::get_if<AlgebraMap>(&built)) return algebra_report(*h, d, budget);
  AlgebraReport r;
  r.space = space;
  r.metric = d.name;
  r.rejection = std::get<Rejection>(built);
  r.compat = compat_check_2pt(*space, d, budget.samples, budget.seed);
  return r;
}

CounterexampleReport counterexample_C(const CheckBudget& budget) {
  CounterexampleReport r;
  r.space = make_space_c();
  r.ideals = enumerate_ideals(r.space);
  std::vector<AffineMap> maps;
  for (const auto& ideal : r.ideals) maps.push_back(char_map(ideal));
  r.coseparation = coseparates(maps, r.space, budget.samples, budget.seed);
  const auto metric = discrete_metric();
  r.compat = compat_check_2pt(*r.space, metric, budget.samples, budget.seed);
  // The candidate reads each measure as a formal combination and evaluates it in C.
  SpacePtr c = r.space;
  auto candidate = user_algebra(c, [c](const FinMeasure& p) {
    std::vector<Rational> w;
    std::vector<Element> xs;
    for (const auto& [x, px] : p.atoms()) {
      xs.push_back(x);
      w.push_back(px);
    }
    return combine(*c, WeightVector(std::move(w)), xs);
  });
  r.support = support_condition_check(candidate, budget);
  r.poset = discrete_poset(*r.space);
  r.build = build_algebra(r.space, metric, budget.samples, budget.seed);
  return r;
}

}  // namespace giry
