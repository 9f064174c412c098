#include "giry/affine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "giry/parallel.hpp"

namespace giry {

SpacePtr extended_reals() {
  static const SpacePtr line = make_ext_line("R-inf-line", std::nullopt, std::nullopt);
  return line;
}

AffinityResult is_affine(const AffineMap& m, std::size_t budget, std::uint64_t seed,
                         const std::vector<Rational>& grid) {
  AffinityResult result;
  const auto points = m.domain->landmarks();
  const std::size_t n = points.size(), g = grid.size();
  const std::size_t enumerated = n * n * g;
  result.exhaustive = m.domain->is_finite();
  const std::size_t total = enumerated + (result.exhaustive ? 0 : budget);
  result.checked = total;

  auto decode = [&](std::size_t idx) {
    if (idx < enumerated)
      return std::tuple{grid[idx % g], points[idx / g / n], points[(idx / g) % n]};
    auto rng = trial_rng(seed, idx);
    std::uniform_int_distribution<std::size_t> pick(0, g - 1);
    Rational p = grid[pick(rng)];
    Element x = m.domain->sample(rng);
    Element y = m.domain->sample(rng);
    return std::tuple{p, x, y};
  };
  auto evaluate = [&](const Rational& p, const Element& x, const Element& y) {
    return std::pair{m(m.domain->combine2(p, x, y)), m.codomain->combine2(p, m(x), m(y))};
  };

  auto hit = first_failure(total, [&](std::size_t idx) {
    auto [p, x, y] = decode(idx);
    auto [lhs, rhs] = evaluate(p, x, y);
    return lhs != rhs;
  });
  if (hit) {
    auto [p, x, y] = decode(*hit);
    auto [lhs, rhs] = evaluate(p, x, y);
    result.affine = false;
    result.witness = AffinityWitness{p, x, y, lhs, rhs};
  }
  return result;
}

bool Ideal::contains(const Element& e) const {
  return std::binary_search(members.begin(), members.end(), e);
}

bool is_ideal(const ConvexSpace& space, std::span<const Element> members, const std::vector<Rational>& grid) {
  const auto carrier = space.elements();
  if (members.empty() || members.size() >= carrier.size()) return false;
  auto inside = [&](const Element& e) { return std::find(members.begin(), members.end(), e) != members.end(); };
  for (const auto& a : members) {
    if (!space.contains(a)) return false;
    for (const auto& b : carrier)
      for (const auto& p : grid)
        if (!inside(space.combine2(p, a, b))) return false;
  }
  return true;
}

namespace {

using Mask = std::vector<bool>;

Mask principal_closure(const ConvexSpace& space, const std::vector<Element>& carrier, std::size_t seed_index,
                       const std::vector<Rational>& grid) {
  Mask mask(carrier.size(), false);
  mask[seed_index] = true;
  std::vector<std::size_t> frontier{seed_index};
  while (!frontier.empty()) {
    std::size_t a = frontier.back();
    frontier.pop_back();
    for (const auto& b : carrier)
      for (const auto& p : grid) {
        auto c = space.combine2(p, carrier[a], b);
        auto k = static_cast<std::size_t>(std::find(carrier.begin(), carrier.end(), c) - carrier.begin());
        if (k < carrier.size() && !mask[k]) {
          mask[k] = true;
          frontier.push_back(k);
        }
      }
  }
  return mask;
}

Mask mask_union(Mask a, const Mask& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
  return a;
}

}  // namespace

std::vector<Ideal> enumerate_ideals(const SpacePtr& space, const std::vector<Rational>& grid) {
  if (!space->is_finite()) throw std::invalid_argument("enumerate_ideals needs a finite carrier");
  const auto carrier = space->elements();
  const std::size_t n = carrier.size();

  std::vector<Mask> principal;
  for (std::size_t i = 0; i < n; ++i) principal.push_back(principal_closure(*space, carrier, i, grid));

  // Every ideal is the union of the principal ideals of its members.
  std::set<Mask> seen(principal.begin(), principal.end());
  std::vector<Mask> queue(seen.begin(), seen.end());
  while (!queue.empty()) {
    Mask cur = std::move(queue.back());
    queue.pop_back();
    for (const auto& pr : principal) {
      Mask next = mask_union(cur, pr);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }

  std::vector<Ideal> out;
  for (const auto& mask : seen) {
    if (std::all_of(mask.begin(), mask.end(), [](bool b) { return b; })) continue;
    Ideal ideal{space, {}};
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) ideal.members.push_back(carrier[i]);
    std::sort(ideal.members.begin(), ideal.members.end());
    out.push_back(std::move(ideal));
  }
  std::sort(out.begin(), out.end(), [](const Ideal& a, const Ideal& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return out;
}

AffineMap char_map(const Ideal& ideal) {
  if (!ideal.space) throw std::invalid_argument("ideal without a space");
  if (ideal.members.empty()) throw std::invalid_argument("an ideal must be nonempty");
  if (!is_ideal(*ideal.space, ideal.members))
    throw std::invalid_argument("not a proper ideal of '" + ideal.space->id() + "'");
  std::string name = "char{";
  for (std::size_t i = 0; i < ideal.members.size(); ++i)
    name += (i ? "," : "") + ideal.space->format(ideal.members[i]);
  name += "}";
  auto members = ideal.members;
  return AffineMap{name, ideal.space, extended_reals(), [members](const Element& x) {
                     return std::binary_search(members.begin(), members.end(), x) ? Element::infinity()
                                                                                   : Element::real(0);
                   }};
}

std::vector<Element> preimage(const AffineMap& m, const Ideal& target) {
  std::vector<Element> out;
  for (const auto& x : m.domain->elements())
    if (target.contains(m(x))) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

CoseparationResult coseparates(std::span<const AffineMap> maps, const SpacePtr& space, std::size_t budget,
                               std::uint64_t seed) {
  CoseparationResult result;
  result.exhaustive = space->is_finite();
  auto separated = [&](const Element& a, const Element& b) {
    if (a == b) return true;
    return std::any_of(maps.begin(), maps.end(), [&](const AffineMap& m) { return m(a) != m(b); });
  };
  const auto points = space->landmarks();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (!separated(points[i], points[j])) {
        result.separates = false;
        result.unseparated = std::pair{points[i], points[j]};
        return result;
      }
  if (result.exhaustive) return result;
  for (std::size_t k = 0; k < budget; ++k) {
    auto rng = trial_rng(seed, k);
    Element a = space->sample(rng), b = space->sample(rng);
    if (!separated(a, b)) {
      result.separates = false;
      result.unseparated = std::pair{a, b};
      return result;
    }
  }
  return result;
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  auto f = outer.rule, g = inner.rule;
  return AffineMap{outer.name + "∘" + inner.name, inner.domain, outer.codomain,
                   [f, g](const Element& x) { return f(g(x)); }};
}

AffineMap projection(const SpacePtr& product, std::size_t factor) {
  const auto* pc = product->as<ProductCarrier>();
  if (!pc || factor >= pc->factors.size()) throw std::invalid_argument("projection needs a product factor index");
  return AffineMap{"pi" + std::to_string(factor + 1), product, pc->factors[factor],
                   [factor](const Element& x) { return x.as_tuple().parts[factor]; }};
}

namespace {

std::vector<AffineMap> semidirect_family(const SpacePtr& space, const SemidirectCarrier& sd) {
  std::vector<AffineMap> out;
  const auto& base = *sd.base;
  const std::size_t branches = sd.components.size();
  // below[c][b]: branch c lies at or under branch b.
  std::vector<std::vector<bool>> below(branches, std::vector<bool>(branches));
  for (std::size_t c = 0; c < branches; ++c)
    for (std::size_t b = 0; b < branches; ++b)
      below[c][b] = base.combine2(make_rational(1, 2), Element::label(c), Element::label(b)).as_label() == b;

  for (std::size_t b = 0; b < branches; ++b) {
    std::vector<AffineMap> inner = coseparating_family(sd.components[b]);
    inner.push_back(AffineMap{"0", sd.components[b], extended_reals(),
                              [](const Element&) { return Element::real(0); }});
    const std::string branch = base.format(Element::label(b));
    for (auto& g : inner) {
      auto rule = g.rule;
      auto lift = [space, below, b, rule](const Element& x) {
        const auto& t = x.as_tagged();
        if (!below[t.branch][b]) return Element::infinity();
        return rule(space->transition(t.branch, b, *t.point));
      };
      out.push_back(AffineMap{g.name + "@" + branch, space, extended_reals(), lift});
    }
  }
  return out;
}

}  // namespace

std::vector<AffineMap> coseparating_family(const SpacePtr& space) {
  const auto& carrier = space->carrier();
  std::vector<AffineMap> out;
  auto coordinate_maps = [&](std::size_t dims) {
    for (std::size_t i = 0; i < dims; ++i) {
      std::string x = "x" + std::to_string(i + 1);
      out.push_back(AffineMap{x, space, extended_reals(),
                              [i](const Element& e) { return Element::real(e.as_point().coords[i]); }});
      out.push_back(AffineMap{"1-" + x, space, extended_reals(),
                              [i](const Element& e) { return Element::real(1 - e.as_point().coords[i]); }});
    }
  };
  if (const auto* box = std::get_if<BoxCarrier>(&carrier)) {
    coordinate_maps(box->lo.size());
  } else if (const auto* simplex = std::get_if<SimplexCarrier>(&carrier)) {
    coordinate_maps(simplex->vertices);
  } else if (std::holds_alternative<ExtLineCarrier>(carrier)) {
    out.push_back(AffineMap{"id", space, extended_reals(), [](const Element& e) { return e; }});
    out.push_back(AffineMap{"char{inf}", space, extended_reals(), [](const Element& e) {
                              return e.as_ext().is_infinite() ? Element::infinity() : Element::real(0);
                            }});
  } else if (std::holds_alternative<ChainCarrier>(carrier) || std::holds_alternative<TableCarrier>(carrier)) {
    for (const auto& ideal : enumerate_ideals(space)) out.push_back(char_map(ideal));
  } else if (const auto* prod = std::get_if<ProductCarrier>(&carrier)) {
    for (std::size_t f = 0; f < prod->factors.size(); ++f) {
      auto pi = projection(space, f);
      for (const auto& g : coseparating_family(prod->factors[f])) out.push_back(compose(g, pi));
    }
  } else if (const auto* sd = std::get_if<SemidirectCarrier>(&carrier)) {
    out = semidirect_family(space, *sd);
  }
  return out;
}

}  // namespace giry
