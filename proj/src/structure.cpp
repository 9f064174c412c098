#include "giry/structure.hpp"

#include <algorithm>
#include <stdexcept>

#include "giry/parallel.hpp"

namespace giry {

std::string_view to_string(PosetWitness::Reason reason) {
  switch (reason) {
    case PosetWitness::Reason::ThirdElement: return "third-element";
    case PosetWitness::Reason::Incomparable: return "incomparable";
    case PosetWitness::Reason::NotTransitive: return "not-transitive";
    case PosetWitness::Reason::NotAntisymmetric: return "not-antisymmetric";
  }
  return "?";
}

namespace {

bool is_p_constant(const ConvexSpace& s, const Element& x, const Element& y, const std::vector<Rational>& grid) {
  Element first = s.combine2(grid.front(), x, y);
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (s.combine2(grid[k], x, y) != first) return false;
  return true;
}

}  // namespace

std::vector<std::size_t> DiscretePoset::ascending() const {
  std::vector<std::size_t> below(elements.size(), 0);
  for (std::size_t j = 0; j < elements.size(); ++j)
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (leq[i][j]) ++below[j];
  std::vector<std::size_t> order(elements.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return below[a] < below[b]; });
  return order;
}

DiscretePoset discrete_poset(const ConvexSpace& space) {
  if (!space.is_finite())
    throw std::invalid_argument("discrete_poset needs a finite carrier ('" + space.id() + "')");
  if (space.kind() != SpaceKind::Discrete)
    throw std::invalid_argument("discrete_poset needs a discrete space ('" + space.id() + "' is " +
                                std::string(to_string(space.kind())) + ")");
  DiscretePoset poset;
  poset.elements = space.elements();
  const auto& es = poset.elements;
  const std::size_t n = es.size();
  const Rational half = make_rational(1, 2);
  const auto& grid = default_p_grid();

  poset.leq.assign(n, std::vector<bool>(n, false));
  std::vector<std::vector<Element>> comb(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_p_constant(space, es[i], es[j], grid))
        throw std::invalid_argument("space '" + space.id() + "' has a p-dependent pair; not discrete");
      comb[i].push_back(space.combine2(half, es[i], es[j]));
      poset.leq[i][j] = comb[i][j] == es[j];
    }
  }

  for (std::size_t i = 0; i < n && !poset.witness; ++i)
    for (std::size_t j = i + 1; j < n && !poset.witness; ++j)
      if (comb[i][j] != es[i] && comb[i][j] != es[j])
        poset.witness = PosetWitness{PosetWitness::Reason::ThirdElement, es[i], es[j], comb[i][j]};

  for (std::size_t i = 0; i < n && !poset.witness; ++i)
    for (std::size_t j = i + 1; j < n && !poset.witness; ++j) {
      if (poset.leq[i][j] && poset.leq[j][i])
        poset.witness = PosetWitness{PosetWitness::Reason::NotAntisymmetric, es[i], es[j], std::nullopt};
      else if (!poset.leq[i][j] && !poset.leq[j][i])
        poset.witness = PosetWitness{PosetWitness::Reason::Incomparable, es[i], es[j], std::nullopt};
    }

  for (std::size_t i = 0; i < n && !poset.witness; ++i)
    for (std::size_t j = 0; j < n && !poset.witness; ++j)
      for (std::size_t k = 0; k < n && !poset.witness; ++k)
        if (poset.leq[i][j] && poset.leq[j][k] && !poset.leq[i][k])
          poset.witness = PosetWitness{PosetWitness::Reason::NotTransitive, es[i], es[k], es[j]};

  poset.is_total_order = !poset.witness.has_value();
  return poset;
}

KindReport classify_kind(const ConvexSpace& space, const std::vector<Rational>& grid) {
  KindReport report;
  const bool finite = space.is_finite();
  const auto points = space.landmarks();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (report.constant_pair && report.varying_pair) break;
      if (is_p_constant(space, points[i], points[j], grid)) {
        if (!report.constant_pair) report.constant_pair = {points[i], points[j]};
      } else if (!report.varying_pair) {
        report.varying_pair = {points[i], points[j]};
      }
    }
  if (finite) {
    report.decided_by = "exhaustive";
    if (report.constant_pair && report.varying_pair)
      report.kind = SpaceKind::Mixed;
    else if (report.varying_pair)
      report.kind = SpaceKind::Geometric;
    else
      report.kind = SpaceKind::Discrete;
  } else {
    report.decided_by = "analytic";
    report.kind = space.kind();
  }
  return report;
}

namespace {

struct Triple {
  Element x, y, z;
  Rational p, q;
};

bool regroup_fails(const ConvexSpace& s, const Triple& t, AxiomReport& out) {
  // p·x + (1-p)·(q·y + (1-q)·z)  versus  r·((p/r)·x + ((1-p)q/r)·y) + (1-r)·z
  Element nested = s.combine2(t.p, t.x, s.combine2(t.q, t.y, t.z));
  Rational a = t.p, b = (1 - t.p) * t.q, c = (1 - t.p) * (1 - t.q);
  Rational r = a + b;
  Element regrouped = s.combine2(r, s.combine2(Rational(a / r), t.x, t.y), t.z);
  if (nested == regrouped) return false;
  out.witness = RegroupingWitness{{t.x, t.y, t.z}, {a, b, c}, nested, regrouped};
  return true;
}

}  // namespace

AxiomReport check_space_axioms(const ConvexSpace& space, std::size_t budget, std::uint64_t seed,
                               const std::vector<Rational>& grid) {
  AxiomReport report;
  const auto points = space.landmarks();
  report.exhaustive = space.is_finite();
  const std::size_t n = points.size();
  const std::size_t g = grid.size();

  for (const auto& x : points) {
    for (const auto& y : points)
      if (space.combine2(1, x, y) != x || space.combine2(0, x, y) != y) {
        report.ok = false;
        report.failed_axiom = "endpoint";
        report.witness = RegroupingWitness{{x, y}, {}, space.combine2(1, x, y), x};
        return report;
      }
    for (const auto& p : grid)
      if (space.combine2(p, x, x) != x) {
        report.ok = false;
        report.failed_axiom = "idempotence";
        report.witness = RegroupingWitness{{x}, {p}, space.combine2(p, x, x), x};
        return report;
      }
  }

  auto decode = [&](std::size_t idx, Triple& t) {
    if (idx < n * n * n * g * g) {
      std::size_t qi = idx % g;
      idx /= g;
      std::size_t pi = idx % g;
      idx /= g;
      std::size_t k = idx % n;
      idx /= n;
      std::size_t j = idx % n;
      std::size_t i = idx / n;
      t = Triple{points[i], points[j], points[k], grid[pi], grid[qi]};
    } else {
      auto rng = trial_rng(seed, idx);
      std::uniform_int_distribution<std::size_t> gp(0, g - 1);
      t = Triple{space.sample(rng), space.sample(rng), space.sample(rng), grid[gp(rng)], grid[gp(rng)]};
    }
  };
  const std::size_t exhaustive_count = n * n * n * g * g;
  const std::size_t total = exhaustive_count + (report.exhaustive ? 0 : budget);
  auto hit = first_failure(total, [&](std::size_t idx) {
    Triple t;
    decode(idx, t);
    AxiomReport scratch;
    return regroup_fails(space, t, scratch);
  });
  if (hit) {
    Triple t;
    decode(*hit, t);
    report.ok = false;
    report.failed_axiom = "regrouping";
    regroup_fails(space, t, report);
  }
  return report;
}

}  // namespace giry
