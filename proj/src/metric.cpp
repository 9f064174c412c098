#include "giry/metric.hpp"

#include <algorithm>
#include <stdexcept>
#include <type_traits>

#include "giry/parallel.hpp"

namespace giry {

namespace {

Rational abs_diff(const Rational& a, const Rational& b) { return a > b ? Rational(a - b) : Rational(b - a); }

}  // namespace

ExtMetric l1_metric() {
  return {"l1", [](const Element& x, const Element& y) {
            const auto& a = x.as_point().coords;
            const auto& b = y.as_point().coords;
            Rational s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s += abs_diff(a[i], b[i]);
            return ExtValue(s);
          }, {}};
}

ExtMetric linf_metric() {
  return {"linf", [](const Element& x, const Element& y) {
            const auto& a = x.as_point().coords;
            const auto& b = y.as_point().coords;
            Rational m = 0;
            for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, abs_diff(a[i], b[i]));
            return ExtValue(m);
          }, {}};
}

ExtMetric discrete_metric() {
  return {"discrete", [](const Element& x, const Element& y) { return ExtValue(x == y ? 0L : 1L); }, {}};
}

ExtMetric discrete_ext_metric() {
  return {"discrete-ext",
          [](const Element& x, const Element& y) { return x == y ? ExtValue(0L) : ExtValue::infinity(); }, {}};
}

ExtMetric order_metric() {
  return {"order", [](const Element& x, const Element& y) {
            auto i = static_cast<long>(x.as_label()), j = static_cast<long>(y.as_label());
            return ExtValue(std::abs(i - j));
          }, {}};
}

ExtMetric ext_abs_metric() {
  return {"ext", [](const Element& x, const Element& y) {
            const auto& a = x.as_ext();
            const auto& b = y.as_ext();
            if (a.is_infinite() && b.is_infinite()) return ExtValue(0L);
            if (a.is_infinite() || b.is_infinite()) return ExtValue::infinity();
            return ExtValue(abs_diff(a.value(), b.value()));
          }, {}};
}

ExtMetric matrix_metric(std::vector<std::vector<ExtValue>> table) {
  for (const auto& row : table)
    if (row.size() != table.size()) throw std::invalid_argument("metric table must be square");
  return {"matrix", [table = std::move(table)](const Element& x, const Element& y) {
            return table.at(x.as_label()).at(y.as_label());
          }, {}};
}

ExtMetric sum_metric(std::vector<ExtMetric> factors) {
  auto parts = factors;
  return {"sum", [factors = std::move(factors)](const Element& x, const Element& y) {
            ExtValue total(0L);
            for (std::size_t i = 0; i < factors.size(); ++i)
              total += factors[i](x.as_tuple().parts[i], y.as_tuple().parts[i]);
            return total;
          }, std::move(parts)};
}

ExtMetric branch_metric(std::vector<ExtMetric> branches) {
  auto parts = branches;
  return {"branch", [branches = std::move(branches)](const Element& x, const Element& y) {
            const auto& a = x.as_tagged();
            const auto& b = y.as_tagged();
            if (a.branch != b.branch) return ExtValue::infinity();
            return branches[a.branch](*a.point, *b.point);
          }, std::move(parts)};
}

ExtMetric default_metric(const ConvexSpace& space) {
  const auto& c = space.carrier();
  if (std::holds_alternative<BoxCarrier>(c) || std::holds_alternative<SimplexCarrier>(c)) return l1_metric();
  if (std::holds_alternative<ExtLineCarrier>(c)) return ext_abs_metric();
  if (std::holds_alternative<ChainCarrier>(c) || std::holds_alternative<TableCarrier>(c)) return discrete_metric();
  if (const auto* p = std::get_if<ProductCarrier>(&c)) {
    std::vector<ExtMetric> parts;
    for (const auto& f : p->factors) parts.push_back(default_metric(*f));
    return sum_metric(std::move(parts));
  }
  const auto& sd = std::get<SemidirectCarrier>(c);
  std::vector<ExtMetric> parts;
  for (const auto& comp : sd.components) parts.push_back(default_metric(*comp));
  return branch_metric(std::move(parts));
}

ExtMetric metric_by_name(std::string_view name, const ConvexSpace& space) {
  const auto& c = space.carrier();
  const bool vector = std::holds_alternative<BoxCarrier>(c) || std::holds_alternative<SimplexCarrier>(c);
  const bool labels = std::holds_alternative<ChainCarrier>(c) || std::holds_alternative<TableCarrier>(c);
  auto require = [&](bool ok) {
    if (!ok) throw std::invalid_argument("metric '" + std::string(name) + "' does not fit space '" + space.id() + "'");
  };
  if (name == "l1") return require(vector), l1_metric();
  if (name == "linf") return require(vector), linf_metric();
  if (name == "ext") return require(std::holds_alternative<ExtLineCarrier>(c)), ext_abs_metric();
  if (name == "order") return require(labels), order_metric();
  if (name == "discrete") return discrete_metric();
  if (name == "discrete-ext") return discrete_ext_metric();
  if (name == "sum") return require(std::holds_alternative<ProductCarrier>(c)), default_metric(space);
  if (name == "branch") return require(std::holds_alternative<SemidirectCarrier>(c)), default_metric(space);
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

MetricAxiomResult check_metric_axioms(const ConvexSpace& space, const ExtMetric& d, std::size_t budget,
                                      std::uint64_t seed) {
  MetricAxiomResult r;
  auto fail = [&](std::string what, std::vector<Element> w) {
    r.ok = false;
    r.failed = std::move(what);
    r.witness = std::move(w);
  };
  auto check = [&](const Element& x, const Element& y, const Element& z) {
    if (d(x, x) != ExtValue(0L)) return fail("zero-diagonal", {x}), false;
    if (d(x, y) < ExtValue(0L)) return fail("nonnegativity", {x, y}), false;
    if (d(x, y) != d(y, x)) return fail("symmetry", {x, y}), false;
    if (d(x, z) > d(x, y) + d(y, z)) return fail("triangle", {x, y, z}), false;
    return true;
  };
  const auto pts = space.landmarks();
  for (const auto& x : pts)
    for (const auto& y : pts)
      for (const auto& z : pts)
        if (!check(x, y, z)) return r;
  if (space.is_finite()) return r;
  for (std::size_t k = 0; k < budget; ++k) {
    auto rng = trial_rng(seed, k);
    Element x = space.sample(rng), y = space.sample(rng), z = space.sample(rng);
    if (!check(x, y, z)) return r;
  }
  return r;
}

namespace {

/// Finite carriers: combination indices per grid weight and weighted
/// distances, so one tuple costs a lookup and an addition.
struct FiniteTables {
  std::size_t n = 0;
  std::vector<std::size_t> comb;      // [(k*n + a)*n + b]
  std::vector<ExtValue> dist, pd, qd;  // dist[a*n + b]; pd, qd like comb
};

FiniteTables finite_tables(const ConvexSpace& space, const ExtMetric& d, const std::vector<Element>& pts,
                           const std::vector<Rational>& grid) {
  FiniteTables t;
  const std::size_t n = pts.size(), g = grid.size();
  t.n = n;
  t.dist.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t.dist[a * n + b] = d(pts[a], pts[b]);
  t.comb.resize(g * n * n);
  t.pd.resize(g * n * n);
  t.qd.resize(g * n * n);
  for (std::size_t k = 0; k < g; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const std::size_t i = (k * n + a) * n + b;
        auto c = space.combine2(grid[k], pts[a], pts[b]);
        auto it = std::find(pts.begin(), pts.end(), c);
        if (it == pts.end()) throw std::logic_error("finite carrier not closed under combination");
        t.comb[i] = static_cast<std::size_t>(it - pts.begin());
        t.pd[i] = t.dist[a * n + b].scale(grid[k]);
        t.qd[i] = t.dist[a * n + b].scale(Rational(1 - grid[k]));
      }
  return t;
}

/// Shared driver: enumerate `arity`-tuples of landmarks with every grid
/// weight, then random tuples on infinite carriers. `fast`, when given,
/// decides an enumerated index from (grid index, tuple indices).
template <class Eval, class Fast>
CompatResult compat_driver(const ConvexSpace& space, const std::vector<Element>& pts, std::size_t arity,
                           std::size_t budget, std::uint64_t seed, const std::vector<Rational>& grid, Eval&& eval,
                           Fast&& fast) {
  CompatResult result;
  const std::size_t n = pts.size(), g = grid.size();
  result.exhaustive = space.is_finite();
  std::size_t tuples = 1;
  for (std::size_t i = 0; i < arity; ++i) tuples *= n;
  // On infinite carriers the landmark sweep is a head start only; skip it
  // when it would dwarf the sampling budget.
  const std::size_t enumerated = (result.exhaustive || tuples <= 4096) ? tuples * g : 0;
  const std::size_t total = enumerated + (result.exhaustive ? 0 : budget);
  result.checked = total;

  // Grid weight fastest, then tuples lexicographically (first point slowest).
  auto split = [&](std::size_t idx, std::size_t* tuple) {
    const std::size_t k = idx % g;
    idx /= g;
    for (std::size_t i = arity; i-- > 0;) {
      tuple[i] = idx % n;
      idx /= n;
    }
    return k;
  };
  auto decode = [&](std::size_t idx) {
    std::vector<Element> xs;
    Rational p;
    if (idx < enumerated) {
      std::size_t tuple[4];
      p = grid[split(idx, tuple)];
      for (std::size_t i = 0; i < arity; ++i) xs.push_back(pts[tuple[i]]);
    } else {
      auto rng = trial_rng(seed, idx);
      std::uniform_int_distribution<std::size_t> pick(0, g - 1);
      p = grid[pick(rng)];
      for (std::size_t i = 0; i < arity; ++i) xs.push_back(space.sample(rng));
    }
    return std::pair{p, xs};
  };
  auto hit = first_failure(total, [&](std::size_t idx) {
    if constexpr (!std::is_same_v<std::decay_t<Fast>, std::nullptr_t>) {
      if (idx < enumerated) {
        std::size_t tuple[4];
        const std::size_t k = split(idx, tuple);
        return fast(k, tuple);
      }
    }
    auto [p, xs] = decode(idx);
    auto [lhs, rhs] = eval(p, xs);
    return lhs > rhs;
  });
  if (hit) {
    auto [p, xs] = decode(*hit);
    auto [lhs, rhs] = eval(p, xs);
    result.pass = false;
    result.witness = CompatWitness{p, xs, lhs, rhs};
  }
  return result;
}

constexpr std::size_t kTableLimit = 64;

}  // namespace

CompatResult compat_check_2pt(const ConvexSpace& space, const ExtMetric& d, std::size_t budget, std::uint64_t seed,
                              const std::vector<Rational>& grid) {
  const auto pts = space.landmarks();
  auto eval = [&](const Rational& p, const std::vector<Element>& v) {
    const auto &x = v[0], &y = v[1], &z = v[2];
    return std::pair{d(space.combine2(p, x, z), space.combine2(p, y, z)), d(x, y).scale(p)};
  };
  if (space.is_finite() && pts.size() <= kTableLimit) {
    const auto t = finite_tables(space, d, pts, grid);
    const std::size_t n = t.n;
    return compat_driver(space, pts, 3, budget, seed, grid, eval, [&](std::size_t k, const std::size_t* v) {
      const std::size_t xz = t.comb[(k * n + v[0]) * n + v[2]], yz = t.comb[(k * n + v[1]) * n + v[2]];
      return t.dist[xz * n + yz] > t.pd[(k * n + v[0]) * n + v[1]];
    });
  }
  return compat_driver(space, pts, 3, budget, seed, grid, eval, nullptr);
}

CompatResult compat_check_4pt(const ConvexSpace& space, const ExtMetric& d, std::size_t budget, std::uint64_t seed,
                              const std::vector<Rational>& grid) {
  const auto pts = space.landmarks();
  auto eval = [&](const Rational& p, const std::vector<Element>& v) {
    const auto &x = v[0], &x2 = v[1], &y = v[2], &y2 = v[3];
    return std::pair{d(space.combine2(p, x, x2), space.combine2(p, y, y2)),
                     d(x, y).scale(p) + d(x2, y2).scale(Rational(1 - p))};
  };
  if (space.is_finite() && pts.size() <= kTableLimit) {
    const auto t = finite_tables(space, d, pts, grid);
    const std::size_t n = t.n;
    return compat_driver(space, pts, 4, budget, seed, grid, eval, [&](std::size_t k, const std::size_t* v) {
      const std::size_t a = t.comb[(k * n + v[0]) * n + v[1]], b = t.comb[(k * n + v[2]) * n + v[3]];
      const ExtValue& lhs = t.dist[a * n + b];
      const ExtValue& p_part = t.pd[(k * n + v[0]) * n + v[2]];
      const ExtValue& q_part = t.qd[(k * n + v[1]) * n + v[3]];
      // Skip the addition when one part alone already covers lhs.
      if (lhs <= p_part || lhs <= q_part) return false;
      return lhs > p_part + q_part;
    });
  }
  return compat_driver(space, pts, 4, budget, seed, grid, eval, nullptr);
}

EquivReport equiv_check(const ConvexSpace& space, const ExtMetric& d, std::size_t budget, std::uint64_t seed,
                        const std::vector<Rational>& grid) {
  return EquivReport{compat_check_2pt(space, d, budget, seed, grid), compat_check_4pt(space, d, budget, seed, grid)};
}

WeightVector random_weights(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_int_distribution<long> part(1, 9);
  std::vector<long> parts(atoms);
  for (auto& p : parts) p = part(rng);
  return WeightVector::proportional(parts);
}

DiagramResult coupling_bound_check(const ConvexSpace& space, const ExtMetric& d, std::size_t budget,
                                   std::uint64_t seed) {
  DiagramResult result;
  result.checked = budget;
  auto draw = [&](std::size_t idx) {
    auto rng = trial_rng(seed, idx);
    std::uniform_int_distribution<std::size_t> size(1, 5);
    std::size_t k = size(rng);
    DiagramWitness w;
    w.weights = random_weights(rng, k).weights();
    for (std::size_t i = 0; i < k; ++i) {
      w.xs.push_back(space.sample(rng));
      w.ys.push_back(space.sample(rng));
    }
    WeightVector wv(w.weights);
    w.coupling_cost = ExtValue(0L);
    for (std::size_t i = 0; i < k; ++i) w.coupling_cost += d(w.xs[i], w.ys[i]).scale(w.weights[i]);
    w.combined_distance = d(combine(space, wv, w.xs), combine(space, wv, w.ys));
    return w;
  };
  auto hit = first_failure(budget, [&](std::size_t idx) {
    auto w = draw(idx);
    return w.combined_distance > w.coupling_cost;
  });
  if (hit) {
    result.pass = false;
    result.witness = draw(*hit);
  }
  return result;
}

}  // namespace giry
