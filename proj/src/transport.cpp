#include "giry/transport.hpp"

#include <algorithm>
#include <stdexcept>

#include "giry/parallel.hpp"
#include "giry/random.hpp"

namespace giry {

FinMeasure Coupling::joint() const {
  std::vector<FinMeasure::Atom> atoms;
  for (const auto& c : cells)
    atoms.emplace_back(Element::tuple({left.atoms()[c.i].first, right.atoms()[c.j].first}), c.mass);
  return FinMeasure(std::move(atoms));
}

bool Coupling::marginals_ok() const {
  std::vector<Rational> rows(left.size(), Rational(0)), cols(right.size(), Rational(0));
  for (const auto& c : cells) {
    if (c.i >= rows.size() || c.j >= cols.size() || sgn(c.mass) < 0) return false;
    rows[c.i] += c.mass;
    cols[c.j] += c.mass;
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i] != left.atoms()[i].second) return false;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (cols[j] != right.atoms()[j].second) return false;
  return true;
}

ExtValue Coupling::cost(const ExtMetric& d) const {
  ExtValue total(0L);
  for (const auto& c : cells) total += d(left.atoms()[c.i].first, right.atoms()[c.j].first).scale(c.mass);
  return total;
}

Coupling independent_coupling(const FinMeasure& p, const FinMeasure& q) {
  Coupling c{p, q, {}};
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      c.cells.push_back({i, j, Rational(p.atoms()[i].second * q.atoms()[j].second)});
  return c;
}

std::string_view to_string(TransportMethod m) { return m == TransportMethod::Brute ? "brute" : "lp"; }

namespace {

/// (mass routed over infinite distances, finite cost), compared lexicographically.
struct LexCost {
  Rational inf = 0, fin = 0;

  LexCost operator+(const LexCost& o) const { return {inf + o.inf, fin + o.fin}; }
  LexCost operator-(const LexCost& o) const { return {inf - o.inf, fin - o.fin}; }
  bool operator<(const LexCost& o) const { return inf != o.inf ? inf < o.inf : fin < o.fin; }
  bool negative() const { return sgn(inf) != 0 ? sgn(inf) < 0 : sgn(fin) < 0; }
};

struct Problem {
  std::size_t n = 0, m = 0;
  std::vector<Rational> supply, demand;
  /// Per-unit cost of cell (i, j), row-major.
  std::vector<LexCost> cost;
  std::vector<ExtValue> distance;

  Problem(const FinMeasure& p, const FinMeasure& q, const ExtMetric& d) : n(p.size()), m(q.size()) {
    for (const auto& a : p.atoms()) supply.push_back(a.second);
    for (const auto& a : q.atoms()) demand.push_back(a.second);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        ExtValue v = d(p.atoms()[i].first, q.atoms()[j].first);
        if (v < ExtValue(0L)) throw std::invalid_argument("metric '" + d.name + "' returned a negative distance");
        cost.push_back(v.is_infinite() ? LexCost{1, 0} : LexCost{0, v.value()});
        distance.push_back(std::move(v));
      }
  }
};

struct Flow {
  std::size_t i, j;
  Rational mass;
};

TransportResult finish(const FinMeasure& p, const FinMeasure& q, const Problem& pr, const std::vector<Flow>& flows,
                       TransportMethod method, std::size_t pivots) {
  TransportResult r;
  r.method = method;
  r.pivots = pivots;
  Rational infinite_mass = 0;
  Rational finite = 0;
  for (const auto& f : flows) {
    const auto& dist = pr.distance[f.i * pr.m + f.j];
    if (dist.is_infinite())
      infinite_mass += f.mass;
    else
      finite += f.mass * dist.value();
  }
  if (sgn(infinite_mass) > 0) {
    r.cost = ExtValue::infinity();
    r.plan = independent_coupling(p, q);
    return r;
  }
  r.cost = finite;
  r.plan = Coupling{p, q, {}};
  for (const auto& f : flows)
    if (sgn(f.mass) > 0) r.plan.cells.push_back({f.i, f.j, f.mass});
  std::sort(r.plan.cells.begin(), r.plan.cells.end(),
            [](const auto& a, const auto& b) { return std::pair{a.i, a.j} < std::pair{b.i, b.j}; });
  return r;
}

/// Cell indices of the tree path from column node `col` to row node `row`,
/// in order starting at the column. Rows are nodes 0..n-1, columns n..n+m-1.
std::vector<std::size_t> tree_path(const Problem& pr, const std::vector<Flow>& basis, std::size_t row,
                                   std::size_t col) {
  const std::size_t nodes = pr.n + pr.m;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nodes);  // (neighbour, basis index)
  for (std::size_t b = 0; b < basis.size(); ++b) {
    adj[basis[b].i].push_back({pr.n + basis[b].j, b});
    adj[pr.n + basis[b].j].push_back({basis[b].i, b});
  }
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> via(nodes, none), prev(nodes, none);
  std::vector<std::size_t> queue{pr.n + col};
  std::vector<bool> seen(nodes, false);
  seen[pr.n + col] = true;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    std::size_t u = queue[h];
    for (auto [v, b] : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        via[v] = b;
        prev[v] = u;
        queue.push_back(v);
      }
  }
  if (!seen[row]) throw std::logic_error("transport basis is not a spanning tree");
  std::vector<std::size_t> path;
  for (std::size_t v = row; v != pr.n + col; v = prev[v]) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TransportResult wasserstein(const FinMeasure& p, const FinMeasure& q, const ExtMetric& d) {
  if (p.size() > 64 || q.size() > 64) throw std::invalid_argument("transport supports at most 64 atoms per side");
  Problem pr(p, q, d);
  const std::size_t n = pr.n, m = pr.m;

  // Northwest-corner start: a staircase with exactly n + m - 1 basic cells.
  std::vector<Flow> basis;
  {
    auto ra = pr.supply;
    auto rb = pr.demand;
    std::size_t i = 0, j = 0;
    while (true) {
      Rational x = std::min(ra[i], rb[j]);
      basis.push_back({i, j, x});
      ra[i] -= x;
      rb[j] -= x;
      if (i == n - 1 && j == m - 1) break;
      if (sgn(ra[i]) == 0 && i < n - 1)
        ++i;
      else
        ++j;
    }
  }

  std::vector<bool> is_basic(n * m, false);
  for (const auto& b : basis) is_basic[b.i * m + b.j] = true;

  std::size_t pivots = 0;
  const std::size_t pivot_limit = 1000000;
  std::vector<LexCost> u(n), v(m);
  while (true) {
    // Potentials from u_0 = 0 across the basis tree.
    std::vector<bool> row_set(n, false), col_set(m, false);
    row_set[0] = true;
    u[0] = LexCost{};
    for (std::size_t settled = 1; settled < n + m;) {
      std::size_t before = settled;
      for (const auto& b : basis) {
        const auto& c = pr.cost[b.i * m + b.j];
        if (row_set[b.i] && !col_set[b.j]) {
          v[b.j] = c - u[b.i];
          col_set[b.j] = true;
          ++settled;
        } else if (!row_set[b.i] && col_set[b.j]) {
          u[b.i] = c - v[b.j];
          row_set[b.i] = true;
          ++settled;
        }
      }
      if (settled == before) throw std::logic_error("transport basis is disconnected");
    }

    // Bland: lowest-index cell with negative reduced cost enters.
    std::optional<std::size_t> entering;
    for (std::size_t k = 0; k < n * m && !entering; ++k) {
      if (is_basic[k]) continue;
      if ((pr.cost[k] - u[k / m] - v[k % m]).negative()) entering = k;
    }
    if (!entering) break;
    if (++pivots > pivot_limit) throw std::logic_error("transport simplex exceeded its pivot limit");

    const std::size_t ei = *entering / m, ej = *entering % m;
    auto path = tree_path(pr, basis, ei, ej);
    // Along the cycle, cells at odd positions from the column lose mass.
    std::optional<std::size_t> leaving;
    Rational theta;
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const auto& b = basis[path[t]];
      std::size_t idx = b.i * m + b.j;
      if (!leaving || b.mass < theta ||
          (b.mass == theta && idx < basis[*leaving].i * m + basis[*leaving].j)) {
        leaving = path[t];
        theta = b.mass;
      }
    }
    for (std::size_t t = 0; t < path.size(); ++t) {
      if (t % 2 == 0)
        basis[path[t]].mass -= theta;
      else
        basis[path[t]].mass += theta;
    }
    is_basic[basis[*leaving].i * m + basis[*leaving].j] = false;
    basis[*leaving] = Flow{ei, ej, theta};
    is_basic[*entering] = true;
  }
  return finish(p, q, pr, basis, TransportMethod::NetworkSimplex, pivots);
}

TransportResult brute_force_wasserstein(const FinMeasure& p, const FinMeasure& q, const ExtMetric& d) {
  if (p.size() > 4 || q.size() > 4) throw std::invalid_argument("brute-force transport supports at most 4 atoms per side");
  Problem pr(p, q, d);
  const std::size_t n = pr.n, m = pr.m, cells = n * m, k = n + m - 1;

  std::optional<std::vector<Flow>> best;
  LexCost best_cost;
  std::vector<std::size_t> chosen;

  // Solves the flows on a spanning tree by peeling leaves; nullopt if any is negative.
  auto solve_tree = [&]() -> std::optional<std::vector<Flow>> {
    std::vector<Rational> rest(n + m);
    for (std::size_t i = 0; i < n; ++i) rest[i] = pr.supply[i];
    for (std::size_t j = 0; j < m; ++j) rest[n + j] = pr.demand[j];
    std::vector<std::size_t> degree(n + m, 0);
    for (auto c : chosen) {
      ++degree[c / m];
      ++degree[n + c % m];
    }
    std::vector<bool> done(chosen.size(), false);
    std::vector<Flow> flows(chosen.size());
    for (std::size_t solved = 0; solved < chosen.size(); ++solved) {
      bool progressed = false;
      for (std::size_t e = 0; e < chosen.size() && !progressed; ++e) {
        if (done[e]) continue;
        std::size_t r = chosen[e] / m, c = n + chosen[e] % m;
        std::size_t leaf = degree[r] == 1 ? r : (degree[c] == 1 ? c : n + m);
        if (leaf == n + m) continue;
        std::size_t other = leaf == r ? c : r;
        Rational x = rest[leaf];
        rest[leaf] = 0;
        rest[other] -= x;
        --degree[r];
        --degree[c];
        done[e] = true;
        flows[e] = Flow{chosen[e] / m, chosen[e] % m, x};
        progressed = true;
      }
      if (!progressed) return std::nullopt;
    }
    for (const auto& f : flows)
      if (sgn(f.mass) < 0) return std::nullopt;
    return flows;
  };

  // Union-find over row/column nodes, rebuilt per prefix (tiny sizes).
  auto acyclic = [&]() {
    std::vector<std::size_t> parent(n + m);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto c : chosen) {
      std::size_t a = find(c / m), b = find(n + c % m);
      if (a == b) return false;
      parent[a] = b;
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t next) -> void {
    if (chosen.size() == k) {
      auto flows = solve_tree();
      if (!flows) return;
      LexCost total;
      for (const auto& f : *flows) {
        const auto& c = pr.cost[f.i * m + f.j];
        total = total + LexCost{Rational(c.inf * f.mass), Rational(c.fin * f.mass)};
      }
      if (!best || total < best_cost) {
        best = std::move(flows);
        best_cost = total;
      }
      return;
    }
    for (std::size_t c = next; c + (k - chosen.size()) <= cells; ++c) {
      chosen.push_back(c);
      if (acyclic()) self(self, c + 1);
      chosen.pop_back();
    }
  };
  search(search, 0);
  if (!best) throw std::logic_error("transport polytope has no vertex");
  return finish(p, q, pr, *best, TransportMethod::Brute, 0);
}

LipschitzResult lipschitz_check(const SpacePtr& space, const std::function<Element(const FinMeasure&)>& h,
                                const ExtMetric& d, std::size_t budget, std::uint64_t seed) {
  LipschitzResult result;
  result.checked = budget;
  auto draw = [&](std::size_t idx) {
    auto rng = trial_rng(seed, idx);
    FinMeasure p = random_measure(*space, rng);
    FinMeasure q = random_measure(*space, rng);
    Element hp = h(p), hq = h(q);
    ExtValue lhs = d(hp, hq);
    ExtValue rhs = wasserstein(p, q, d).cost;
    return LipschitzWitness{std::move(p), std::move(q), std::move(hp), std::move(hq), std::move(lhs), std::move(rhs)};
  };
  auto hit = first_failure(budget, [&](std::size_t idx) {
    auto w = draw(idx);
    return w.image_distance > w.transport_cost;
  });
  if (hit) {
    result.pass = false;
    result.witness = draw(*hit);
  }
  return result;
}

}  // namespace giry
