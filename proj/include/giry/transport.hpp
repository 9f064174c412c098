#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "giry/measure.hpp"
#include "giry/metric.hpp"

namespace giry {

/// A joint measure with prescribed marginals, stored as cells over the atom
/// lists of `left` and `right`.
struct Coupling {
  struct Cell {
    std::size_t i = 0, j = 0;
    Rational mass;
  };
  FinMeasure left, right;
  /// Positive masses only, sorted by (i, j).
  std::vector<Cell> cells;

  /// The joint as a measure over (x, y) tuples.
  FinMeasure joint() const;
  /// Both marginals reproduce `left` and `right` exactly.
  bool marginals_ok() const;
  /// Σ J(x,y)·d(x,y).
  ExtValue cost(const ExtMetric& d) const;
};

/// P ⊗ Q.
Coupling independent_coupling(const FinMeasure& p, const FinMeasure& q);

enum class TransportMethod { NetworkSimplex, Brute };
std::string_view to_string(TransportMethod m);

struct TransportResult {
  ExtValue cost;
  Coupling plan;
  TransportMethod method = TransportMethod::NetworkSimplex;
  std::size_t pivots = 0;
};

/// Exact Wasserstein-1 distance by the primal transportation simplex
/// (northwest-corner start, Bland's rule). Costs are ordered
/// lexicographically as (mass on infinite cells, finite cost), so a plan
/// avoids infinite distances whenever any feasible plan can. If none can, the
/// cost is +∞ and the plan is the independent coupling.
/// Throws std::invalid_argument when either support exceeds 64 atoms.
TransportResult wasserstein(const FinMeasure& p, const FinMeasure& q, const ExtMetric& d);

/// Oracle: enumerates every spanning-tree basis of the transportation
/// polytope and keeps the best feasible vertex. Supports up to 4 atoms each.
TransportResult brute_force_wasserstein(const FinMeasure& p, const FinMeasure& q, const ExtMetric& d);

struct LipschitzWitness {
  FinMeasure p, q;
  Element image_p, image_q;
  /// d(ε(P), ε(Q)) and d_W(P, Q).
  ExtValue image_distance, transport_cost;
};

struct LipschitzResult {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<LipschitzWitness> witness;
};

/// d(h(P), h(Q)) ≤ d_W(P, Q) on `budget` seeded random pairs.
LipschitzResult lipschitz_check(const SpacePtr& space, const std::function<Element(const FinMeasure&)>& h,
                                const ExtMetric& d, std::size_t budget = 500, std::uint64_t seed = 1);

}  // namespace giry
