#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "giry/space.hpp"

namespace giry {

/// Why a discrete space fails to be a total order.
struct PosetWitness {
  enum class Reason { ThirdElement, Incomparable, NotTransitive, NotAntisymmetric };
  Reason reason = Reason::ThirdElement;
  Element x, y;
  /// ThirdElement: the combination of x and y. NotTransitive: the middle point.
  std::optional<Element> z;
};

std::string_view to_string(PosetWitness::Reason reason);

/// The relation y ≤ x iff p·y + (1-p)·x = x, on a finite discrete carrier.
struct DiscretePoset {
  std::vector<Element> elements;
  /// leq[i][j] holds iff elements[i] ≤ elements[j].
  std::vector<std::vector<bool>> leq;
  bool is_total_order = false;
  std::optional<PosetWitness> witness;

  /// Elements sorted bottom to top. Only meaningful for total orders.
  std::vector<std::size_t> ascending() const;
};

/// Throws std::invalid_argument for non-finite or non-discrete spaces.
DiscretePoset discrete_poset(const ConvexSpace& space);

struct KindReport {
  SpaceKind kind = SpaceKind::Geometric;
  /// "exhaustive" for finite carriers, "analytic" for carrier families.
  std::string decided_by;
  /// A pair whose combination is p-independent, and one whose is not, when found.
  std::optional<std::pair<Element, Element>> constant_pair;
  std::optional<std::pair<Element, Element>> varying_pair;
};

KindReport classify_kind(const ConvexSpace& space,
                         const std::vector<Rational>& grid = default_p_grid());

/// A violation of the regrouping axiom on at most four points.
struct RegroupingWitness {
  std::vector<Element> points;
  std::vector<Rational> weights;
  Element left_fold, regrouped;
};

/// Checks idempotence, endpoints and parametrised associativity
/// (p·x + (1-p)·(q·y + (1-q)·z) against the regrouped form). Exhaustive over
/// finite carriers, landmarks plus `budget` seeded samples otherwise.
struct AxiomReport {
  bool ok = true;
  bool exhaustive = true;
  std::string failed_axiom;
  std::optional<RegroupingWitness> witness;
};

AxiomReport check_space_axioms(const ConvexSpace& space, std::size_t budget = 500,
                               std::uint64_t seed = 1,
                               const std::vector<Rational>& grid = default_p_grid());

}  // namespace giry
