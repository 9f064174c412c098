#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "giry/space.hpp"

namespace giry {

/// The codomain of functionals and characteristic maps: R ∪ {+∞}.
SpacePtr extended_reals();

/// A map between spaces. Affinity is a contract checked by is_affine, not
/// enforced at construction.
struct AffineMap {
  std::string name;
  SpacePtr domain;
  SpacePtr codomain;
  std::function<Element(const Element&)> rule;

  Element operator()(const Element& x) const { return rule(x); }
};

struct AffinityWitness {
  Rational p;
  Element x, y;
  /// m(p·x + (1-p)·y) and p·m(x) + (1-p)·m(y).
  Element image_of_combination, combination_of_images;
};

struct AffinityResult {
  bool affine = true;
  /// False when random samples were needed (infinite domain).
  bool exhaustive = true;
  std::size_t checked = 0;
  std::optional<AffinityWitness> witness;
};

/// Checks m(p·x + (1-p)·y) = p·m(x) + (1-p)·m(y): every landmark pair and
/// grid weight first, then `budget` seeded samples on infinite domains.
AffinityResult is_affine(const AffineMap& m, std::size_t budget = 500, std::uint64_t seed = 1,
                         const std::vector<Rational>& grid = default_p_grid());

/// A proper nonempty subset closed under p·a + (1-p)·b for a inside, p > 0.
struct Ideal {
  SpacePtr space;
  /// Sorted, distinct.
  std::vector<Element> members;

  bool contains(const Element& e) const;
};

/// Tests the ideal condition directly over the finite carrier and the grid.
bool is_ideal(const ConvexSpace& space, std::span<const Element> members,
              const std::vector<Rational>& grid = default_p_grid());

/// All proper nonempty ideals of a finite space, ordered by size then
/// members. Throws std::invalid_argument for infinite carriers.
std::vector<Ideal> enumerate_ideals(const SpacePtr& space,
                                    const std::vector<Rational>& grid = default_p_grid());

/// Members ↦ +∞, everything else ↦ 0. Throws std::invalid_argument if the
/// set is not a proper nonempty ideal.
AffineMap char_map(const Ideal& ideal);

/// {x : m(x) ∈ target}, as a candidate ideal of m's (finite) domain.
std::vector<Element> preimage(const AffineMap& m, const Ideal& target);

struct CoseparationResult {
  bool separates = true;
  bool exhaustive = true;
  std::optional<std::pair<Element, Element>> unseparated;
};

/// True iff every pair a ≠ b is told apart by some map. Exhaustive over
/// finite carriers; landmarks plus samples otherwise.
CoseparationResult coseparates(std::span<const AffineMap> maps, const SpacePtr& space,
                               std::size_t budget = 500, std::uint64_t seed = 1);

AffineMap compose(const AffineMap& outer, const AffineMap& inner);
AffineMap projection(const SpacePtr& product, std::size_t factor);

/// Affine maps into R ∪ {+∞} that tell points of `space` apart:
/// coordinates and their complements on boxes and simplices, the identity and
/// the indicator of +∞ on extended lines, ideal characteristic maps on finite
/// discrete spaces, and composites through projections and glue maps for
/// products and semidirect products.
std::vector<AffineMap> coseparating_family(const SpacePtr& space);

}  // namespace giry
