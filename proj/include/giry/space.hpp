#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "giry/element.hpp"
#include "giry/rational.hpp"

namespace giry {

enum class SpaceKind { Geometric, Discrete, Mixed };

std::string_view to_string(SpaceKind kind);
SpaceKind parse_space_kind(std::string_view text);

enum class ChainRule { Min, Max };

/// How a semidirect product combines points lying on different branches.
enum class SemidirectRule {
  /// Send both points into the surviving branch through the glue maps and
  /// combine there. This is the rule that yields a convex space.
  Transport,
  /// Return the surviving branch's point unchanged. Not associative when the
  /// surviving branch is geometric; kept so the failure can be demonstrated.
  Survivor,
};

class ConvexSpace;
using SpacePtr = std::shared_ptr<const ConvexSpace>;

/// Axis-aligned rational box; an interval when one-dimensional.
struct BoxCarrier {
  std::vector<Rational> lo, hi;
};

/// Probability simplex with `vertices` coordinates.
struct SimplexCarrier {
  std::size_t vertices = 0;
};

/// [lo, hi] ∪ {+∞}; a missing bound means unbounded on that side.
struct ExtLineCarrier {
  std::optional<Rational> lo, hi;
};

/// Finite chain whose combination (for p in (0,1)) is min or max of the
/// label indices.
struct ChainCarrier {
  std::vector<std::string> labels;
  ChainRule rule = ChainRule::Min;
  bool naturals = false;
};

/// Finite discrete space given by a symmetric idempotent table:
/// p·x + (1-p)·y = table[x][y] for every p in (0,1).
struct TableCarrier {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> table;
};

struct ProductCarrier {
  std::vector<SpacePtr> factors;
};

/// Constant transition map from branch `from` into branch `to`, landing at `at`.
struct Glue {
  std::size_t from = 0;
  std::size_t to = 0;
  Element at;
};

struct SemidirectCarrier {
  SpacePtr base;
  std::vector<SpacePtr> components;
  std::vector<Glue> glue;
  SemidirectRule rule = SemidirectRule::Transport;
};

using Carrier = std::variant<BoxCarrier, SimplexCarrier, ExtLineCarrier, ChainCarrier, TableCarrier,
                             ProductCarrier, SemidirectCarrier>;

/// A concrete convex space: carrier plus binary combination rule.
///
/// Spaces are immutable and shared through SpacePtr. All member functions are
/// pure, so a space may be used from many threads at once.
class ConvexSpace {
 public:
  ConvexSpace(std::string id, SpaceKind kind, Carrier carrier);

  const std::string& id() const { return id_; }
  SpaceKind kind() const { return kind_; }
  const Carrier& carrier() const { return carrier_; }
  template <class C>
  const C* as() const {
    return std::get_if<C>(&carrier_);
  }

  bool contains(const Element& e) const;
  bool is_finite() const;
  /// All points of a finite carrier, in declaration order. Throws for
  /// infinite carriers.
  std::vector<Element> elements() const;
  /// Distinguished points checked before random sampling: every point of a
  /// finite carrier, corners/vertices/endpoints otherwise.
  std::vector<Element> landmarks() const;
  Element sample(std::mt19937_64& rng) const;

  /// p·x + (1-p)·y. Throws std::invalid_argument if p ∉ [0,1] or a point is
  /// not in the carrier.
  Element combine2(const Rational& p, const Element& x, const Element& y) const;

  std::string format(const Element& e) const;
  Element parse(std::string_view text) const;

  /// For semidirect products: the glue transition from branch `from` into
  /// branch `to` (identity when equal).
  Element transition(std::size_t from, std::size_t to, const Element& x) const;

 private:
  std::string id_;
  SpaceKind kind_;
  Carrier carrier_;
};

/// Nonnegative exact weights summing to exactly 1.
class WeightVector {
 public:
  /// Throws std::invalid_argument unless every weight is ≥ 0 and they sum to 1.
  explicit WeightVector(std::vector<Rational> weights);
  /// Weights proportional to the given positive integers.
  static WeightVector proportional(std::span<const long> parts);

  const std::vector<Rational>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  const Rational& operator[](std::size_t i) const { return weights_[i]; }

 private:
  std::vector<Rational> weights_;
};

/// Convex combination Σ wᵢ xᵢ as a weight-normalised left fold of the binary
/// rule. Zero weights are dropped first.
Element combine(const ConvexSpace& space, const WeightVector& w, std::span<const Element> xs);

/// The p-grid used by exhaustive checks, simplest fractions first:
/// 1/2, 1/3, 2/3, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8.
const std::vector<Rational>& default_p_grid();

// Builders. All throw std::invalid_argument on malformed parameters.
SpacePtr make_box(std::string id, std::vector<Rational> lo, std::vector<Rational> hi);
SpacePtr make_interval(std::string id, Rational lo, Rational hi);
SpacePtr make_simplex(std::string id, std::size_t vertices);
SpacePtr make_ext_line(std::string id, std::optional<Rational> lo, std::optional<Rational> hi);
SpacePtr make_chain(std::string id, std::vector<std::string> labels, ChainRule rule);
/// Truncated naturals {0, …, n-1}; always the min rule.
SpacePtr make_naturals(std::string id, std::size_t n);
SpacePtr make_table_space(std::string id, std::vector<std::string> labels,
                          std::vector<std::vector<std::size_t>> table);
SpacePtr make_product(std::string id, std::vector<SpacePtr> factors);
/// `base` must be a totally ordered discrete space with one label per
/// component. Every label except the absorbing top needs exactly one glue
/// into its cover.
SpacePtr make_semidirect(std::string id, SpacePtr base, std::vector<SpacePtr> components,
                         std::vector<Glue> glue, SemidirectRule rule = SemidirectRule::Transport);

SpacePtr product_space(const SpacePtr& a, const SpacePtr& b);
SpacePtr semidirect_space(const SpacePtr& discrete_part, std::vector<SpacePtr> components,
                          std::vector<Glue> glue, SemidirectRule rule = SemidirectRule::Transport);

/// C = {0, 1, u}: p·0 + (1-p)·1 = u and u absorbs everything.
SpacePtr make_space_c();
/// 2 = {0, 1} with p·0 + (1-p)·1 = 1.
SpacePtr make_two();
SpacePtr make_point_space();
/// Two intervals [0,L] and [0,H] over 2 = {L < H}, glued by [0,L] → 0.
SpacePtr make_meng_space(Rational low_length = 1, Rational high_length = 1,
                         SemidirectRule rule = SemidirectRule::Transport);

}  // namespace giry
