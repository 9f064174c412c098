#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "giry/rational.hpp"

namespace giry {

struct Element;

/// A rational coordinate vector (boxes, simplices, intervals).
struct Point {
  std::vector<Rational> coords;
};

/// Index of a label in a finite discrete carrier.
struct Label {
  std::size_t index = 0;
};

/// A point of one branch of a semidirect product.
struct Tagged {
  std::size_t branch = 0;
  std::shared_ptr<const Element> point;
};

/// A point of a product space.
struct Tuple {
  std::vector<Element> parts;
};

using Payload = std::variant<Point, ExtValue, Label, Tagged, Tuple>;

/// A point of some convex space. Immutable value; the owning space is
/// carried by whoever holds the element.
struct Element {
  Payload payload;

  static Element point(std::vector<Rational> coords);
  static Element real(Rational r);
  static Element infinity();
  static Element ext(ExtValue v);
  static Element label(std::size_t index);
  static Element tagged(std::size_t branch, Element inner);
  static Element tuple(std::vector<Element> parts);

  const Point& as_point() const { return std::get<Point>(payload); }
  const ExtValue& as_ext() const { return std::get<ExtValue>(payload); }
  std::size_t as_label() const { return std::get<Label>(payload).index; }
  const Tagged& as_tagged() const { return std::get<Tagged>(payload); }
  const Tuple& as_tuple() const { return std::get<Tuple>(payload); }
};

std::strong_ordering compare(const Element& a, const Element& b);

inline bool operator==(const Element& a, const Element& b) { return compare(a, b) == 0; }
inline std::strong_ordering operator<=>(const Element& a, const Element& b) { return compare(a, b); }

}  // namespace giry
