#include "giry/element.hpp"

namespace giry {

Element Element::point(std::vector<Rational> coords) { return {Point{std::move(coords)}}; }
Element Element::real(Rational r) { return {ExtValue(std::move(r))}; }
Element Element::infinity() { return {ExtValue::infinity()}; }
Element Element::ext(ExtValue v) { return {std::move(v)}; }
Element Element::label(std::size_t index) { return {Label{index}}; }
Element Element::tagged(std::size_t branch, Element inner) {
  return {Tagged{branch, std::make_shared<const Element>(std::move(inner))}};
}
Element Element::tuple(std::vector<Element> parts) { return {Tuple{std::move(parts)}}; }

namespace {

template <class T, class Cmp>
std::strong_ordering lexicographic(const std::vector<T>& a, const std::vector<T>& b, Cmp cmp) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = cmp(a[i], b[i]); c != 0) return c;
  return a.size() <=> b.size();
}

struct PayloadCompare {
  std::strong_ordering operator()(const Point& a, const Point& b) const {
    return lexicographic(a.coords, b.coords,
                         [](const Rational& x, const Rational& y) { return compare(x, y); });
  }
  std::strong_ordering operator()(const ExtValue& a, const ExtValue& b) const { return a <=> b; }
  std::strong_ordering operator()(const Label& a, const Label& b) const { return a.index <=> b.index; }
  std::strong_ordering operator()(const Tagged& a, const Tagged& b) const {
    if (auto c = a.branch <=> b.branch; c != 0) return c;
    return compare(*a.point, *b.point);
  }
  std::strong_ordering operator()(const Tuple& a, const Tuple& b) const {
    return lexicographic(a.parts, b.parts,
                         [](const Element& x, const Element& y) { return compare(x, y); });
  }
  template <class A, class B>
  std::strong_ordering operator()(const A&, const B&) const {
    return std::strong_ordering::equal;  // unreachable: indices differ
  }
};

}  // namespace

std::strong_ordering compare(const Element& a, const Element& b) {
  if (auto c = a.payload.index() <=> b.payload.index(); c != 0) return c;
  return std::visit(PayloadCompare{}, a.payload, b.payload);
}

}  // namespace giry
