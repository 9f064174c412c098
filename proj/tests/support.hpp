#pragma once

#include <random>
#include <string>
#include <vector>

#include "giry/element.hpp"
#include "giry/measure.hpp"
#include "giry/rational.hpp"
#include "giry/space.hpp"
#include "giry/space_file.hpp"

namespace test {

/// One registry for the whole run; range-for over a temporary would dangle.
inline const giry::Registry& builtins() {
  static const giry::Registry reg = giry::builtin_registry();
  return reg;
}

inline giry::Rational q(long n, long d = 1) { return giry::make_rational(n, d); }
inline giry::Element pt(long n, long d = 1) { return giry::Element::point({q(n, d)}); }

inline giry::Element el(const giry::ConvexSpace& s, const std::string& text) { return s.parse(text); }

/// Measure from "point:weight" pairs written in the space's own syntax.
inline giry::FinMeasure m(const giry::ConvexSpace& s,
                          std::initializer_list<std::pair<std::string, giry::Rational>> atoms) {
  std::vector<giry::FinMeasure::Atom> out;
  for (const auto& [x, w] : atoms) out.emplace_back(s.parse(x), w);
  return giry::FinMeasure(std::move(out));
}

/// All subsets of a finite carrier, as element lists.
inline std::vector<std::vector<giry::Element>> all_subsets(const std::vector<giry::Element>& xs) {
  std::vector<std::vector<giry::Element>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << xs.size()); ++mask) {
    std::vector<giry::Element> s;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if ((mask >> i) & 1) s.push_back(xs[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace test
