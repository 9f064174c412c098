#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "giry/element.hpp"
#include "giry/rational.hpp"
#include "giry/space.hpp"

namespace giry {

/// Finitely supported probability distribution over T.
///
/// Canonical form: atoms sorted by T, pairwise distinct, weights strictly
/// positive and summing to exactly 1. Equality is therefore structural.
/// T needs a `compare(const T&, const T&) -> std::strong_ordering` found by ADL.
template <class T>
class Dist {
 public:
  using value_type = T;
  using Atom = std::pair<T, Rational>;

  Dist() = default;

  /// Merges duplicate points, drops zero weights and validates the total.
  /// Throws std::invalid_argument on a negative weight or a total other than 1.
  explicit Dist(std::vector<Atom> atoms) : atoms_(canonical(std::move(atoms))) {
    Rational total = 0;
    for (const auto& a : atoms_) total += a.second;
    if (atoms_.empty() || total != 1)
      throw std::invalid_argument("measure weights sum to " + to_string(total) + ", not 1");
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  /// P({x}).
  Rational mass_of(const T& x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Atom& a, const T& v) { return compare(a.first, v) < 0; });
    if (it != atoms_.end() && compare(it->first, x) == 0) return it->second;
    return 0;
  }

  friend std::strong_ordering compare(const Dist& a, const Dist& b) {
    const std::size_t n = std::min(a.atoms_.size(), b.atoms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = compare(a.atoms_[i].first, b.atoms_[i].first); c != 0) return c;
      if (auto c = compare(a.atoms_[i].second, b.atoms_[i].second); c != 0) return c;
    }
    return a.atoms_.size() <=> b.atoms_.size();
  }
  friend bool operator==(const Dist& a, const Dist& b) { return compare(a, b) == 0; }

 private:
  static std::vector<Atom> canonical(std::vector<Atom> atoms) {
    for (const auto& a : atoms)
      if (sgn(a.second) < 0) throw std::invalid_argument("negative measure weight " + to_string(a.second));
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return compare(a.first, b.first) < 0; });
    std::vector<Atom> out;
    for (auto& a : atoms) {
      if (!out.empty() && compare(out.back().first, a.first) == 0)
        out.back().second += a.second;
      else
        out.push_back(std::move(a));
    }
    std::erase_if(out, [](const Atom& a) { return sgn(a.second) == 0; });
    return out;
  }

  std::vector<Atom> atoms_;
};

using FinMeasure = Dist<Element>;
using MetaMeasure = Dist<FinMeasure>;
using MetaMeasure3 = Dist<MetaMeasure>;

template <class T>
Dist<T> dirac(T x) {
  return Dist<T>({{std::move(x), Rational(1)}});
}

/// Image measure f_*P; colliding images merge.
template <class F, class T>
auto pushforward(F&& f, const Dist<T>& p) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  std::vector<typename Dist<U>::Atom> out;
  out.reserve(p.size());
  for (const auto& [x, w] : p.atoms()) out.emplace_back(f(x), w);
  return Dist<U>(std::move(out));
}

/// Monad multiplication: weight of x is Σ_j q_j · P_j({x}).
template <class T>
Dist<T> mu(const Dist<Dist<T>>& q) {
  std::vector<typename Dist<T>::Atom> out;
  for (const auto& [inner, qw] : q.atoms())
    for (const auto& [x, w] : inner.atoms()) out.emplace_back(x, Rational(qw * w));
  return Dist<T>(std::move(out));
}

/// Pointwise Σ wᵢ Pᵢ, computed directly rather than through mu.
template <class T>
Dist<T> convex_combine_measures(const WeightVector& w, std::span<const Dist<T>> ps) {
  if (w.size() != ps.size()) throw std::invalid_argument("weight/measure count mismatch");
  std::vector<typename Dist<T>::Atom> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (sgn(w[i]) == 0) continue;
    for (const auto& [x, pw] : ps[i].atoms()) out.emplace_back(x, Rational(w[i] * pw));
  }
  return Dist<T>(std::move(out));
}

template <class T>
std::vector<T> support(const Dist<T>& p) {
  std::vector<T> out;
  for (const auto& a : p.atoms()) out.push_back(a.first);
  return out;
}

/// Σ pᵢ·m(xᵢ) in R ∪ {+∞}.
template <class F, class T>
ExtValue integrate(const Dist<T>& p, F&& m) {
  ExtValue total(0L);
  for (const auto& [x, w] : p.atoms()) total += ExtValue(m(x)).scale(w);
  return total;
}

/// P(U) for a finite set U.
template <class T>
Rational measure_eval(const Dist<T>& p, std::span<const T> set) {
  Rational total = 0;
  for (const auto& [x, w] : p.atoms())
    if (std::any_of(set.begin(), set.end(), [&](const T& u) { return compare(u, x) == 0; })) total += w;
  return total;
}

/// Throws std::invalid_argument if some atom is not a point of `space`.
void check_on_space(const ConvexSpace& space, const FinMeasure& p);

/// `measure on <space>: <point>:<num>/<den>, ...` with atoms in canonical order.
std::string serialize_measure(const ConvexSpace& space, const FinMeasure& p);
/// The space id named in a serialised measure.
std::string measure_space_id(std::string_view text);
/// Inverse of serialize_measure. Throws std::invalid_argument on malformed
/// text, a space-id mismatch or a point outside the space.
FinMeasure parse_measure(const ConvexSpace& space, std::string_view text);

}  // namespace giry
