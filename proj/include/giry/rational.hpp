#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace giry {

using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// Parses "n", "n/d", "-n/d" or a finite decimal such as "0.4".
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "n/d", or "n" when the denominator is 1.
std::string to_string(const Rational& r);

/// Always "n/d", including integers ("1/1").
std::string to_fraction_string(const Rational& r);

std::strong_ordering compare(const Rational& a, const Rational& b);

/// A value in R ∪ {+∞}.
///
/// Arithmetic absorbs infinity: ∞ + v = ∞, c·∞ = ∞ for c > 0, and 0·∞ = 0.
/// Only nonnegative scalars are accepted by `scale`.
class ExtValue {
 public:
  ExtValue() = default;
  ExtValue(Rational v) : value_(std::move(v)) {}  // NOLINT(implicit)
  ExtValue(long v) : value_(v) {}                 // NOLINT(implicit)

  static ExtValue infinity() {
    ExtValue e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  /// Precondition: finite.
  const Rational& value() const;

  ExtValue operator+(const ExtValue& o) const;
  ExtValue& operator+=(const ExtValue& o) { return *this = *this + o; }
  /// c·x with c ≥ 0, using 0·∞ = 0.
  ExtValue scale(const Rational& c) const;

  friend bool operator==(const ExtValue& a, const ExtValue& b);
  friend std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b);

 private:
  bool infinite_ = false;
  Rational value_ = 0;
};

/// "inf" or the rational form used by `to_string`.
std::string to_string(const ExtValue& v);
ExtValue parse_ext_value(std::string_view text);

}  // namespace giry
