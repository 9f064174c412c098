#include "giry/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace giry {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational r;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    mpz_class n{std::string(num)}, d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    r = Rational(n, d);
    r.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac));
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
    r = Rational(n, d);
    r.canonicalize();
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    r = Rational(mpz_class(std::string(s)));
  }
  if (negative) r = -r;
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_fraction_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::strong_ordering compare(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

const Rational& ExtValue::value() const {
  if (infinite_) throw std::logic_error("value() on infinite ExtValue");
  return value_;
}

ExtValue ExtValue::operator+(const ExtValue& o) const {
  if (infinite_ || o.infinite_) return infinity();
  return ExtValue(Rational(value_ + o.value_));
}

ExtValue ExtValue::scale(const Rational& c) const {
  if (sgn(c) < 0) throw std::invalid_argument("negative scale on ExtValue");
  if (sgn(c) == 0) return ExtValue(0L);
  if (infinite_) return infinity();
  return ExtValue(Rational(c * value_));
}

bool operator==(const ExtValue& a, const ExtValue& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ == b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return compare(a.value_, b.value_);
}

std::string to_string(const ExtValue& v) {
  return v.is_infinite() ? std::string("inf") : to_string(v.value());
}

ExtValue parse_ext_value(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "∞") return ExtValue::infinity();
  return ExtValue(parse_rational(text));
}

}  // namespace giry
