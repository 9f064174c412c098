#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "giry/metric.hpp"
#include "giry/space.hpp"

namespace giry {

struct SpaceEntry {
  SpacePtr space;
  ExtMetric metric;
  /// Declared with expect=reject: a rejected or failing report is the
  /// expected outcome.
  bool expect_reject = false;
};

/// Spaces by id, in registration order.
class Registry {
 public:
  /// Throws std::invalid_argument on a duplicate id.
  void add(SpaceEntry entry);
  const SpaceEntry* find(std::string_view id) const;
  /// Throws std::out_of_range for an unknown id.
  const SpaceEntry& at(std::string_view id) const;
  const std::vector<SpaceEntry>& entries() const { return entries_; }

 private:
  std::vector<SpaceEntry> entries_;
};

/// I, box, box-linf, simplex3, R-inf, R-plus, N-min, chain-max, two, C,
/// IxN, meng, meng-literal, point.
Registry builtin_registry();

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// Adds the spaces declared in `text` to `registry`. Grammar, one statement
/// per line ('#' starts a comment):
///
///   space <id> kind=<geometric|discrete|mixed> carrier=<carrier> metric=<metric> [expect=reject]
///   glue <from-label> -> <to-label> at <point>
///
/// Carriers: `interval a b`, `box lo1 hi1 lo2 hi2 …`, `simplex n`,
/// `ext-real lo hi`, `ext-nonneg hi`, `naturals n`, `chain l1 l2 … rule=min|max`,
/// `labels l1 l2 … rule=min|max|example-C`, `product A B …`,
/// `semidirect Base C1 C2 … [rule=transport|survivor]`.
/// Glue lines attach to the preceding semidirect space.
void parse_space_text(std::string_view text, Registry& registry);
/// Reads a file and calls parse_space_text. I/O failures throw std::runtime_error.
void parse_space_file(const std::string& path, Registry& registry);

}  // namespace giry
