#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "giry/algebra.hpp"
#include "giry/fields.hpp"
#include "giry/space_file.hpp"
#include "giry/transport.hpp"

namespace giry {

/// Keys keep insertion order, so reports read top-down.
using Json = nlohmann::ordered_json;

enum class OutputFormat { Text, Json };

struct RunConfig {
  /// check-compat, check-laws, wasserstein, expect, counterexample,
  /// fields-demo or report-all.
  std::string command;
  /// Optional space-definition file, added to the built-ins.
  std::string input_path;
  /// Restricts check-compat / check-laws to one space; names the space for
  /// wasserstein / expect (otherwise taken from the first measure file).
  std::string space;
  /// Measure files in the canonical text serialization.
  std::vector<std::string> measures;
  std::uint64_t seed = 1;
  std::size_t budget = 500;
  OutputFormat format = OutputFormat::Text;
  /// Empty for the `out` stream.
  std::string output;
};

const std::vector<std::string>& known_commands();

/// Exit code: 0 every check passed (or failed where expect=reject says it
/// should), 1 some check failed, 2 usage, parse or I/O error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// JSON documents, also used by the tests. Exact values are strings
// ("3/4", "inf"); nothing here depends on timing.
Json to_json(const ConvexSpace& space, const CompatResult& r, std::size_t arity);
Json to_json(const AlgebraReport& r);
Json to_json(const Rejection& r);
Json to_json(const CounterexampleReport& r);
Json to_json(const ConvexSpace& space, const TransportResult& r);

/// CheckBudget used for a --budget value: `budget` samples, 3/5 of it as
/// meta-measures (so the default 500 gives 300).
CheckBudget check_budget(std::size_t budget, std::uint64_t seed);

/// Renders a report document as indented `key: value` lines.
std::string render_text(const Json& doc);

}  // namespace giry
