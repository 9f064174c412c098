#include "giry/measure.hpp"

namespace giry {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

constexpr std::string_view kPrefix = "measure on ";

}  // namespace

void check_on_space(const ConvexSpace& space, const FinMeasure& p) {
  for (const auto& [x, w] : p.atoms())
    if (!space.contains(x))
      throw std::invalid_argument("measure atom is not a point of space '" + space.id() + "'");
}

std::string serialize_measure(const ConvexSpace& space, const FinMeasure& p) {
  std::string out = std::string(kPrefix) + space.id() + ":";
  bool first = true;
  for (const auto& [x, w] : p.atoms()) {
    out += first ? " " : ", ";
    first = false;
    out += space.format(x) + ":" + to_fraction_string(w);
  }
  return out;
}

std::string measure_space_id(std::string_view text) {
  text = trim(text);
  if (text.substr(0, kPrefix.size()) != kPrefix) throw std::invalid_argument("measure text must start with 'measure on '");
  text.remove_prefix(kPrefix.size());
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("missing ':' after space id");
  return std::string(trim(text.substr(0, colon)));
}

FinMeasure parse_measure(const ConvexSpace& space, std::string_view text) {
  text = trim(text);
  std::string id = measure_space_id(text);
  if (id != space.id()) throw std::invalid_argument("measure is on '" + id + "', expected '" + space.id() + "'");
  auto body = text.substr(text.find(':') + 1);

  // Split on commas at bracket depth zero.
  std::vector<std::string_view> items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  items.push_back(body.substr(start));

  std::vector<FinMeasure::Atom> atoms;
  for (auto item : items) {
    item = trim(item);
    auto colon = item.rfind(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("atom '" + std::string(item) + "' lacks ':weight'");
    Rational w = parse_rational(trim(item.substr(colon + 1)));
    if (sgn(w) <= 0) throw std::invalid_argument("atom weights must be positive");
    atoms.emplace_back(space.parse(item.substr(0, colon)), w);
  }
  return FinMeasure(std::move(atoms));
}

}  // namespace giry
