#include "giry/space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "giry/structure.hpp"

namespace giry {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Geometric: return "geometric";
    case SpaceKind::Discrete: return "discrete";
    case SpaceKind::Mixed: return "mixed";
  }
  return "?";
}

SpaceKind parse_space_kind(std::string_view text) {
  if (text == "geometric") return SpaceKind::Geometric;
  if (text == "discrete") return SpaceKind::Discrete;
  if (text == "mixed") return SpaceKind::Mixed;
  throw std::invalid_argument("unknown space kind '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void not_in_space(const ConvexSpace& s, const Element& e) {
  std::string shown;
  try {
    shown = s.format(e);
  } catch (...) {
    shown = "<unprintable>";
  }
  throw std::invalid_argument("element " + shown + " is not a point of space '" + s.id() + "'");
}

Rational random_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  static constexpr long dens[] = {1, 2, 3, 4, 5, 6, 8, 12};
  long d = dens[std::uniform_int_distribution<std::size_t>(0, std::size(dens) - 1)(rng)];
  long k = std::uniform_int_distribution<long>(0, d)(rng);
  return lo + (hi - lo) * make_rational(k, d);
}

std::size_t label_index(const std::vector<std::string>& labels, std::string_view text) {
  auto it = std::find(labels.begin(), labels.end(), text);
  if (it == labels.end()) throw std::invalid_argument("unknown label '" + std::string(text) + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

/// Splits on `sep` at bracket depth zero.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<Element> cartesian(const std::vector<std::vector<Element>>& lists) {
  std::vector<Element> out;
  std::vector<std::size_t> idx(lists.size(), 0);
  for (const auto& l : lists)
    if (l.empty()) return out;
  while (true) {
    std::vector<Element> parts;
    for (std::size_t f = 0; f < lists.size(); ++f) parts.push_back(lists[f][idx[f]]);
    out.push_back(Element::tuple(std::move(parts)));
    std::size_t f = lists.size();
    while (f > 0) {
      --f;
      if (++idx[f] < lists[f].size()) break;
      idx[f] = 0;
      if (f == 0) return out;
    }
    if (lists.empty()) return out;
  }
}

Rational lerp(const Rational& p, const Rational& a, const Rational& b) { return p * a + (1 - p) * b; }

}  // namespace

ConvexSpace::ConvexSpace(std::string id, SpaceKind kind, Carrier carrier)
    : id_(std::move(id)), kind_(kind), carrier_(std::move(carrier)) {}

bool ConvexSpace::contains(const Element& e) const {
  return std::visit(
      [&](const auto& c) -> bool {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, BoxCarrier>) {
          auto* pt = std::get_if<Point>(&e.payload);
          if (!pt || pt->coords.size() != c.lo.size()) return false;
          for (std::size_t i = 0; i < c.lo.size(); ++i)
            if (pt->coords[i] < c.lo[i] || pt->coords[i] > c.hi[i]) return false;
          return true;
        } else if constexpr (std::is_same_v<C, SimplexCarrier>) {
          auto* pt = std::get_if<Point>(&e.payload);
          if (!pt || pt->coords.size() != c.vertices) return false;
          Rational sum = 0;
          for (const auto& x : pt->coords) {
            if (sgn(x) < 0) return false;
            sum += x;
          }
          return sum == 1;
        } else if constexpr (std::is_same_v<C, ExtLineCarrier>) {
          auto* v = std::get_if<ExtValue>(&e.payload);
          if (!v) return false;
          if (v->is_infinite()) return true;
          if (c.lo && v->value() < *c.lo) return false;
          if (c.hi && v->value() > *c.hi) return false;
          return true;
        } else if constexpr (std::is_same_v<C, ChainCarrier> || std::is_same_v<C, TableCarrier>) {
          auto* l = std::get_if<Label>(&e.payload);
          return l && l->index < c.labels.size();
        } else if constexpr (std::is_same_v<C, ProductCarrier>) {
          auto* t = std::get_if<Tuple>(&e.payload);
          if (!t || t->parts.size() != c.factors.size()) return false;
          for (std::size_t i = 0; i < c.factors.size(); ++i)
            if (!c.factors[i]->contains(t->parts[i])) return false;
          return true;
        } else {
          auto* t = std::get_if<Tagged>(&e.payload);
          return t && t->point && t->branch < c.components.size() &&
                 c.components[t->branch]->contains(*t->point);
        }
      },
      carrier_);
}

bool ConvexSpace::is_finite() const {
  return std::visit(
      [](const auto& c) -> bool {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, ChainCarrier> || std::is_same_v<C, TableCarrier>) {
          return true;
        } else if constexpr (std::is_same_v<C, BoxCarrier>) {
          return c.lo == c.hi;
        } else if constexpr (std::is_same_v<C, ProductCarrier>) {
          return std::all_of(c.factors.begin(), c.factors.end(), [](auto& f) { return f->is_finite(); });
        } else if constexpr (std::is_same_v<C, SemidirectCarrier>) {
          return std::all_of(c.components.begin(), c.components.end(),
                             [](auto& f) { return f->is_finite(); });
        } else {
          return false;
        }
      },
      carrier_);
}

std::vector<Element> ConvexSpace::elements() const {
  if (!is_finite()) throw std::invalid_argument("space '" + id_ + "' has an infinite carrier");
  return landmarks();
}

std::vector<Element> ConvexSpace::landmarks() const {
  return std::visit(
      [](const auto& c) -> std::vector<Element> {
        using C = std::decay_t<decltype(c)>;
        std::vector<Element> out;
        if constexpr (std::is_same_v<C, BoxCarrier>) {
          const std::size_t dim = c.lo.size();
          for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
            std::vector<Rational> x(dim);
            for (std::size_t i = 0; i < dim; ++i) x[i] = (mask >> i) & 1 ? c.hi[i] : c.lo[i];
            Element e = Element::point(std::move(x));
            if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
          }
        } else if constexpr (std::is_same_v<C, SimplexCarrier>) {
          for (std::size_t v = 0; v < c.vertices; ++v) {
            std::vector<Rational> x(c.vertices, Rational(0));
            x[v] = 1;
            out.push_back(Element::point(std::move(x)));
          }
          out.push_back(Element::point(std::vector<Rational>(
              c.vertices, make_rational(1, static_cast<long>(c.vertices)))));
        } else if constexpr (std::is_same_v<C, ExtLineCarrier>) {
          if (c.lo) out.push_back(Element::real(*c.lo));
          if (!c.lo || (c.hi && *c.lo < 0 && *c.hi > 0)) out.push_back(Element::real(0));
          if (c.hi) out.push_back(Element::real(*c.hi));
          out.push_back(Element::infinity());
        } else if constexpr (std::is_same_v<C, ChainCarrier> || std::is_same_v<C, TableCarrier>) {
          for (std::size_t i = 0; i < c.labels.size(); ++i) out.push_back(Element::label(i));
        } else if constexpr (std::is_same_v<C, ProductCarrier>) {
          std::vector<std::vector<Element>> lists;
          for (const auto& f : c.factors) lists.push_back(f->landmarks());
          out = cartesian(lists);
        } else {
          for (std::size_t b = 0; b < c.components.size(); ++b)
            for (auto& e : c.components[b]->landmarks()) out.push_back(Element::tagged(b, std::move(e)));
        }
        return out;
      },
      carrier_);
}

Element ConvexSpace::sample(std::mt19937_64& rng) const {
  return std::visit(
      [&](const auto& c) -> Element {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, BoxCarrier>) {
          std::vector<Rational> x;
          for (std::size_t i = 0; i < c.lo.size(); ++i) x.push_back(random_rational(rng, c.lo[i], c.hi[i]));
          return Element::point(std::move(x));
        } else if constexpr (std::is_same_v<C, SimplexCarrier>) {
          std::uniform_int_distribution<long> part(0, 6);
          std::vector<long> raw(c.vertices);
          long total = 0;
          for (auto& r : raw) total += (r = part(rng));
          if (total == 0) {
            raw[std::uniform_int_distribution<std::size_t>(0, c.vertices - 1)(rng)] = 1;
            total = 1;
          }
          std::vector<Rational> x;
          for (long r : raw) x.push_back(make_rational(r, total));
          return Element::point(std::move(x));
        } else if constexpr (std::is_same_v<C, ExtLineCarrier>) {
          if (std::uniform_int_distribution<int>(0, 5)(rng) == 0) return Element::infinity();
          Rational lo = c.lo ? *c.lo : Rational(-4);
          Rational hi = c.hi ? *c.hi : Rational(4);
          if (hi < lo) hi = lo;
          return Element::real(random_rational(rng, lo, hi));
        } else if constexpr (std::is_same_v<C, ChainCarrier> || std::is_same_v<C, TableCarrier>) {
          return Element::label(std::uniform_int_distribution<std::size_t>(0, c.labels.size() - 1)(rng));
        } else if constexpr (std::is_same_v<C, ProductCarrier>) {
          std::vector<Element> parts;
          for (const auto& f : c.factors) parts.push_back(f->sample(rng));
          return Element::tuple(std::move(parts));
        } else {
          std::size_t b = std::uniform_int_distribution<std::size_t>(0, c.components.size() - 1)(rng);
          return Element::tagged(b, c.components[b]->sample(rng));
        }
      },
      carrier_);
}

Element ConvexSpace::transition(std::size_t from, std::size_t to, const Element& x) const {
  const auto* sd = as<SemidirectCarrier>();
  if (!sd) throw std::logic_error("transition() on a non-semidirect space");
  Element cur = x;
  std::size_t branch = from;
  while (branch != to) {
    auto it = std::find_if(sd->glue.begin(), sd->glue.end(), [&](const Glue& g) { return g.from == branch; });
    if (it == sd->glue.end())
      throw std::invalid_argument("no glue path from branch " + sd->base->format(Element::label(from)) +
                                  " to " + sd->base->format(Element::label(to)));
    cur = it->at;
    branch = it->to;
  }
  return cur;
}

Element ConvexSpace::combine2(const Rational& p, const Element& x, const Element& y) const {
  if (sgn(p) < 0 || p > 1) throw std::invalid_argument("weight outside [0,1]");
  if (!contains(x)) not_in_space(*this, x);
  if (!contains(y)) not_in_space(*this, y);
  if (p == 1) return x;
  if (sgn(p) == 0) return y;
  return std::visit(
      [&](const auto& c) -> Element {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, BoxCarrier> || std::is_same_v<C, SimplexCarrier>) {
          const auto& a = x.as_point().coords;
          const auto& b = y.as_point().coords;
          std::vector<Rational> out(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) out[i] = lerp(p, a[i], b[i]);
          return Element::point(std::move(out));
        } else if constexpr (std::is_same_v<C, ExtLineCarrier>) {
          const auto& a = x.as_ext();
          const auto& b = y.as_ext();
          if (a.is_infinite() || b.is_infinite()) return Element::infinity();
          return Element::real(lerp(p, a.value(), b.value()));
        } else if constexpr (std::is_same_v<C, ChainCarrier>) {
          std::size_t i = x.as_label(), j = y.as_label();
          return Element::label(c.rule == ChainRule::Min ? std::min(i, j) : std::max(i, j));
        } else if constexpr (std::is_same_v<C, TableCarrier>) {
          return Element::label(c.table[x.as_label()][y.as_label()]);
        } else if constexpr (std::is_same_v<C, ProductCarrier>) {
          std::vector<Element> parts;
          for (std::size_t i = 0; i < c.factors.size(); ++i)
            parts.push_back(c.factors[i]->combine2(p, x.as_tuple().parts[i], y.as_tuple().parts[i]));
          return Element::tuple(std::move(parts));
        } else {
          const auto& tx = x.as_tagged();
          const auto& ty = y.as_tagged();
          std::size_t s = c.base->combine2(p, Element::label(tx.branch), Element::label(ty.branch)).as_label();
          const auto& comp = *c.components[s];
          if (tx.branch == ty.branch) return Element::tagged(s, comp.combine2(p, *tx.point, *ty.point));
          if (c.rule == SemidirectRule::Survivor) return tx.branch == s ? x : y;
          return Element::tagged(s, comp.combine2(p, transition(tx.branch, s, *tx.point),
                                                  transition(ty.branch, s, *ty.point)));
        }
      },
      carrier_);
}

std::string ConvexSpace::format(const Element& e) const {
  return std::visit(
      [&](const auto& c) -> std::string {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, BoxCarrier> || std::is_same_v<C, SimplexCarrier>) {
          const auto& xs = e.as_point().coords;
          if (xs.size() == 1) return to_string(xs[0]);
          std::string s = "(";
          for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + to_string(xs[i]);
          return s + ")";
        } else if constexpr (std::is_same_v<C, ExtLineCarrier>) {
          return to_string(e.as_ext());
        } else if constexpr (std::is_same_v<C, ChainCarrier> || std::is_same_v<C, TableCarrier>) {
          return c.labels.at(e.as_label());
        } else if constexpr (std::is_same_v<C, ProductCarrier>) {
          const auto& parts = e.as_tuple().parts;
          std::string s = "(";
          for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + c.factors.at(i)->format(parts[i]);
          return s + ")";
        } else {
          const auto& t = e.as_tagged();
          return c.base->format(Element::label(t.branch)) + "[" + c.components.at(t.branch)->format(*t.point) +
                 "]";
        }
      },
      carrier_);
}

Element ConvexSpace::parse(std::string_view text) const {
  std::string_view s = trim(text);
  Element e = std::visit(
      [&](const auto& c) -> Element {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, BoxCarrier> || std::is_same_v<C, SimplexCarrier>) {
          std::vector<Rational> xs;
          if (!s.empty() && s.front() == '(') {
            if (s.back() != ')') throw std::invalid_argument("unbalanced '(' in '" + std::string(s) + "'");
            for (auto part : split_top(s.substr(1, s.size() - 2), ',')) xs.push_back(parse_rational(trim(part)));
          } else {
            xs.push_back(parse_rational(s));
          }
          return Element::point(std::move(xs));
        } else if constexpr (std::is_same_v<C, ExtLineCarrier>) {
          return Element::ext(parse_ext_value(s));
        } else if constexpr (std::is_same_v<C, ChainCarrier> || std::is_same_v<C, TableCarrier>) {
          return Element::label(label_index(c.labels, s));
        } else if constexpr (std::is_same_v<C, ProductCarrier>) {
          if (s.size() < 2 || s.front() != '(' || s.back() != ')')
            throw std::invalid_argument("product point must be parenthesised: '" + std::string(s) + "'");
          auto parts = split_top(s.substr(1, s.size() - 2), ',');
          if (parts.size() != c.factors.size())
            throw std::invalid_argument("product point has wrong arity: '" + std::string(s) + "'");
          std::vector<Element> out;
          for (std::size_t i = 0; i < parts.size(); ++i) out.push_back(c.factors[i]->parse(parts[i]));
          return Element::tuple(std::move(out));
        } else {
          auto open = s.find('[');
          if (open == std::string_view::npos || s.back() != ']')
            throw std::invalid_argument("branch point must look like label[point]: '" + std::string(s) + "'");
          std::size_t b = c.base->parse(s.substr(0, open)).as_label();
          return Element::tagged(b, c.components.at(b)->parse(s.substr(open + 1, s.size() - open - 2)));
        }
      },
      carrier_);
  if (!contains(e)) not_in_space(*this, e);
  return e;
}

WeightVector::WeightVector(std::vector<Rational> weights) : weights_(std::move(weights)) {
  Rational sum = 0;
  for (const auto& w : weights_) {
    if (sgn(w) < 0) throw std::invalid_argument("negative weight " + to_string(w));
    sum += w;
  }
  if (sum != 1) throw std::invalid_argument("weights sum to " + to_string(sum) + ", not 1");
}

WeightVector WeightVector::proportional(std::span<const long> parts) {
  long total = std::accumulate(parts.begin(), parts.end(), 0L);
  if (total <= 0) throw std::invalid_argument("proportional weights need a positive total");
  std::vector<Rational> w;
  for (long p : parts) w.push_back(make_rational(p, total));
  return WeightVector(std::move(w));
}

Element combine(const ConvexSpace& space, const WeightVector& w, std::span<const Element> xs) {
  if (w.size() != xs.size()) throw std::invalid_argument("weight/point count mismatch");
  std::optional<Element> acc;
  Rational mass = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!space.contains(xs[i])) not_in_space(space, xs[i]);
    if (sgn(w[i]) == 0) continue;
    if (!acc) {
      acc = xs[i];
      mass = w[i];
      continue;
    }
    Rational next = mass + w[i];
    acc = space.combine2(Rational(mass / next), *acc, xs[i]);
    mass = next;
  }
  if (!acc) throw std::invalid_argument("empty support after dropping zero weights");
  return *acc;
}

const std::vector<Rational>& default_p_grid() {
  static const std::vector<Rational> grid = {
      make_rational(1, 2), make_rational(1, 3), make_rational(2, 3), make_rational(1, 4), make_rational(3, 4),
      make_rational(1, 8), make_rational(3, 8), make_rational(5, 8), make_rational(7, 8)};
  return grid;
}

SpacePtr make_box(std::string id, std::vector<Rational> lo, std::vector<Rational> hi) {
  if (lo.empty() || lo.size() != hi.size()) throw std::invalid_argument("box bounds must have equal, nonzero length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (hi[i] < lo[i]) throw std::invalid_argument("box upper bound below lower bound");
  return std::make_shared<const ConvexSpace>(std::move(id), SpaceKind::Geometric,
                                             BoxCarrier{std::move(lo), std::move(hi)});
}

SpacePtr make_interval(std::string id, Rational lo, Rational hi) {
  return make_box(std::move(id), {std::move(lo)}, {std::move(hi)});
}

SpacePtr make_simplex(std::string id, std::size_t vertices) {
  if (vertices == 0) throw std::invalid_argument("simplex needs at least one vertex");
  return std::make_shared<const ConvexSpace>(std::move(id), SpaceKind::Geometric, SimplexCarrier{vertices});
}

SpacePtr make_ext_line(std::string id, std::optional<Rational> lo, std::optional<Rational> hi) {
  if (lo && hi && *hi < *lo) throw std::invalid_argument("extended line upper bound below lower bound");
  return std::make_shared<const ConvexSpace>(std::move(id), SpaceKind::Mixed,
                                             ExtLineCarrier{std::move(lo), std::move(hi)});
}

SpacePtr make_chain(std::string id, std::vector<std::string> labels, ChainRule rule) {
  if (labels.empty()) throw std::invalid_argument("chain needs at least one label");
  return std::make_shared<const ConvexSpace>(std::move(id), SpaceKind::Discrete,
                                             ChainCarrier{std::move(labels), rule, false});
}

SpacePtr make_naturals(std::string id, std::size_t n) {
  if (n == 0) throw std::invalid_argument("truncated naturals need n ≥ 1");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return std::make_shared<const ConvexSpace>(std::move(id), SpaceKind::Discrete,
                                             ChainCarrier{std::move(labels), ChainRule::Min, true});
}

SpacePtr make_table_space(std::string id, std::vector<std::string> labels,
                          std::vector<std::vector<std::size_t>> table) {
  const std::size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("table space needs at least one label");
  if (table.size() != n) throw std::invalid_argument("table has wrong number of rows");
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw std::invalid_argument("table has a row of wrong length");
    if (table[i][i] != i) throw std::invalid_argument("table is not idempotent at " + labels[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (table[i][j] >= n) throw std::invalid_argument("table entry out of range");
      if (table[i][j] != table[j][i])
        throw std::invalid_argument("table is not symmetric at (" + labels[i] + "," + labels[j] + ")");
    }
  }
  return std::make_shared<const ConvexSpace>(std::move(id), SpaceKind::Discrete,
                                             TableCarrier{std::move(labels), std::move(table)});
}

SpacePtr make_product(std::string id, std::vector<SpacePtr> factors) {
  if (factors.empty()) throw std::invalid_argument("product needs at least one factor");
  SpaceKind kind = factors.front()->kind();
  for (const auto& f : factors)
    if (f->kind() != kind) kind = SpaceKind::Mixed;
  return std::make_shared<const ConvexSpace>(std::move(id), kind, ProductCarrier{std::move(factors)});
}

SpacePtr make_semidirect(std::string id, SpacePtr base, std::vector<SpacePtr> components, std::vector<Glue> glue,
                         SemidirectRule rule) {
  if (!base || base->kind() != SpaceKind::Discrete || !base->is_finite())
    throw std::invalid_argument("semidirect base must be a finite discrete space");
  if (!base->as<ChainCarrier>() && !base->as<TableCarrier>())
    throw std::invalid_argument("semidirect base must be a chain or table space");
  DiscretePoset poset = discrete_poset(*base);
  if (!poset.is_total_order)
    throw std::invalid_argument("semidirect base '" + base->id() + "' is not totally ordered");
  const std::size_t n = poset.elements.size();
  if (components.size() != n) throw std::invalid_argument("one component per base label is required");

  // ascending() lists label positions bottom to top; labels are their own indices here.
  std::vector<std::size_t> order = poset.ascending();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t from = poset.elements[order[k]].as_label();
    std::size_t cover = poset.elements[order[k + 1]].as_label();
    std::size_t count = 0;
    for (const auto& g : glue) {
      if (g.from != from) continue;
      ++count;
      if (g.to != cover)
        throw std::invalid_argument("glue from " + base->format(Element::label(from)) + " must target its cover " +
                                    base->format(Element::label(cover)));
      if (!components.at(cover)->contains(g.at))
        throw std::invalid_argument("glue point is not in the target component");
    }
    if (count != 1)
      throw std::invalid_argument("label " + base->format(Element::label(from)) + " needs exactly one glue");
  }
  if (std::any_of(glue.begin(), glue.end(), [&](const Glue& g) { return g.from == order.back(); }))
    throw std::invalid_argument("the top label cannot be glued");

  bool all_discrete = std::all_of(components.begin(), components.end(),
                                  [](const SpacePtr& c) { return c->kind() == SpaceKind::Discrete; });
  SpaceKind kind = all_discrete ? SpaceKind::Discrete : SpaceKind::Mixed;
  return std::make_shared<const ConvexSpace>(
      std::move(id), kind, SemidirectCarrier{std::move(base), std::move(components), std::move(glue), rule});
}

SpacePtr product_space(const SpacePtr& a, const SpacePtr& b) { return make_product(a->id() + "x" + b->id(), {a, b}); }

SpacePtr semidirect_space(const SpacePtr& discrete_part, std::vector<SpacePtr> components, std::vector<Glue> glue,
                          SemidirectRule rule) {
  std::string id = discrete_part->id() + "|x";
  for (const auto& c : components) id += "-" + c->id();
  return make_semidirect(std::move(id), discrete_part, std::move(components), std::move(glue), rule);
}

SpacePtr make_space_c() {
  // labels: 0, 1, u
  constexpr std::size_t z = 0, o = 1, u = 2;
  return make_table_space("C", {"0", "1", "u"}, {{z, u, u}, {u, o, u}, {u, u, u}});
}

SpacePtr make_two() { return make_chain("two", {"0", "1"}, ChainRule::Max); }

SpacePtr make_point_space() { return make_table_space("point", {"*"}, {{0}}); }

SpacePtr make_meng_space(Rational low_length, Rational high_length, SemidirectRule rule) {
  auto base = make_chain("LH", {"L", "H"}, ChainRule::Max);
  auto low = make_interval("[0,L]", 0, std::move(low_length));
  auto high = make_interval("[0,H]", 0, std::move(high_length));
  std::vector<Glue> glue = {Glue{0, 1, Element::point({Rational(0)})}};
  return make_semidirect(rule == SemidirectRule::Transport ? "meng" : "meng-literal", base, {low, high},
                         std::move(glue), rule);
}

}  // namespace giry
