#include "giry/fields.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace giry {

SetField::SetField(std::size_t universe_size, std::vector<Subset> generators)
    : universe_size_(universe_size), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.size() != universe_size_) throw std::invalid_argument("generator size differs from the universe size");
  // Group points by their membership signature across the generators.
  std::map<std::vector<bool>, Subset> groups;
  std::vector<std::vector<bool>> order;
  for (std::size_t x = 0; x < universe_size_; ++x) {
    std::vector<bool> sig(generators_.size());
    for (std::size_t i = 0; i < generators_.size(); ++i) sig[i] = generators_[i].test(x);
    auto [it, inserted] = groups.try_emplace(sig, Subset(universe_size_));
    if (inserted) order.push_back(sig);
    it->second.set(x);
  }
  for (const auto& sig : order) atoms_.push_back(groups.at(sig));
}

bool SetField::contains(const Subset& s) const {
  if (s.size() != universe_size_) return false;
  for (const auto& a : atoms_)
    if (a.intersects(s) && !a.is_subset_of(s)) return false;
  return true;
}

mpz_class SetField::member_count() const {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, atoms_.size());
  return out;
}

std::vector<Subset> SetField::members() const {
  if (atoms_.size() > 20) throw std::length_error("too many atoms to list members");
  std::vector<Subset> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms_.size()); ++mask) {
    Subset s(universe_size_);
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if ((mask >> i) & 1) s |= atoms_[i];
    out.push_back(std::move(s));
  }
  return out;
}

bool SetField::subfield_of(const SetField& other) const {
  return std::all_of(atoms_.begin(), atoms_.end(), [&](const Subset& a) { return other.contains(a); });
}

bool SetField::same_members(const SetField& other) const { return subfield_of(other) && other.subfield_of(*this); }

SetField generate_field(std::size_t universe_size, std::vector<Subset> generators) {
  if (generators.size() > 16) throw std::invalid_argument("at most 16 generators");
  return SetField(universe_size, std::move(generators));
}

Subset make_subset(std::size_t universe_size, std::initializer_list<std::size_t> points) {
  Subset s(universe_size);
  for (auto p : points) s.set(p);
  return s;
}

SetField field_join(const SetField& a, const SetField& b) {
  if (a.universe_size() != b.universe_size()) throw std::invalid_argument("fields over different universes");
  auto gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return SetField(a.universe_size(), std::move(gens));
}

Rational dyadic_point(std::size_t index) {
  return make_rational(static_cast<long>(index + 1), static_cast<long>(kDyadicGrid));
}

Subset dyadic_tail(std::size_t n, std::size_t k) {
  Subset s(kDyadicGrid);
  const Rational cut = make_rational(static_cast<long>(k), 1L << n);
  for (std::size_t i = 0; i < kDyadicGrid; ++i)
    if (dyadic_point(i) > cut) s.set(i);
  return s;
}

SetField dyadic_field(std::size_t n) {
  if (n > 8) throw std::invalid_argument("dyadic depth is at most 8");
  std::vector<Subset> gens;
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) gens.push_back(dyadic_tail(n, k));
  return SetField(kDyadicGrid, std::move(gens));
}

SetField ev_block(std::span<const FinMeasure> measures, std::span<const Element> u, std::size_t n) {
  std::vector<Subset> gens;
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
    const Rational cut = make_rational(static_cast<long>(k), 1L << n);
    Subset s(measures.size());
    for (std::size_t j = 0; j < measures.size(); ++j)
      if (measure_eval(measures[j], u) > cut) s.set(j);
    gens.push_back(std::move(s));
  }
  return SetField(measures.size(), std::move(gens));
}

SetField ev_field(std::span<const FinMeasure> measures, const std::vector<std::vector<Element>>& us, std::size_t n) {
  SetField out(measures.size(), {});
  for (std::size_t i = 0; i < n && i < us.size(); ++i) out = field_join(out, ev_block(measures, us[i], n - i));
  return out;
}

std::vector<Element> subset_points(const Subset& s, std::span<const Element> universe) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < s.size() && i < universe.size(); ++i)
    if (s.test(i)) out.push_back(universe[i]);
  return out;
}

AgreementResult agreement_check(const FinMeasure& p, const FinMeasure& q, const SetField& field,
                                std::span<const Element> universe) {
  if (universe.size() != field.universe_size()) throw std::invalid_argument("universe does not match the field");
  for (const auto* m : {&p, &q})
    for (const auto& [x, w] : m->atoms())
      if (std::find(universe.begin(), universe.end(), x) == universe.end())
        throw std::invalid_argument("support point outside the field's universe");
  AgreementResult r;
  auto mass = [&](const FinMeasure& m, const Subset& s) {
    auto pts = subset_points(s, universe);
    return measure_eval(m, std::span<const Element>(pts));
  };
  for (const auto& g : field.generators())
    if (mass(p, g) != mass(q, g)) r.agree_on_generators = false;
  for (const auto& a : field.atoms()) {
    Rational pa = mass(p, a), qa = mass(q, a);
    if (pa != qa) {
      r.agree_on_field = false;
      r.distinguishing = a;
      r.p_mass = pa;
      r.q_mass = qa;
      break;
    }
  }
  return r;
}

std::string format_subset(const Subset& s, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.test(i)) continue;
    out += first ? "" : ",";
    first = false;
    out += i < labels.size() ? labels[i] : std::to_string(i);
  }
  return out + "}";
}

}  // namespace giry
