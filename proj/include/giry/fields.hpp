#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <gmpxx.h>

#include "giry/measure.hpp"

namespace giry {

/// A subset of a finite universe {0, …, n-1}.
using Subset = boost::dynamic_bitset<>;

/// The Boolean algebra of subsets generated by a list of subsets, held as
/// its atoms: the nonempty sets ⋂ Sᵢ* with each Sᵢ* ∈ {Sᵢ, Sᵢᶜ}.
class SetField {
 public:
  /// Throws std::invalid_argument if a generator has the wrong size.
  SetField(std::size_t universe_size, std::vector<Subset> generators);

  std::size_t universe_size() const { return universe_size_; }
  const std::vector<Subset>& generators() const { return generators_; }
  /// Atoms ordered by their smallest point.
  const std::vector<Subset>& atoms() const { return atoms_; }

  /// True iff `s` is a union of atoms.
  bool contains(const Subset& s) const;
  /// 2^|atoms|.
  mpz_class member_count() const;
  /// Every member, as unions of atoms in binary-counting order. Throws
  /// std::length_error beyond 20 atoms.
  std::vector<Subset> members() const;
  /// Every member of this field is a member of `other`.
  bool subfield_of(const SetField& other) const;
  /// Same member sets (atom partitions coincide).
  bool same_members(const SetField& other) const;

 private:
  std::size_t universe_size_;
  std::vector<Subset> generators_;
  std::vector<Subset> atoms_;
};

/// Bounded front end: at most 16 generators.
SetField generate_field(std::size_t universe_size, std::vector<Subset> generators);

/// Subset from a list of point indices.
Subset make_subset(std::size_t universe_size, std::initializer_list<std::size_t> points);

/// Field generated by both generator lists. Throws on universe mismatch.
SetField field_join(const SetField& a, const SetField& b);

/// Grid universe {k/256 : k = 1..256} for the dyadic fields.
constexpr std::size_t kDyadicGrid = 256;
/// Rational value of grid point `index` (index k-1 holds k/256).
Rational dyadic_point(std::size_t index);
/// {x in grid : x > k/2ⁿ}.
Subset dyadic_tail(std::size_t n, std::size_t k);
/// Field generated by the tails (k/2ⁿ, 1] for k = 0..2ⁿ-1. Throws for n > 8.
SetField dyadic_field(std::size_t n);

/// G_{i,n}: on the universe of `measures`, the field generated by
/// {P : P(Uᵢ) > k/2ⁿ} for k = 0..2ⁿ-1.
SetField ev_block(std::span<const FinMeasure> measures, std::span<const Element> u, std::size_t n);

/// 𝔾_n = G_{0,n} ⋁ G_{1,n-1} ⋁ … ⋁ G_{n-1,1}, using the first min(n, |Us|) sets.
SetField ev_field(std::span<const FinMeasure> measures, const std::vector<std::vector<Element>>& us, std::size_t n);

/// The members of a field over a list of points, as point sets.
std::vector<Element> subset_points(const Subset& s, std::span<const Element> universe);

struct AgreementResult {
  bool agree_on_generators = true;
  bool agree_on_field = true;
  /// A member V with P(V) ≠ Q(V), taken among the atoms.
  std::optional<Subset> distinguishing;
  Rational p_mass, q_mass;
};

/// Compares P and Q on the field over `universe`. Agreement on every atom is
/// agreement on every member. Throws std::invalid_argument if a support point
/// is outside the universe.
AgreementResult agreement_check(const FinMeasure& p, const FinMeasure& q, const SetField& field,
                                std::span<const Element> universe);

std::string format_subset(const Subset& s, const std::vector<std::string>& labels);

}  // namespace giry
