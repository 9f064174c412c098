#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "giry/affine.hpp"
#include "giry/measure.hpp"
#include "giry/metric.hpp"
#include "giry/structure.hpp"

namespace giry {

enum class Provenance { GeometricBarycenter, DiscreteMin, DiscreteMax, MixedConditional, UserSupplied };
std::string_view to_string(Provenance p);

/// A candidate structure map GX → X.
struct AlgebraMap {
  SpacePtr space;
  std::function<Element(const FinMeasure&)> rule;
  Provenance provenance = Provenance::UserSupplied;

  Element operator()(const FinMeasure& p) const { return rule(p); }
};

AlgebraMap user_algebra(SpacePtr space, std::function<Element(const FinMeasure&)> rule);

/// Why no structure map exists, with the evidence found.
struct Rejection {
  /// "poset-not-total", "compat-violation" or "not-a-convex-space".
  std::string condition;
  /// The space (possibly a factor or branch) where the condition failed.
  SpacePtr space;
  std::optional<PosetWitness> poset;
  std::optional<CompatWitness> compat;
  std::optional<RegroupingWitness> regrouping;
};

using BuildResult = std::variant<AlgebraMap, Rejection>;

/// Barycenters on boxes and simplices (with +∞ absorbing on extended lines),
/// the top of the support in the induced order on totally ordered discrete
/// spaces, factorwise on products, and on semidirect products the algebra of
/// the join branch after moving every atom there through the glue maps.
///
/// Non-discrete spaces must pass the two-point compatibility check with `d`.
/// Finite discrete spaces must be totally ordered; a compatibility failure is
/// attached to such a rejection as further evidence.
BuildResult build_algebra(const SpacePtr& space, const ExtMetric& d, std::size_t budget = 500,
                          std::uint64_t seed = 1);

enum class Verdict { Pass, SampledPass, Fail, Rejected };
std::string_view to_string(Verdict v);
inline bool passed(Verdict v) { return v == Verdict::Pass || v == Verdict::SampledPass; }

struct CheckBudget {
  /// Random measures / points / quadruples per check.
  std::size_t samples = 500;
  /// Random meta-measures for the multiplication law.
  std::size_t meta = 300;
  std::uint64_t seed = 1;
};

struct UnitLawResult {
  Verdict verdict = Verdict::Pass;
  std::size_t checked = 0;
  std::optional<Element> point, image;
};

struct MultLawResult {
  Verdict verdict = Verdict::SampledPass;
  std::size_t checked = 0;
  std::optional<MetaMeasure> witness;
  /// h(μ Q) and h(G h Q).
  std::optional<Element> flattened, pushed;
};

struct CoseparatorResult {
  Verdict verdict = Verdict::SampledPass;
  std::size_t checked = 0;
  std::size_t infinite_cases = 0;
  std::optional<FinMeasure> measure;
  std::string map_name;
  /// m(h(P)) and E_P(m).
  std::optional<ExtValue> at_image, expectation;
};

struct SupportResult {
  Verdict verdict = Verdict::SampledPass;
  std::size_t checked = 0;
  std::optional<FinMeasure> measure;
  std::optional<Element> image;
};

struct InducedResult {
  Verdict verdict = Verdict::SampledPass;
  std::size_t checked = 0;
  std::vector<Element> points;
  std::vector<Rational> weights;
  /// h(Σ pᵢ δ_xᵢ) and the native fold Σ pᵢ xᵢ.
  std::optional<Element> algebra_value, native_value;
};

/// h(δ_a) = a: every point of a finite carrier, else landmarks plus samples.
UnitLawResult verify_unit_law(const AlgebraMap& h, const CheckBudget& budget = {});
/// h(μ Q) = h(G h Q) on random meta-measures with ≤5 outer and ≤5 inner atoms.
MultLawResult verify_mult_law(const AlgebraMap& h, const CheckBudget& budget = {});
/// m(h(P)) = E_P(m) for every map on random P.
CoseparatorResult verify_coseparator_property(const AlgebraMap& h, std::span<const AffineMap> maps,
                                              const CheckBudget& budget = {});
/// The discrete part of h(P) lies in the discrete part of Supp(P). Subsets
/// of small finite carriers with uniform weights come first, then samples.
SupportResult support_condition_check(const AlgebraMap& h, const CheckBudget& budget = {});
/// h(Σ pᵢ δ_xᵢ) equals the native combination on random finite families.
InducedResult induced_structure_check(const AlgebraMap& h, const CheckBudget& budget = {});

/// Discrete coordinates of a point: labels of finite discrete factors, the
/// branch of a semidirect point, and finite-or-infinite on extended lines.
std::vector<Element> discrete_shadows(const ConvexSpace& space, const Element& e);

struct AlgebraReport {
  SpacePtr space;
  std::string metric;
  std::optional<Provenance> provenance;
  std::optional<Rejection> rejection;
  std::optional<UnitLawResult> unit_law;
  std::optional<MultLawResult> mult_law;
  std::optional<CoseparatorResult> coseparator_law;
  /// Only for spaces with a discrete part.
  std::optional<SupportResult> support_condition;
  std::optional<InducedResult> induced_structure;
  CompatResult compat;

  Verdict overall() const;
};

/// Builds the algebra and runs every applicable check on it.
AlgebraReport algebra_report(const SpacePtr& space, const ExtMetric& d, const CheckBudget& budget = {});
/// Runs every check on a supplied candidate map.
AlgebraReport algebra_report(const AlgebraMap& h, const ExtMetric& d, const CheckBudget& budget = {});

/// The three-point space C and the evidence that it carries no structure map.
struct CounterexampleReport {
  SpacePtr space;
  std::vector<Ideal> ideals;
  CoseparationResult coseparation;
  CompatResult compat;
  /// For the native-fold candidate h(P) = Σ pᵢ xᵢ computed in C.
  SupportResult support;
  DiscretePoset poset;
  BuildResult build;
};

CounterexampleReport counterexample_C(const CheckBudget& budget = {});

}  // namespace giry
