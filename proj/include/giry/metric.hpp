#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "giry/space.hpp"

namespace giry {

/// An extended metric: values in [0, +∞].
struct ExtMetric {
  std::string name;
  std::function<ExtValue(const Element&, const Element&)> distance;
  /// Factor or branch metrics for composite spaces; empty otherwise.
  std::vector<ExtMetric> parts;

  ExtValue operator()(const Element& x, const Element& y) const { return distance(x, y); }
};

/// Σ|xᵢ - yᵢ| on coordinate vectors.
ExtMetric l1_metric();
/// max|xᵢ - yᵢ| on coordinate vectors.
ExtMetric linf_metric();
/// 0 on the diagonal, 1 elsewhere.
ExtMetric discrete_metric();
/// 0 on the diagonal, +∞ elsewhere.
ExtMetric discrete_ext_metric();
/// |i - j| on label indices.
ExtMetric order_metric();
/// |x - y| on R ∪ {+∞}, with d(∞, ∞) = 0 and d(∞, r) = ∞.
ExtMetric ext_abs_metric();
/// Lookup table over label indices; must be square.
ExtMetric matrix_metric(std::vector<std::vector<ExtValue>> table);
/// Sum of factor distances on tuples.
ExtMetric sum_metric(std::vector<ExtMetric> factors);
/// Branch metric within a branch, +∞ across branches.
ExtMetric branch_metric(std::vector<ExtMetric> branches);

/// A sensible metric for every carrier: l1, ext-abs, discrete, and the
/// composite forms for products and semidirect products.
ExtMetric default_metric(const ConvexSpace& space);

/// Builds a metric from its file-format name. Composite names ("sum",
/// "branch") use the default metric of each factor or branch.
ExtMetric metric_by_name(std::string_view name, const ConvexSpace& space);

struct MetricAxiomResult {
  bool ok = true;
  std::string failed;
  std::vector<Element> witness;
};

/// d(x,x) = 0, nonnegativity, symmetry and the triangle inequality over
/// landmarks (all triples on finite carriers) plus `budget` samples.
MetricAxiomResult check_metric_axioms(const ConvexSpace& space, const ExtMetric& d, std::size_t budget = 500,
                                      std::uint64_t seed = 1);

struct CompatWitness {
  Rational p;
  /// (x, y, z) for the two-point form, (x, x', y, y') for the four-point form.
  std::vector<Element> points;
  ExtValue lhs, rhs;
};

struct CompatResult {
  bool pass = true;
  bool exhaustive = true;
  std::size_t checked = 0;
  std::optional<CompatWitness> witness;
};

/// d(p·x + (1-p)·z, p·y + (1-p)·z) ≤ p·d(x, y).
CompatResult compat_check_2pt(const ConvexSpace& space, const ExtMetric& d, std::size_t budget = 500,
                              std::uint64_t seed = 1, const std::vector<Rational>& grid = default_p_grid());

/// d(p·x + (1-p)·x', p·y + (1-p)·y') ≤ p·d(x, y) + (1-p)·d(x', y').
CompatResult compat_check_4pt(const ConvexSpace& space, const ExtMetric& d, std::size_t budget = 500,
                              std::uint64_t seed = 1, const std::vector<Rational>& grid = default_p_grid());

struct EquivReport {
  CompatResult two_point, four_point;
  bool agree() const { return two_point.pass == four_point.pass; }
};

EquivReport equiv_check(const ConvexSpace& space, const ExtMetric& d, std::size_t budget = 500,
                        std::uint64_t seed = 1, const std::vector<Rational>& grid = default_p_grid());

struct DiagramWitness {
  std::vector<Element> xs, ys;
  std::vector<Rational> weights;
  /// Σ pᵢ d(xᵢ, yᵢ) and d(Σ pᵢ xᵢ, Σ pᵢ yᵢ).
  ExtValue coupling_cost, combined_distance;
};

struct DiagramResult {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<DiagramWitness> witness;
};

/// For random simple couplings Σ pᵢ δ_(xᵢ,yᵢ): d(Σ pᵢ xᵢ, Σ pᵢ yᵢ) ≤ Σ pᵢ d(xᵢ, yᵢ).
DiagramResult coupling_bound_check(const ConvexSpace& space, const ExtMetric& d, std::size_t budget = 500,
                                   std::uint64_t seed = 1);

/// `atoms` positive weights with small integer numerators, summing to 1.
WeightVector random_weights(std::mt19937_64& rng, std::size_t atoms);

}  // namespace giry
