#pragma once

#include <random>

#include "giry/measure.hpp"

namespace giry {

/// A measure with 1..max_atoms atoms drawn with ConvexSpace::sample
/// (duplicates merge) and small-integer weights.
FinMeasure random_measure(const ConvexSpace& space, std::mt19937_64& rng, std::size_t max_atoms = 5);

/// 1..outer inner measures, each with 1..inner atoms.
MetaMeasure random_meta(const ConvexSpace& space, std::mt19937_64& rng, std::size_t outer = 5,
                        std::size_t inner = 5);

/// Three-level tower with up to `atoms` atoms per level.
MetaMeasure3 random_meta3(const ConvexSpace& space, std::mt19937_64& rng, std::size_t atoms = 5);

}  // namespace giry
