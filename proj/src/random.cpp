#include "giry/random.hpp"

#include "giry/metric.hpp"

namespace giry {

namespace {

template <class T, class Draw>
Dist<T> random_dist(std::mt19937_64& rng, std::size_t max_atoms, Draw&& draw) {
  std::uniform_int_distribution<std::size_t> count(1, max_atoms);
  std::size_t k = count(rng);
  auto w = random_weights(rng, k);
  std::vector<typename Dist<T>::Atom> atoms;
  for (std::size_t i = 0; i < k; ++i) atoms.emplace_back(draw(), w[i]);
  return Dist<T>(std::move(atoms));
}

}  // namespace

FinMeasure random_measure(const ConvexSpace& space, std::mt19937_64& rng, std::size_t max_atoms) {
  return random_dist<Element>(rng, max_atoms, [&] { return space.sample(rng); });
}

MetaMeasure random_meta(const ConvexSpace& space, std::mt19937_64& rng, std::size_t outer, std::size_t inner) {
  return random_dist<FinMeasure>(rng, outer, [&] { return random_measure(space, rng, inner); });
}

MetaMeasure3 random_meta3(const ConvexSpace& space, std::mt19937_64& rng, std::size_t atoms) {
  return random_dist<MetaMeasure>(rng, atoms, [&] { return random_meta(space, rng, atoms, atoms); });
}

}  // namespace giry
