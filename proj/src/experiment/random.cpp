#include "pco/experiment.hpp"

namespace pco {

PhaseState random_state(std::size_t n, SplitMix64& rng) {
  std::vector<double> phases(n);
  for (double& x : phases) x = kTwoPi * rng.uniform();
  return make_state(std::move(phases));
}

PhaseState semicircle_state(std::size_t n, SplitMix64& rng) {
  const double spread = kPi * rng.uniform();
  const double lo = (kTwoPi - spread) * rng.uniform();
  std::vector<double> phases(n);
  for (double& x : phases) x = lo + spread * rng.uniform();
  return make_state(std::move(phases));
}

}  // namespace pco
