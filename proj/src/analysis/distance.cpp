#include <cmath>

#include "pco/analysis.hpp"
#include "pco/errors.hpp"

namespace pco {

double arc_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

DistanceVector distance_vector(const PhaseState& state) {
  const std::size_t n = state.size();
  DistanceVector v;
  v.components.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.components[i] = arc_distance(state.phases[i], state.phases[(i + 1) % n]);
  }
  return v;
}

SyncCheck is_synchronized(const PhaseState& state, double eps) {
  if (!(eps > 0.0)) throw DomainError("synchronization tolerance must be positive");
  const double gap = distance_vector(state).max();
  return {gap < eps, gap};
}

}  // namespace pco
