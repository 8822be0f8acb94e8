#include <algorithm>

#include "pco/analysis.hpp"
#include "pco/errors.hpp"

namespace pco {

std::vector<double> worst_case_gaps(std::size_t n, double l, WorstCase which) {
  if (n < kMinNodes) throw DomainError("a ring needs at least 4 nodes");
  switch (which) {
    case WorstCase::BiUbar: {
      // Fixed point of one firing followed by a one-step rotation: the gap
      // ahead of the firing node is delta/(1-l), the gap trailing the last
      // node of the round is (1-l)delta.
      const double d = solve_delta(n, l, DeltaCase::BiWorst);
      std::vector<double> g(n, d);
      g[0] = d / (1.0 - l);
      g[n - 2] = (1.0 - l) * d;
      return g;
    }
    case WorstCase::UniU1star: {
      const double d = solve_delta(n, l, DeltaCase::UniWorstU1);
      std::vector<double> g(n, d);
      g[0] = d / (1.0 - l);
      return g;
    }
    case WorstCase::UniU2uniform:
      if (!(l > 0.0 && l <= 1.0)) throw DomainError("coupling must lie in (0, 1]");
      return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }
  throw DomainError("unknown worst-case family");
}

PhaseState state_from_gaps(std::span<const double> gaps, GapOrdering ordering) {
  const std::size_t n = gaps.size();
  if (n < kMinNodes) throw DomainError("a ring needs at least 4 nodes");
  // Position k in firing order sits at 2pi * (1 - sum of the first k gaps).
  std::vector<double> by_fire(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    by_fire[k] = std::clamp(kTwoPi * (1.0 - acc), 0.0, kTwoPi);
    acc += gaps[k];
  }
  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t node = ordering == GapOrdering::Descending ? k : (n - k) % n;
    phases[node] = by_fire[k];
  }
  return make_state(std::move(phases));
}

PhaseState worst_case_state(std::size_t n, double l, WorstCase which, GapOrdering ordering) {
  if (which == WorstCase::UniU2uniform) {
    // Exact equal spacing; avoids accumulating the gap sum.
    std::vector<double> phases(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t node = ordering == GapOrdering::Descending ? k : (n - k) % n;
      phases[node] = kTwoPi * static_cast<double>(n - k) / static_cast<double>(n);
    }
    if (!(l > 0.0 && l <= 1.0)) throw DomainError("coupling must lie in (0, 1]");
    return make_state(std::move(phases));
  }
  const auto gaps = worst_case_gaps(n, l, which);
  return state_from_gaps(gaps, ordering);
}

PhaseState worst_case_state(std::size_t n, double l, WorstCase which) {
  return worst_case_state(
      n, l, which,
      which == WorstCase::UniU2uniform ? GapOrdering::Ascending : GapOrdering::Descending);
}

}  // namespace pco
