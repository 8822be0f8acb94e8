#include "pco/coupling.hpp"

#include <cmath>
#include <string>

#include "pco/errors.hpp"

namespace pco {

double critical_coupling(std::size_t n, Direction direction) {
  if (n < kMinNodes) throw DomainError("critical coupling needs n >= 4, got " + std::to_string(n));
  const double N = static_cast<double>(n);
  if (direction == Direction::Bidirectional) {
    return N / 2.0 - std::sqrt(N * N - 4.0 * (N - 2.0)) / 2.0;
  }
  return (N - 2.0) / (N - 1.0);
}

double delta_coefficient(std::size_t n, double l, DeltaCase which) {
  if (n < kMinNodes) throw DomainError("delta equations need n >= 4");
  if (!(l > 0.0 && l <= 1.0)) throw DomainError("coupling must lie in (0, 1]");
  if (l == 1.0 && which != DeltaCase::UniU2NoRefractory) {
    throw DomainError("worst-case delta equation is degenerate at l = 1");
  }
  const double N = static_cast<double>(n);
  const double keep = 1.0 - l;
  switch (which) {
    case DeltaCase::BiWorst:
      return (N - 2.0) + keep + 1.0 / keep;
    case DeltaCase::UniWorstU1:
      return (N - 1.0) + 1.0 / keep;
    case DeltaCase::UniU2NoRefractory:
      return (N - 1.0) + keep;
  }
  throw DomainError("unknown delta case");
}

double solve_delta(std::size_t n, double l, DeltaCase which) {
  return 1.0 / delta_coefficient(n, l, which);
}

}  // namespace pco
