#pragma once

#include <cstddef>

#include "pco/types.hpp"

namespace pco {

/// Coupling strength above which every initial condition synchronizes.
///   bidirectional:  N/2 - sqrt(N^2 - 4(N-2))/2
///   unidirectional: (N-2)/(N-1)   (one node with refractory length pi)
double critical_coupling(std::size_t n, Direction direction);

/// Which linear equation fixes the common gap size delta of a clustered
/// equilibrium (all gaps in units of a full cycle, summing to 1).
enum class DeltaCase {
  BiWorst,            ///< (N-2)d + (1-l)d + d/(1-l) = 1
  UniWorstU1,         ///< (N-1)d + d/(1-l) = 1
  UniU2NoRefractory,  ///< (N-1)d + (1-l)d = 1
};

/// Unique positive delta solving the selected equation. l = 1 is rejected
/// for the two worst-case constructions: their equilibrium degenerates to a
/// single non-zero gap there.
double solve_delta(std::size_t n, double l, DeltaCase which);

/// Left-hand side coefficient c with c * delta = 1 for the given case.
double delta_coefficient(std::size_t n, double l, DeltaCase which);

}  // namespace pco
