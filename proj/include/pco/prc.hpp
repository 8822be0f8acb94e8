#pragma once

#include "pco/types.hpp"

namespace pco {

/// Phase shift Q(x) applied to `node` when it receives a pulse at phase x.
///
/// Q(x) = 2*pi - x for x > pi, -x for x < pi and +-pi at x = pi (chosen by the
/// tie policy). Inside the node's refractory zone [0, r] the shift is 0.
/// Throws DomainError when x is outside [0, 2*pi].
double evaluate_prc(double phase, const PrcSpec& prc, NodeIndex node);

/// Linear function with slope one clipped to [0, 2*pi].
constexpr double saturate(double x) {
  return x < 0.0 ? 0.0 : (x > kTwoPi ? kTwoPi : x);
}

/// True when the phase is inside the jump set of its node.
constexpr bool at_threshold(double phase) { return kTwoPi - phase <= kFiringTolerance; }

/// Jump map for a single firing node.
///
/// The firing node resets to 0, every node sensing it moves to
/// sat(x + l * Q(x)), the jump counter advances and t is unchanged. Phases a
/// receiver is pushed to are returned as computed; the engine snaps
/// receivers that land within the firing tolerance of 2*pi.
/// Throws PreconditionError when the firing node is not at 2*pi.
PhaseState apply_jump(const PhaseState& state, NodeIndex firing, const CycleTopology& topology,
                      const PrcSpec& prc);

}  // namespace pco
