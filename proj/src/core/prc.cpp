#include "pco/prc.hpp"

#include <string>

#include "pco/errors.hpp"

namespace pco {

double evaluate_prc(double phase, const PrcSpec& prc, NodeIndex node) {
  if (!(phase >= 0.0 && phase <= kTwoPi)) {
    throw DomainError("PRC evaluated outside [0, 2pi]: " + std::to_string(phase));
  }
  const auto& refractory = prc.refractory_lengths();
  if (!refractory.empty() && node >= refractory.size()) {
    throw DomainError("node index out of range for refractory vector");
  }
  // The dead zone is closed, so phase == r is ignored as well.
  if (phase <= prc.refractory(node)) return 0.0;
  if (phase > kPi) return kTwoPi - phase;
  if (phase < kPi) return -phase;
  return prc.tie() == TiePolicy::Advance ? kPi : -kPi;
}

PhaseState apply_jump(const PhaseState& state, NodeIndex firing, const CycleTopology& topology,
                      const PrcSpec& prc) {
  if (state.size() != topology.n()) throw DomainError("state size does not match topology");
  if (firing >= state.size()) throw DomainError("firing node index out of range");
  if (!at_threshold(state.phases[firing])) {
    throw PreconditionError("node " + std::to_string(firing + 1) +
                            " fired below threshold: " + std::to_string(state.phases[firing]));
  }
  PhaseState next = state;
  next.phases[firing] = 0.0;
  for (NodeIndex r : topology.receivers(firing)) {
    const double x = state.phases[r];
    const double a = topology.weight(r, firing);
    next.phases[r] = saturate(x + a * evaluate_prc(x, prc, r));
  }
  next.j += 1;
  return next;
}

}  // namespace pco
