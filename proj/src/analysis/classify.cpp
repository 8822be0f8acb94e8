#include <algorithm>
#include <cmath>

#include "pco/analysis.hpp"
#include "pco/errors.hpp"

namespace pco {
namespace {

// Phases closer than this are treated as tied when checking the ordering.
constexpr double kOrderTolerance = 1e-9;

std::size_t count_ascents(const std::vector<double>& x) {
  std::size_t ascents = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[(i + 1) % x.size()] > x[i] + kOrderTolerance) ++ascents;
  }
  return ascents;
}

std::size_t count_descents(const std::vector<double>& x) {
  std::size_t descents = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[(i + 1) % x.size()] < x[i] - kOrderTolerance) ++descents;
  }
  return descents;
}

}  // namespace

std::string_view to_string(StateTag tag) {
  switch (tag) {
    case StateTag::LengthBelow2Pi:
      return "length_below_2pi";
    case StateTag::LengthAbove2Pi:
      return "length_above_2pi";
    case StateTag::At2PiOutsideU:
      return "at_2pi_outside_u";
    case StateTag::InU1:
      return "in_u1";
    case StateTag::InU2:
      return "in_u2";
  }
  return "unknown";
}

// A cyclic sequence with at most one strict ascent is non-increasing
// everywhere except at its minimum, which is exactly the U1 ordering.
bool monotone_descending(const PhaseState& state) { return count_ascents(state.phases) <= 1; }

bool monotone_ascending(const PhaseState& state) { return count_descents(state.phases) <= 1; }

PhaseState rotate_to_fire(const PhaseState& state, NodeIndex i) {
  if (i >= state.size()) throw DomainError("node index out of range");
  PhaseState out = state;
  const double shift = kTwoPi - state.phases[i];
  for (std::size_t k = 0; k < out.size(); ++k) {
    double y = state.phases[k] + shift;
    if (y > kTwoPi) y -= kTwoPi;
    out.phases[k] = std::clamp(y, 0.0, kTwoPi);
  }
  out.phases[i] = kTwoPi;
  return out;
}

bool length_decrease_condition(const PhaseState& state, NodeIndex i) {
  const std::size_t n = state.size();
  const PhaseState y = rotate_to_fire(state, i);
  const double a = y.phases[(i + 1) % n];
  const double b = y.phases[(i + 2) % n];
  return (b >= 0.0 && b < a && a <= kPi) || (b > a && b <= kTwoPi && a >= kPi) ||
         std::abs(b - a) > kPi;
}

StateClass classify(const PhaseState& state) {
  const auto& x = state.phases;
  const std::size_t n = x.size();
  if (n < kMinNodes) throw DomainError("a ring needs at least 4 nodes");

  StateClass c;
  c.max_node = static_cast<NodeIndex>(std::max_element(x.begin(), x.end()) - x.begin());
  c.min_node = static_cast<NodeIndex>(std::min_element(x.begin(), x.end()) - x.begin());
  c.spread = x[c.max_node] - x[c.min_node];
  c.length = distance_vector(state).length();

  if (c.length < kTwoPi - kLengthTolerance) {
    c.tag = StateTag::LengthBelow2Pi;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c.max_node || i == c.min_node) continue;
      if (std::abs(x[i] - x[(i + 1) % n]) > kPi) {
        c.witness = i;
        break;
      }
    }
    return c;
  }

  const bool above = c.length > kTwoPi + kLengthTolerance;
  if (!above) {
    if (monotone_descending(state)) {
      c.tag = StateTag::InU1;
      c.witness = c.max_node;
      return c;
    }
    if (monotone_ascending(state)) {
      c.tag = StateTag::InU2;
      c.witness = c.max_node;
      return c;
    }
  }
  c.tag = above ? StateTag::LengthAbove2Pi : StateTag::At2PiOutsideU;
  for (std::size_t i = 0; i < n; ++i) {
    if (length_decrease_condition(state, i)) {
      c.witness = i;
      break;
    }
  }
  return c;
}

}  // namespace pco
