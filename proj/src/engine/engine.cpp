#include "pco/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include <fmt/format.h>

#include "pco/analysis.hpp"
#include "pco/errors.hpp"
#include "pco/prc.hpp"

namespace pco {
namespace {

// Two post-cascade states match when every phase agrees to this on the circle.
constexpr double kCycleTolerance = 1e-12;

bool same_configuration(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (arc_distance(a[i], b[i]) > kCycleTolerance) return false;
  }
  return true;
}

void check_phases(const PhaseState& s, std::string_view where) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s.phases[i];
    if (!(x >= 0.0 && x <= kTwoPi)) {
      throw InvariantViolation(
          fmt::format("phase of node {} left [0, 2pi] after {}: {:.17g}", i + 1, where, x));
    }
  }
}

void validate(const SimulationConfig& c) {
  c.initial.validate();
  if (c.initial.size() != c.topology.n()) {
    throw DomainError("initial state size does not match the ring size");
  }
  const auto& r = c.prc.refractory_lengths();
  if (!r.empty() && r.size() != c.topology.n()) {
    throw DomainError("refractory vector must have one entry per node");
  }
  if (!(c.sync_tolerance > 0.0)) throw DomainError("sync tolerance must be positive");
  if (c.horizon.rounds <= 0) throw DomainError("horizon must allow at least one round");
  if (!(c.horizon.max_time > 0.0)) throw DomainError("time horizon must be positive");
  if (!(c.record_every >= 0.0)) throw DomainError("record stride must be nonnegative");
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Synchronized:
      return "synchronized";
    case Verdict::ClusteredEquilibrium:
      return "clustered_equilibrium";
    case Verdict::HorizonExhausted:
      return "horizon_exhausted";
  }
  return "unknown";
}

std::string_view to_string(CascadeOrder o) {
  return o == CascadeOrder::Ascending ? "ascending" : "descending";
}

double next_fire_time(const PhaseState& state, double w) {
  if (!(w > 0.0)) throw DomainError("natural frequency must be positive");
  const double lead = *std::max_element(state.phases.begin(), state.phases.end());
  if (at_threshold(lead)) throw PreconditionError("a node is already in the jump set");
  return (kTwoPi - lead) / w;
}

PhaseState flow(const PhaseState& state, double dt, double w) {
  if (!(dt >= 0.0)) throw PreconditionError("flow duration must be nonnegative");
  PhaseState next = state;
  const double shift = w * dt;
  for (double& x : next.phases) {
    x += shift;
    if (x > kTwoPi) {
      if (x - kTwoPi > kFiringTolerance) {
        throw InvariantViolation(fmt::format("flow overshot 2pi by {:.3g}", x - kTwoPi));
      }
      x = kTwoPi;
    }
  }
  next.t += dt;
  return next;
}

CascadeResult resolve_cascade(const PhaseState& state, const CycleTopology& topology,
                              const PrcSpec& prc, CascadeOrder order,
                              const JumpObserver& observer) {
  const std::size_t n = state.size();
  CascadeResult out{state, {}};
  std::vector<NodeIndex> batch;
  for (;;) {
    batch.clear();
    for (NodeIndex i = 0; i < n; ++i) {
      if (at_threshold(out.state.phases[i])) batch.push_back(i);
    }
    if (batch.empty()) break;
    if (order == CascadeOrder::Descending) std::reverse(batch.begin(), batch.end());

    for (NodeIndex node : batch) {
      if (out.fired.size() == n) {
        throw InvariantViolation(
            fmt::format("more than {} jumps at t = {:.17g}", n, out.state.t));
      }
      out.state.phases[node] = kTwoPi;
      out.state = apply_jump(out.state, node, topology, prc);
      for (NodeIndex r : topology.receivers(node)) {
        if (at_threshold(out.state.phases[r])) out.state.phases[r] = kTwoPi;
      }
      out.fired.push_back(node);
      if (observer) observer(out.state, node);
    }
  }
  if (out.fired.empty()) throw PreconditionError("cascade requested with no node at 2pi");
  return out;
}

RunOutcome run(const SimulationConfig& config) {
  validate(config);
  const std::size_t n = config.topology.n();
  const double w = config.w.value();
  const double period = kTwoPi / w;
  const std::int64_t max_jumps = config.horizon.rounds * static_cast<std::int64_t>(n);
  const std::int64_t window = static_cast<std::int64_t>(n * n);

  RunOutcome outcome;
  auto& samples = outcome.trajectory.samples;
  const auto record = [&](const PhaseState& s, std::vector<NodeIndex> fired) {
    if (config.record) samples.push_back({s.t, s.j, s.phases, std::move(fired)});
  };
  const JumpObserver on_jump = [&](const PhaseState& s, NodeIndex node) {
    check_phases(s, "a jump");
    record(s, {node});
  };

  PhaseState state = config.initial;
  record(state, {});

  double last_batch_time = state.t;
  const auto cascade = [&] {
    auto result = resolve_cascade(state, config.topology, config.prc, config.order, on_jump);
    state = std::move(result.state);
    auto& st = outcome.stats;
    st.cascades += 1;
    st.max_jumps_per_instant = std::max(st.max_jumps_per_instant, result.fired.size());
    last_batch_time = state.t;
  };

  if (std::any_of(state.phases.begin(), state.phases.end(), at_threshold)) cascade();

  struct Snapshot {
    std::int64_t j;
    std::vector<double> phases;
  };
  std::deque<Snapshot> history;

  for (;;) {
    const SyncCheck sync = is_synchronized(state, config.sync_tolerance);
    outcome.final_max_gap = sync.max_gap;
    if (sync.synchronized) {
      outcome.verdict = Verdict::Synchronized;
      outcome.t_sync = state.t;
      break;
    }

    auto phases = state.phases;
    const auto repeat = std::find_if(history.rbegin(), history.rend(), [&](const Snapshot& s) {
      return s.j < state.j && same_configuration(s.phases, phases);
    });
    if (repeat != history.rend()) {
      outcome.verdict = Verdict::ClusteredEquilibrium;
      outcome.period_jumps = state.j - repeat->j;
      break;
    }
    history.push_back({state.j, std::move(phases)});
    while (!history.empty() && history.front().j < state.j - window) history.pop_front();

    if (state.j >= max_jumps || state.t >= config.horizon.max_time) {
      outcome.verdict = Verdict::HorizonExhausted;
      break;
    }

    const double dt = next_fire_time(state, w);
    const double fire_at = state.t + dt;
    if (fire_at - last_batch_time > period * (1.0 + 1e-12)) {
      throw InvariantViolation(fmt::format("no jump for {:.17g} time units (period {:.17g})",
                                           fire_at - last_batch_time, period));
    }
    outcome.stats.max_interfiring_time =
        std::max(outcome.stats.max_interfiring_time, fire_at - last_batch_time);

    if (config.record && config.record_every > 0.0) {
      const double stride = config.record_every;
      double tk = (std::floor(state.t / stride) + 1.0) * stride;
      for (; tk < fire_at; tk += stride) record(flow(state, tk - state.t, w), {});
    }

    if (fire_at > config.horizon.max_time) {
      state = flow(state, config.horizon.max_time - state.t, w);
      outcome.verdict = Verdict::HorizonExhausted;
      break;
    }

    state = flow(state, dt, w);
    check_phases(state, "a flow");
    if (std::none_of(state.phases.begin(), state.phases.end(), at_threshold)) {
      throw InvariantViolation("flow to the next firing left every node below threshold");
    }
    record(state, {});
    cascade();
  }

  outcome.rounds = state.j / static_cast<std::int64_t>(n);
  outcome.final_state = std::move(state);
  outcome.trajectory.config = config;
  return outcome;
}

}  // namespace pco
