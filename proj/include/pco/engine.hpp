#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "pco/types.hpp"

namespace pco {

/// Order in which simultaneously firing nodes are processed within a cascade batch.
enum class CascadeOrder { Ascending, Descending };

enum class Verdict { Synchronized, ClusteredEquilibrium, HorizonExhausted };

std::string_view to_string(Verdict v);
std::string_view to_string(CascadeOrder o);

/// When to stop a run that has neither synchronized nor settled into a cycle.
struct Horizon {
  /// Firing rounds; a round is N individual jumps.
  std::int64_t rounds = 500;
  double max_time = std::numeric_limits<double>::infinity();
};

struct SimulationConfig {
  CycleTopology topology;
  PrcSpec prc;
  NaturalFrequency w;
  PhaseState initial;
  Horizon horizon{};
  double sync_tolerance = 1e-6;
  /// Ordinary-time stride of flow samples; 0 records only jumps and the
  /// states right before each jump batch.
  double record_every = 0.0;
  bool record = true;
  CascadeOrder order = CascadeOrder::Ascending;
  std::uint64_t seed = 0;
};

struct TrajectorySample {
  double t = 0.0;
  std::int64_t j = 0;
  std::vector<double> phases;
  /// Nodes that fired to produce this sample (empty during flow).
  std::vector<NodeIndex> fired;
};

/// Samples in hybrid-time order plus the configuration that produced them.
struct HybridTrajectory {
  std::vector<TrajectorySample> samples;
  std::optional<SimulationConfig> config;
};

/// Counters checked against the completeness guarantees of the model.
struct RunStats {
  std::int64_t cascades = 0;
  std::size_t max_jumps_per_instant = 0;
  double max_interfiring_time = 0.0;
};

struct RunOutcome {
  Verdict verdict = Verdict::HorizonExhausted;
  /// First ordinary time at which every neighbour gap is below the tolerance.
  std::optional<double> t_sync;
  PhaseState final_state;
  double final_max_gap = 0.0;
  /// Completed firing rounds (j / N) when the verdict was reached.
  std::int64_t rounds = 0;
  /// Jumps between two occurrences of the same post-cascade state.
  std::optional<std::int64_t> period_jumps;
  RunStats stats;
  HybridTrajectory trajectory;
};

/// Ordinary time until the leading node reaches 2*pi under the flow x' = w.
/// Throws PreconditionError if a node is already in the jump set.
double next_fire_time(const PhaseState& state, double w);

/// Rigid rotation of every phase by w * dt. Throws PreconditionError for a
/// negative dt and InvariantViolation if a phase would pass 2*pi.
PhaseState flow(const PhaseState& state, double dt, double w);

/// Called after every individual jump with the post-jump state and the node that fired.
using JumpObserver = std::function<void(const PhaseState&, NodeIndex)>;

struct CascadeResult {
  PhaseState state;
  std::vector<NodeIndex> fired;
};

/// Fires every node in the jump set, batch by batch, until none is left.
/// Receivers pushed to within the firing tolerance of 2*pi join the cascade.
/// Throws PreconditionError when no node is at 2*pi and InvariantViolation
/// if more than N jumps would share one instant.
CascadeResult resolve_cascade(const PhaseState& state, const CycleTopology& topology,
                              const PrcSpec& prc, CascadeOrder order = CascadeOrder::Ascending,
                              const JumpObserver& observer = {});

/// Alternates flows and cascades until the network synchronizes, revisits a
/// post-cascade state (a clustered equilibrium or periodic orbit), or the
/// horizon runs out.
RunOutcome run(const SimulationConfig& config);

}  // namespace pco
