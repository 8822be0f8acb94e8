#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace pco {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A node counts as "at 2*pi" (inside the jump set) when 2*pi - x <= this.
inline constexpr double kFiringTolerance = 1e-9;

/// Smallest ring the model is defined for.
inline constexpr std::size_t kMinNodes = 4;

/// Zero-based node index. Text formats and the CLI use one-based indices.
using NodeIndex = std::size_t;

enum class Direction { Unidirectional, Bidirectional };
enum class TiePolicy { Advance, Delay };

std::string_view to_string(Direction d);
std::string_view to_string(TiePolicy p);

/// Phases of all oscillators plus the hybrid time (t, j).
struct PhaseState {
  std::vector<double> phases;
  double t = 0.0;
  std::int64_t j = 0;

  std::size_t size() const { return phases.size(); }

  /// Throws DomainError unless N >= 4, every phase is in [0, 2*pi], t >= 0 and j >= 0.
  void validate() const;
};

/// Builds a validated state.
PhaseState make_state(std::vector<double> phases, double t = 0.0, std::int64_t j = 0);

/// Ring of n nodes. Node i+1 senses node i (and node 1 senses node N); the
/// bidirectional ring adds the reversed edges. Every edge carries weight l.
class CycleTopology {
 public:
  CycleTopology(std::size_t n, Direction direction, double coupling);

  std::size_t n() const { return n_; }
  Direction direction() const { return direction_; }
  double coupling() const { return coupling_; }

  /// Nodes that update their phase when `firing` emits a pulse.
  std::vector<NodeIndex> receivers(NodeIndex firing) const;

  /// Adjacency entry a_{receiver,sender}: l when receiver senses sender, else 0.
  double weight(NodeIndex receiver, NodeIndex sender) const;

 private:
  std::size_t n_;
  Direction direction_;
  double coupling_;
};

/// The optimal advance-delay PRC, parameterised by how the set value at
/// x = pi is resolved and by a per-node refractory dead zone [0, r_i].
class PrcSpec {
 public:
  PrcSpec() = default;
  explicit PrcSpec(TiePolicy tie, std::vector<double> refractory = {});

  TiePolicy tie() const { return tie_; }

  /// Empty means no node is refractory.
  const std::vector<double>& refractory_lengths() const { return refractory_; }

  /// Refractory length of `node` (0 when none was configured).
  double refractory(NodeIndex node) const;

  /// Copy with node's refractory length set, growing the vector to n entries.
  PrcSpec with_refractory(std::size_t n, NodeIndex node, double length) const;

 private:
  TiePolicy tie_ = TiePolicy::Advance;
  std::vector<double> refractory_;
};

/// Shared natural frequency w > 0 in rad per unit time.
class NaturalFrequency {
 public:
  explicit NaturalFrequency(double w);
  double value() const { return w_; }

 private:
  double w_;
};

/// Shortest arc between each pair of ring neighbours; component i joins
/// node i and node i+1 (wrapping at N).
struct DistanceVector {
  std::vector<double> components;

  std::size_t size() const { return components.size(); }
  double length() const;
  double max() const;
};

}  // namespace pco
