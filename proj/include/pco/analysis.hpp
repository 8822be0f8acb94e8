#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pco/coupling.hpp"
#include "pco/types.hpp"

namespace pco {

/// Half-width of the band around 2*pi in which a cycle length counts as equal to 2*pi.
inline constexpr double kLengthTolerance = 1e-9;

DistanceVector distance_vector(const PhaseState& state);

/// Shortest arc between two phases on the circle.
double arc_distance(double a, double b);

struct SyncCheck {
  bool synchronized = false;
  double max_gap = 0.0;
};

/// Synchronized when every neighbour gap is below eps (0 and 2*pi coincide).
SyncCheck is_synchronized(const PhaseState& state, double eps);

enum class StateTag { LengthBelow2Pi, LengthAbove2Pi, At2PiOutsideU, InU1, InU2 };

std::string_view to_string(StateTag tag);

/// Result of classifying a state by cycle length and phase ordering.
///
/// `witness` names the node that certifies the class:
///   LengthBelow2Pi   a node i (not the max or min node) with |x_i - x_{i+1}| > pi, if any
///   LengthAbove2Pi,
///   At2PiOutsideU    a node whose firing strictly shortens the cycle, if one is found
///   InU1, InU2       the node holding the largest phase
/// `spread` is |x_max - x_min|.
struct StateClass {
  StateTag tag = StateTag::LengthBelow2Pi;
  std::optional<NodeIndex> witness;
  NodeIndex max_node = 0;
  NodeIndex min_node = 0;
  double spread = 0.0;
  double length = 0.0;
};

StateClass classify(const PhaseState& state);

/// x_i >= x_{i+1} for every i except the node with the smallest phase.
bool monotone_descending(const PhaseState& state);
/// x_i <= x_{i+1} for every i except the node with the largest phase.
bool monotone_ascending(const PhaseState& state);

/// Rotates the ring rigidly so node i sits at 2*pi and tests whether its two
/// successors are placed so that firing i strictly shortens the cycle:
/// x_{i+2} in [0, x_{i+1}) with x_{i+1} <= pi, or x_{i+2} in (x_{i+1}, 2pi]
/// with x_{i+1} >= pi, or |x_{i+2} - x_{i+1}| > pi.
bool length_decrease_condition(const PhaseState& state, NodeIndex i);

/// The same state rigidly rotated so that node i sits exactly at 2*pi.
PhaseState rotate_to_fire(const PhaseState& state, NodeIndex i);

/// Linear map V+ = C V describing how the distance vector changes when
/// `firing` jumps while the state is monotonically ordered with cycle length 2*pi.
struct TransitionMatrix {
  Eigen::MatrixXd entries;
  NodeIndex firing = 0;
  Direction direction = Direction::Bidirectional;
};

TransitionMatrix transition_matrix(NodeIndex firing, std::size_t n, double l, Direction direction);

/// Equilibrium direction gamma of the round map: the limit of the round
/// product P^k (P = C_{last} ... C_{first}) is gamma 1^T. `order` lists the
/// firing sequence of one round and must be a permutation of 0..n-1.
Eigen::VectorXd equilibrium_gamma(std::size_t n, double l, Direction direction,
                                  std::span<const NodeIndex> order);

/// 0, 1, ..., n-1.
std::vector<NodeIndex> ascending_order(std::size_t n);
/// 0, n-1, n-2, ..., 1.
std::vector<NodeIndex> descending_order(std::size_t n);

/// gamma sorted ascending with each entry labelled against the
/// closed-form clustered equilibrium ("delta", "(1-l)delta", "delta/(1-l)").
struct GammaReport {
  std::size_t n = 0;
  double l = 0.0;
  Direction direction = Direction::Bidirectional;
  bool ascending = true;
  DeltaCase delta_case = DeltaCase::BiWorst;
  double delta = 0.0;
  std::vector<double> sorted;
  std::vector<std::string> labels;
  double sum = 0.0;
  double max_entry = 0.0;
};

GammaReport gamma_report(std::size_t n, double l, Direction direction, bool ascending);
std::string format_gamma_report(const GammaReport& report);

enum class WorstCase { BiUbar, UniU1star, UniU2uniform };

/// Whether node 1 is followed by descending phases (firing order 1, 2, ..., N)
/// or by ascending phases (firing order 1, N, N-1, ..., 2).
enum class GapOrdering { Descending, Ascending };

/// Gaps of the worst-case clustered configuration in firing order, in units
/// of a full cycle (they sum to 1). Entry k is the gap between the k-th and
/// (k+1)-th node to fire.
std::vector<double> worst_case_gaps(std::size_t n, double l, WorstCase which);

/// Lays the worst-case gaps out on the ring with node 1 at 2*pi.
/// BiUbar and UniU1star default to descending phases, UniU2uniform to ascending.
PhaseState worst_case_state(std::size_t n, double l, WorstCase which);
PhaseState worst_case_state(std::size_t n, double l, WorstCase which, GapOrdering ordering);

/// Places gaps (firing order, cycle units) on the ring with node 1 at 2*pi.
PhaseState state_from_gaps(std::span<const double> gaps, GapOrdering ordering);

}  // namespace pco
