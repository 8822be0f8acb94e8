#include "pco/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pco/errors.hpp"

namespace pco {

std::string_view to_string(Direction d) {
  return d == Direction::Unidirectional ? "uni" : "bi";
}

std::string_view to_string(TiePolicy p) { return p == TiePolicy::Advance ? "advance" : "delay"; }

void PhaseState::validate() const {
  if (phases.size() < kMinNodes) {
    throw DomainError("a ring needs at least 4 nodes, got " + std::to_string(phases.size()));
  }
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double x = phases[i];
    if (!(x >= 0.0 && x <= kTwoPi)) {
      throw DomainError("phase of node " + std::to_string(i + 1) + " outside [0, 2pi]: " +
                        std::to_string(x));
    }
  }
  if (!(t >= 0.0) || j < 0) throw DomainError("hybrid time must be nonnegative");
}

PhaseState make_state(std::vector<double> phases, double t, std::int64_t j) {
  PhaseState s{std::move(phases), t, j};
  s.validate();
  return s;
}

CycleTopology::CycleTopology(std::size_t n, Direction direction, double coupling)
    : n_(n), direction_(direction), coupling_(coupling) {
  if (n < kMinNodes) throw DomainError("a ring needs at least 4 nodes, got " + std::to_string(n));
  if (!(coupling > 0.0 && coupling <= 1.0)) {
    throw DomainError("coupling strength must lie in (0, 1], got " + std::to_string(coupling));
  }
}

std::vector<NodeIndex> CycleTopology::receivers(NodeIndex firing) const {
  if (firing >= n_) throw DomainError("node index out of range");
  std::vector<NodeIndex> out{(firing + 1) % n_};
  if (direction_ == Direction::Bidirectional) out.push_back((firing + n_ - 1) % n_);
  return out;
}

double CycleTopology::weight(NodeIndex receiver, NodeIndex sender) const {
  if (receiver >= n_ || sender >= n_) throw DomainError("node index out of range");
  if (receiver == (sender + 1) % n_) return coupling_;
  if (direction_ == Direction::Bidirectional && sender == (receiver + 1) % n_) return coupling_;
  return 0.0;
}

PrcSpec::PrcSpec(TiePolicy tie, std::vector<double> refractory)
    : tie_(tie), refractory_(std::move(refractory)) {
  for (double r : refractory_) {
    if (!(r >= 0.0 && r <= kTwoPi)) {
      throw DomainError("refractory length outside [0, 2pi]: " + std::to_string(r));
    }
  }
}

double PrcSpec::refractory(NodeIndex node) const {
  return node < refractory_.size() ? refractory_[node] : 0.0;
}

PrcSpec PrcSpec::with_refractory(std::size_t n, NodeIndex node, double length) const {
  if (node >= n) throw DomainError("refractory node index out of range");
  std::vector<double> r = refractory_;
  if (r.size() < n) r.resize(n, 0.0);
  r[node] = length;
  return PrcSpec(tie_, std::move(r));
}

NaturalFrequency::NaturalFrequency(double w) : w_(w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("natural frequency must be positive");
}

double DistanceVector::length() const {
  return std::accumulate(components.begin(), components.end(), 0.0);
}

double DistanceVector::max() const {
  return components.empty() ? 0.0 : *std::max_element(components.begin(), components.end());
}

}  // namespace pco
