#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "pco/analysis.hpp"
#include "pco/errors.hpp"

namespace pco {
namespace {

constexpr long kMaxRoundProducts = 1'000'000;
constexpr double kColumnAgreement = 1e-12;
constexpr double kLabelTolerance = 1e-9;

}  // namespace

TransitionMatrix transition_matrix(NodeIndex firing, std::size_t n, double l, Direction direction) {
  if (n < kMinNodes) throw DomainError("transition matrices need n >= 4");
  if (firing >= n) throw DomainError("firing index out of range");
  if (!(l > 0.0 && l <= 1.0)) throw DomainError("coupling must lie in (0, 1]");

  // Component k of V is the gap between node k and node k+1.
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
  // (firing + k) mod n for k in [-2, 1].
  const auto idx = [&](int k) {
    return static_cast<Eigen::Index>((firing + n + static_cast<std::size_t>(k + 2) - 2) % n);
  };

  // The gap ahead of the firing node shrinks by (1 - l); the receiver's
  // displacement is added to the next gap along.
  c(idx(0), idx(0)) = 1.0 - l;
  c(idx(1), idx(0)) = l;
  if (direction == Direction::Bidirectional) {
    // Same on the trailing side: gap i-1 shrinks, gap i-2 absorbs the shift.
    c(idx(-1), idx(-1)) = 1.0 - l;
    c(idx(-2), idx(-1)) = l;
  }
  return {std::move(c), firing, direction};
}

std::vector<NodeIndex> ascending_order(std::size_t n) {
  std::vector<NodeIndex> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

std::vector<NodeIndex> descending_order(std::size_t n) {
  std::vector<NodeIndex> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = (n - i) % n;
  return order;
}

Eigen::VectorXd equilibrium_gamma(std::size_t n, double l, Direction direction,
                                  std::span<const NodeIndex> order) {
  if (!(l > 0.0 && l < 1.0)) throw DomainError("equilibrium_gamma requires l in (0, 1)");
  if (order.size() != n) throw DomainError("firing order must list every node once");
  std::vector<bool> seen(n, false);
  for (NodeIndex k : order) {
    if (k >= n || seen[k]) throw DomainError("firing order must be a permutation of the nodes");
    seen[k] = true;
  }

  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd round = Eigen::MatrixXd::Identity(dim, dim);
  for (NodeIndex k : order) round = transition_matrix(k, n, l, direction).entries * round;

  Eigen::MatrixXd product = round;
  for (long iter = 1; iter <= kMaxRoundProducts; ++iter) {
    const double disagreement =
        (product.rowwise().maxCoeff() - product.rowwise().minCoeff()).maxCoeff();
    if (disagreement <= kColumnAgreement) {
      Eigen::VectorXd gamma = product.col(0);
      if (std::abs(gamma.sum() - 1.0) > 1e-12) {
        throw NumericalError(fmt::format("gamma does not sum to 1 (sum = {:.17g})", gamma.sum()));
      }
      return gamma;
    }
    product = round * product;
  }
  throw NumericalError(
      fmt::format("round product did not converge within {} iterations", kMaxRoundProducts));
}

GammaReport gamma_report(std::size_t n, double l, Direction direction, bool ascending) {
  GammaReport r;
  r.n = n;
  r.l = l;
  r.direction = direction;
  r.ascending = ascending;
  if (direction == Direction::Bidirectional) {
    r.delta_case = DeltaCase::BiWorst;
  } else {
    r.delta_case = ascending ? DeltaCase::UniWorstU1 : DeltaCase::UniU2NoRefractory;
  }
  r.delta = solve_delta(n, l, r.delta_case);

  const auto order = ascending ? ascending_order(n) : descending_order(n);
  const Eigen::VectorXd gamma = equilibrium_gamma(n, l, direction, order);
  r.sorted.assign(gamma.data(), gamma.data() + gamma.size());
  std::sort(r.sorted.begin(), r.sorted.end());
  r.sum = gamma.sum();
  r.max_entry = r.sorted.back();

  const double keep = 1.0 - l;
  for (double v : r.sorted) {
    if (std::abs(v - r.delta) <= kLabelTolerance) {
      r.labels.emplace_back("delta");
    } else if (std::abs(v - keep * r.delta) <= kLabelTolerance) {
      r.labels.emplace_back("(1-l)delta");
    } else if (std::abs(v - r.delta / keep) <= kLabelTolerance) {
      r.labels.emplace_back("delta/(1-l)");
    } else {
      r.labels.emplace_back("other");
    }
  }
  return r;
}

std::string format_gamma_report(const GammaReport& r) {
  std::string out = fmt::format("n={} direction={} l={:.17g} order={}\n", r.n,
                                to_string(r.direction), r.l,
                                r.ascending ? "ascending" : "descending");
  out += fmt::format("delta={:.17g}\n", r.delta);
  out += fmt::format("sum={:.17g}\n", r.sum);
  out += "rank,value,class\n";
  for (std::size_t k = 0; k < r.sorted.size(); ++k) {
    out += fmt::format("{},{:.17g},{}\n", k + 1, r.sorted[k], r.labels[k]);
  }
  out += fmt::format("max_entry={:.17g} exceeds_half={}\n", r.max_entry,
                     r.max_entry > 0.5 ? "true" : "false");
  return out;
}

}  // namespace pco
